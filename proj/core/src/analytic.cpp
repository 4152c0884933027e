#include "mcflab/analytic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcflab/rng.hpp"

namespace mcflab {

double unit_sphere_area(int k) {
  if (k < 0) throw Error("unit_sphere_area: negative k");
  return 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

// ---------------------------------------------------------------------------
// Bowl profile
// ---------------------------------------------------------------------------

namespace {

inline double bowl_rhs(double r, double p) {
  return (1.0 + p * p) * (1.0 - p / r);
}

struct BowlRun {
  std::vector<double> r, u, du;
  bool finite = true;
};

BowlRun integrate_bowl(double r0, double u0, double p0, double r_max,
                       double h) {
  BowlRun run;
  double r = r0, u = u0, p = p0;
  run.r.push_back(r);
  run.u.push_back(u);
  run.du.push_back(p);
  while (r < r_max - 1e-15) {
    const double step = std::min(h, r_max - r);
    const double k1u = p, k1p = bowl_rhs(r, p);
    const double k2u = p + 0.5 * step * k1p,
                 k2p = bowl_rhs(r + 0.5 * step, p + 0.5 * step * k1p);
    const double k3u = p + 0.5 * step * k2p,
                 k3p = bowl_rhs(r + 0.5 * step, p + 0.5 * step * k2p);
    const double k4u = p + step * k3p,
                 k4p = bowl_rhs(r + step, p + step * k3p);
    u += step / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p += step / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    r += step;
    if (!std::isfinite(u) || !std::isfinite(p)) {
      run.finite = false;
      break;
    }
    run.r.push_back(r);
    run.u.push_back(u);
    run.du.push_back(p);
  }
  return run;
}

}  // namespace

BowlProfile bowl_profile(double r_max, double step) {
  if (r_max <= 0 || step <= 0) throw Error("bowl_profile: need r_max, step > 0");
  if (step > 0.25 * r_max) throw Error("bowl_profile: step too large for r_max");

  // series start near the axis: u = r^2/4 + r^4/128 + O(r^6)
  const double r0 = step;
  const double u0 = r0 * r0 / 4.0 + std::pow(r0, 4) / 128.0;
  const double p0 = r0 / 2.0 + std::pow(r0, 3) / 32.0;

  const BowlRun coarse = integrate_bowl(r0, u0, p0, r_max, step);
  const BowlRun fine = integrate_bowl(r0, u0, p0, r_max, 0.5 * step);
  const double disagreement =
      (coarse.finite && fine.finite)
          ? std::abs(coarse.u.back() - fine.u.back()) / 15.0
          : std::numeric_limits<double>::infinity();
  if (!coarse.finite || !fine.finite ||
      disagreement > 1e-6 * std::max(1.0, std::abs(fine.u.back()))) {
    std::ostringstream os;
    os << "bowl_profile: integration step " << step
       << " too large (Richardson disagreement " << disagreement
       << "); suggested step " << step / 4.0;
    throw Error(os.str());
  }

  BowlProfile prof;
  prof.r.push_back(0.0);
  prof.u.push_back(0.0);
  prof.du.push_back(0.0);
  prof.r.insert(prof.r.end(), fine.r.begin(), fine.r.end());
  prof.u.insert(prof.u.end(), fine.u.begin(), fine.u.end());
  prof.du.insert(prof.du.end(), fine.du.begin(), fine.du.end());
  prof.step = 0.5 * step;
  // the Hermite interpolant's curvature error O(step^2) dominates the RK error
  prof.tolerance = std::max(disagreement, prof.step * prof.step);
  return prof;
}

namespace {

struct HermitePiece {
  double ra, L, ua, ub, pa, pb;
};

HermitePiece locate(const BowlProfile& prof, double rq) {
  if (prof.r.size() < 2) throw Error("bowl profile: too few samples");
  if (rq < prof.r.front() - 1e-12 || rq > prof.r.back() + 1e-12)
    throw Error("bowl profile: query radius outside sampled range");
  rq = std::clamp(rq, prof.r.front(), prof.r.back());
  const auto it = std::upper_bound(prof.r.begin(), prof.r.end(), rq);
  size_t i = static_cast<size_t>(std::max<long>(
      0, std::distance(prof.r.begin(), it) - 1));
  i = std::min(i, prof.r.size() - 2);
  return {prof.r[i], prof.r[i + 1] - prof.r[i], prof.u[i], prof.u[i + 1],
          prof.du[i], prof.du[i + 1]};
}

}  // namespace

double BowlProfile::eval_u(double rq) const {
  const auto h = locate(*this, rq);
  const double t = (rq - h.ra) / h.L;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * h.ua + (t3 - 2 * t2 + t) * h.L * h.pa +
         (-2 * t3 + 3 * t2) * h.ub + (t3 - t2) * h.L * h.pb;
}

double BowlProfile::eval_du(double rq) const {
  const auto h = locate(*this, rq);
  const double t = (rq - h.ra) / h.L;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * h.ua + (3 * t2 - 4 * t + 1) * h.L * h.pa +
          (-6 * t2 + 6 * t) * h.ub + (3 * t2 - 2 * t) * h.L * h.pb) /
         h.L;
}

double BowlProfile::eval_ddu(double rq) const {
  const auto h = locate(*this, rq);
  const double t = (rq - h.ra) / h.L;
  return ((12 * t - 6) * h.ua + (6 * t - 4) * h.L * h.pa +
          (-12 * t + 6) * h.ub + (6 * t - 2) * h.L * h.pb) /
         (h.L * h.L);
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

AnalyticSurface AnalyticSurface::generalized_cylinder(int n, int k) {
  if (n < 1) throw Error("generalized_cylinder: dimension must be positive");
  if (k < 0 || k > n)
    throw Error("generalized_cylinder: need 0 <= k <= n, got k=" +
                std::to_string(k) + ", n=" + std::to_string(n));
  AnalyticSurface s;
  s.kind_ = SurfaceKind::GeneralizedCylinder;
  s.n_ = n;
  s.k_ = k;
  s.radius_ = std::sqrt(2.0 * k);
  return s;
}

AnalyticSurface AnalyticSurface::hyperplane(const Eigen::VectorXd& normal,
                                            double offset) {
  if (normal.size() < 2) throw Error("hyperplane: ambient dimension too small");
  const double len = normal.norm();
  if (!(len > 0) || !std::isfinite(len) || !std::isfinite(offset))
    throw Error("hyperplane: normal/offset must be finite and nonzero");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::Hyperplane;
  s.n_ = static_cast<int>(normal.size()) - 1;
  s.plane_normal_ = normal / len;
  s.plane_offset_ = offset;
  // complete to an orthonormal frame; columns 1.. span the plane
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(normal.size(), normal.size());
  m.col(0) = s.plane_normal_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  if ((q.col(0) - s.plane_normal_).norm() > 1.0) q = -q;
  s.plane_basis_ = q.rightCols(s.n_);
  return s;
}

AnalyticSurface AnalyticSurface::grim_reaper_plane() {
  AnalyticSurface s;
  s.kind_ = SurfaceKind::GrimReaperPlane;
  s.n_ = 2;
  return s;
}

AnalyticSurface AnalyticSurface::bowl_soliton(BowlProfile profile) {
  if (profile.r.size() < 4) throw Error("bowl_soliton: profile too short");
  AnalyticSurface s;
  s.kind_ = SurfaceKind::BowlSoliton;
  s.n_ = 2;
  s.profile_ = std::move(profile);
  return s;
}

bool AnalyticSurface::is_shrinker() const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      return true;
    case SurfaceKind::Hyperplane:
      return plane_offset_ == 0.0;
    default:
      return false;
  }
}

bool AnalyticSurface::is_translator() const {
  switch (kind_) {
    case SurfaceKind::GrimReaperPlane:
    case SurfaceKind::BowlSoliton:
      return true;
    case SurfaceKind::Hyperplane:
      return std::abs(plane_normal_[plane_normal_.size() - 1]) < 1e-14;
    default:
      return false;
  }
}

Eigen::VectorXd AnalyticSurface::sphere_unit(
    const Eigen::VectorXd& params) const {
  // hyperspherical angles -> unit vector in R^{k+1}
  Eigen::VectorXd t(k_ + 1);
  double sines = 1.0;
  for (int i = 0; i < k_; ++i) {
    t[i] = sines * std::cos(params[i]);
    sines *= std::sin(params[i]);
  }
  t[k_] = sines;
  if (k_ == 0) t[0] = 1.0;
  return t;
}

SurfaceSample AnalyticSurface::sample(const Eigen::VectorXd& params) const {
  if (params.size() != n_)
    throw Error("sample: expected " + std::to_string(n_) + " parameters");
  SurfaceSample s;
  s.position.setZero(n_ + 1);
  s.normal.setZero(n_ + 1);
  s.principal_curvatures.setZero(n_);

  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder: {
      if (k_ == 0) {
        // S^0 x R^n degenerates to the hyperplane x_1 = 0
        for (int i = 0; i < n_; ++i) s.position[1 + i] = params[i];
        s.normal[0] = 1.0;
        s.H = 0.0;
        s.A2 = 0.0;
        s.gradA2 = 0.0;
        return s;
      }
      const Eigen::VectorXd t = sphere_unit(params.head(k_));
      s.position.head(k_ + 1) = radius_ * t;
      for (int i = 0; i < n_ - k_; ++i) s.position[k_ + 1 + i] = params[k_ + i];
      s.normal.head(k_ + 1) = t;
      s.H = std::sqrt(0.5 * k_);
      for (int i = 0; i < k_; ++i) s.principal_curvatures[i] = 1.0 / radius_;
      s.A2 = 0.5;
      s.gradA2 = 0.0;
      return s;
    }
    case SurfaceKind::Hyperplane: {
      s.position = plane_offset_ * plane_normal_ + plane_basis_ * params;
      s.normal = plane_normal_;
      s.H = 0.0;
      s.A2 = 0.0;
      s.gradA2 = 0.0;
      return s;
    }
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0], y = params[1];
      if (std::abs(u) >= M_PI / 2)
        throw Error("grim reaper: |x1| must be below pi/2");
      const double c = std::cos(u), sn = std::sin(u);
      s.position << u, y, -std::log(c);
      s.normal << -sn, 0.0, c;
      s.H = -c;
      s.principal_curvatures << -c, 0.0;
      s.A2 = c * c;
      s.gradA2 = sn * sn * c * c;
      return s;
    }
    case SurfaceKind::BowlSoliton: {
      const double r = params[0], th = params[1];
      if (r < profile_.r[1])
        throw Error("bowl: radius below first profile sample");
      const double uu = profile_.eval_u(r);
      const double p = profile_.eval_du(r);
      const double pp = profile_.eval_ddu(r);
      const double sq = std::sqrt(1.0 + p * p);
      const double ct = std::cos(th), st = std::sin(th);
      s.position << r * ct, r * st, uu;
      s.normal << -p * ct / sq, -p * st / sq, 1.0 / sq;
      const double k_rad = -pp / (sq * sq * sq);
      const double k_ang = -p / (r * sq);
      s.H = k_rad + k_ang;
      s.principal_curvatures << k_rad, k_ang;
      s.A2 = k_rad * k_rad + k_ang * k_ang;
      return s;
    }
  }
  throw Error("sample: unreachable");
}

std::vector<Eigen::VectorXd> AnalyticSurface::default_grid(
    int per_axis, double extent) const {
  std::vector<Eigen::VectorXd> pts;
  auto linspace = [](double a, double b, int m, int i) {
    return a + (b - a) * (i + 0.5) / m;
  };
  // parameter boxes per kind
  Eigen::VectorXd lo(n_), hi(n_);
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      for (int i = 0; i + 1 < k_; ++i) {
        lo[i] = 0.05;
        hi[i] = M_PI - 0.05;
      }
      if (k_ >= 1) {
        lo[k_ - 1] = 0.0;
        hi[k_ - 1] = 2.0 * M_PI;
      }
      for (int i = k_; i < n_; ++i) {
        lo[i] = -extent;
        hi[i] = extent;
      }
      break;
    case SurfaceKind::Hyperplane:
      lo.setConstant(-extent);
      hi.setConstant(extent);
      break;
    case SurfaceKind::GrimReaperPlane:
      lo << -1.45, -extent;
      hi << 1.45, extent;
      break;
    case SurfaceKind::BowlSoliton:
      lo << profile_.r[1], 0.0;
      hi << profile_.r_max(), 2.0 * M_PI;
      break;
  }
  if (n_ <= 2) {
    if (n_ == 1) {
      for (int i = 0; i < per_axis * per_axis; ++i) {
        Eigen::VectorXd p(1);
        p[0] = linspace(lo[0], hi[0], per_axis * per_axis, i);
        pts.push_back(p);
      }
    } else {
      for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
          Eigen::VectorXd p(2);
          p[0] = linspace(lo[0], hi[0], per_axis, i);
          p[1] = linspace(lo[1], hi[1], per_axis, j);
          pts.push_back(p);
        }
    }
  } else {
    Rng rng(12345);
    for (int i = 0; i < per_axis * per_axis; ++i) {
      Eigen::VectorXd p(n_);
      for (int d = 0; d < n_; ++d) p[d] = rng.uniform(lo[d], hi[d]);
      pts.push_back(p);
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Closed-form tangential calculus
// ---------------------------------------------------------------------------

bool AnalyticSurface::supports_closed_calculus() const {
  return kind_ != SurfaceKind::BowlSoliton;
}

namespace {

[[noreturn]] void unsupported(const char* what) {
  throw Error(std::string("no closed form for ") + what + " on this surface");
}

}  // namespace

double AnalyticSurface::lap_linear(const Eigen::VectorXd& params,
                                   const Eigen::VectorXd& c) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder: {
      if (k_ == 0) return 0.0;
      // degree-1 spherical harmonic on S^k(sqrt(2k)): eigenvalue k/r^2 = 1/2
      const SurfaceSample s = sample(params);
      return -0.5 * s.position.head(k_ + 1).dot(c.head(k_ + 1));
    }
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      return cu * (c[2] * cu - c[0] * su);
    }
    default:
      unsupported("lap_linear");
  }
}

double AnalyticSurface::lap_x2(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      return 2.0 * (n_ - k_);
    case SurfaceKind::Hyperplane:
      return 2.0 * n_;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      const double g = -std::log(cu);
      return 4.0 - 2.0 * u * su * cu + 2.0 * g * cu * cu;
    }
    default:
      unsupported("lap_x2");
  }
}

double AnalyticSurface::w(const Eigen::VectorXd& params,
                          const Eigen::VectorXd& V) const {
  return sample(params).normal.dot(V);
}

double AnalyticSurface::lap_w(const Eigen::VectorXd& params,
                              const Eigen::VectorXd& V) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      if (k_ == 0) return 0.0;
      return -0.5 * w(params, V);
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      return cu * (2.0 * V[0] * su * cu + V[2] * (su * su - cu * cu));
    }
    default:
      unsupported("lap_w");
  }
}

double AnalyticSurface::drift_x_w(const Eigen::VectorXd& params,
                                  const Eigen::VectorXd& V) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      // grad w is tangent to the sphere factor and orthogonal to both the
      // radial position and the axial part
      return 0.0;
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      const double g = -std::log(cu);
      const double dw_ds = cu * (-V[0] * cu - V[2] * su);
      return (u * cu + g * su) * dw_ds;
    }
    default:
      unsupported("drift_x_w");
  }
}

double AnalyticSurface::dirder_w(const Eigen::VectorXd& params,
                                 const Eigen::VectorXd& V,
                                 const Eigen::VectorXd& e) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder: {
      if (k_ == 0) return 0.0;
      const Eigen::VectorXd t = sphere_unit(params.head(k_));
      const double wv = t.dot(V.head(k_ + 1));
      return (e.head(k_ + 1).dot(V.head(k_ + 1)) -
              wv * e.head(k_ + 1).dot(t)) /
             radius_;
    }
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      const double dw_ds = cu * (-V[0] * cu - V[2] * su);
      return (e[0] * cu + e[2] * su) * dw_ds;
    }
    default:
      unsupported("dirder_w");
  }
}

double AnalyticSurface::lap_H(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      return cu * (cu * cu - su * su);
    }
    default:
      unsupported("lap_H");
  }
}

double AnalyticSurface::drift_x_H(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      const double g = -std::log(cu);
      return (u * cu + g * su) * (su * cu);
    }
    default:
      unsupported("drift_x_H");
  }
}

double AnalyticSurface::lap_A2(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      return -2.0 * std::pow(cu, 4) + 4.0 * su * su * cu * cu;
    }
    default:
      unsupported("lap_A2");
  }
}

double AnalyticSurface::drift_x_A2(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      const double g = -std::log(cu);
      return (u * cu + g * su) * (-2.0 * su * cu * cu);
    }
    default:
      unsupported("drift_x_A2");
  }
}

double AnalyticSurface::dirder_A2(const Eigen::VectorXd& params,
                                  const Eigen::VectorXd& e) const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
    case SurfaceKind::Hyperplane:
      return 0.0;
    case SurfaceKind::GrimReaperPlane: {
      const double u = params[0];
      const double cu = std::cos(u), su = std::sin(u);
      return (e[0] * cu + e[2] * su) * (-2.0 * su * cu * cu);
    }
    default:
      unsupported("dirder_A2");
  }
}

bool AnalyticSurface::tau_supported() const {
  switch (kind_) {
    case SurfaceKind::GeneralizedCylinder:
      return k_ >= 1;
    case SurfaceKind::GrimReaperPlane:
      return true;
    default:
      return false;
  }
}

Eigen::VectorXd AnalyticSurface::tau_eigenvalues(
    const Eigen::VectorXd& params) const {
  if (!tau_supported()) unsupported("tau");
  const SurfaceSample s = sample(params);
  return s.principal_curvatures / s.H;
}

double AnalyticSurface::tau_grad_norm(const Eigen::VectorXd&) const {
  if (!tau_supported()) unsupported("tau");
  // A is parallel and H constant on cylinders; on the grim reaper tau is the
  // projector onto the profile direction, parallel for the product metric
  return 0.0;
}

AnalyticSurface make_analytic(SurfaceKind kind, int n, int k,
                              const Eigen::VectorXd& plane_normal,
                              double plane_offset, double bowl_r_max,
                              double bowl_step) {
  switch (kind) {
    case SurfaceKind::GeneralizedCylinder:
      return AnalyticSurface::generalized_cylinder(n, k);
    case SurfaceKind::Hyperplane: {
      Eigen::VectorXd normal = plane_normal;
      if (normal.size() == 0) {
        normal.setZero(n + 1);
        normal[n] = 1.0;
      }
      return AnalyticSurface::hyperplane(normal, plane_offset);
    }
    case SurfaceKind::GrimReaperPlane:
      return AnalyticSurface::grim_reaper_plane();
    case SurfaceKind::BowlSoliton:
      return AnalyticSurface::bowl_soliton(bowl_profile(bowl_r_max, bowl_step));
  }
  throw Error("make_analytic: unknown kind");
}

}  // namespace mcflab
