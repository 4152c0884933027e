#include "mcflab/entropy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mcflab/soliton.hpp"

namespace mcflab {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton on the
// Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
  // integrate f over [a,b]
  double operator()(double a, double b,
                    const std::function<double(double)>& f) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0;
    for (size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(mid + half * nodes[i]);
    return acc * half;
  }
};

const GaussLegendre& gl128() {
  static const GaussLegendre g(128);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// F-functional
// ---------------------------------------------------------------------------

double f_functional(const TriangleMesh& mesh, const FFunctionalParams& params,
                    QuadratureRule rule) {
  if (!(params.t0 > 0)) throw Error("f_functional: t0 must be positive");
  if (params.x0.size() != 3) throw Error("f_functional: mesh x0 must be 3-d");
  const Eigen::Vector3d x0 = params.x0;
  const double inv4t = 1.0 / (4.0 * params.t0);
  double acc = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Eigen::Vector3d a = mesh.V.row(mesh.F(f, 0)),
                          b = mesh.V.row(mesh.F(f, 1)),
                          c = mesh.V.row(mesh.F(f, 2));
    const double area = mesh.face_area(f);
    if (rule == QuadratureRule::Centroid1) {
      acc += area * std::exp(-((a + b + c) / 3.0 - x0).squaredNorm() * inv4t);
    } else {
      const Eigen::Vector3d m0 = 0.5 * (a + b), m1 = 0.5 * (b + c),
                            m2 = 0.5 * (c + a);
      acc += area / 3.0 *
             (std::exp(-(m0 - x0).squaredNorm() * inv4t) +
              std::exp(-(m1 - x0).squaredNorm() * inv4t) +
              std::exp(-(m2 - x0).squaredNorm() * inv4t));
    }
  }
  return acc / (4.0 * M_PI * params.t0);
}

namespace {

double f_cylinder(const AnalyticSurface& s, const Eigen::VectorXd& x0,
                  double t0) {
  const int k = s.cylinder_k();
  if (k == 0) return std::exp(-x0[0] * x0[0] / (4.0 * t0));
  const double r = std::sqrt(2.0 * k);
  const double xs = x0.head(k + 1).norm();
  const double c = r * xs / (2.0 * t0);
  // integral over S^k(r) of exp(c cos psi) via the polar angle
  const double ring = gl128()(0.0, M_PI, [&](double psi) {
    return std::exp(c * std::cos(psi)) *
           std::pow(std::sin(psi), static_cast<double>(k - 1));
  });
  const double sphere_int = unit_sphere_area(k - 1) * std::pow(r, k) * ring;
  return std::pow(4.0 * M_PI * t0, -0.5 * k) *
         std::exp(-(r * r + xs * xs) / (4.0 * t0)) * sphere_int;
}

double f_grim_reaper(const Eigen::VectorXd& x0, double t0) {
  // product structure: the x2 marginal integrates to sqrt(4 pi t0); the
  // profile curve is integrated in u near the waist and in height g on the
  // nearly vertical tails where sec(u) blows up
  const double a = x0[0], b = x0[2];
  auto curve_term = [&](double u, double g) {
    return std::exp(-((u - a) * (u - a) + (g - b) * (g - b)) / (4.0 * t0));
  };
  const double u_split = 1.0;
  double acc = gl128()(-u_split, u_split, [&](double u) {
    return curve_term(u, -std::log(std::cos(u))) / std::cos(u);
  });
  const double g_lo = -std::log(std::cos(u_split));
  const double g_hi = std::max(g_lo + 5.0, std::abs(b) + 30.0 * std::sqrt(t0));
  for (int branch = 0; branch < 2; ++branch) {
    acc += gl128()(g_lo, g_hi, [&](double g) {
      const double cu = std::exp(-g);
      const double u = std::acos(cu);
      const double ds_dg = 1.0 / std::sqrt(1.0 - cu * cu);
      return curve_term(branch == 0 ? u : -u, g) * ds_dg;
    });
  }
  return acc / std::sqrt(4.0 * M_PI * t0);
}

double f_bowl(const AnalyticSurface& s, const Eigen::VectorXd& x0, double t0) {
  const BowlProfile& prof = s.profile();
  const double r_lo = prof.r[1], r_hi = prof.r_max();
  const double inv4t = 1.0 / (4.0 * t0);
  const double integral = gl128()(r_lo, r_hi, [&](double r) {
    const double u = prof.eval_u(r), du = prof.eval_du(r);
    const double jac = r * std::sqrt(1.0 + du * du);
    return jac * gl128()(0.0, 2.0 * M_PI, [&](double th) {
      const Eigen::Vector3d p(r * std::cos(th), r * std::sin(th), u);
      return std::exp(-(p - Eigen::Vector3d(x0)).squaredNorm() * inv4t);
    });
  });
  return integral / (4.0 * M_PI * t0);
}

}  // namespace

double f_functional(const AnalyticSurface& surface,
                    const FFunctionalParams& params) {
  if (!(params.t0 > 0)) throw Error("f_functional: t0 must be positive");
  if (params.x0.size() != surface.ambient_dim())
    throw Error("f_functional: x0 has wrong dimension");
  switch (surface.kind()) {
    case SurfaceKind::GeneralizedCylinder:
      return f_cylinder(surface, params.x0, params.t0);
    case SurfaceKind::Hyperplane: {
      // Gaussian marginal orthogonal to the plane
      Eigen::VectorXd n = Eigen::VectorXd::Zero(surface.ambient_dim());
      const SurfaceSample s0 =
          surface.sample(Eigen::VectorXd::Zero(surface.dim()));
      n = s0.normal;
      const double d = params.x0.dot(n) - s0.position.dot(n);
      return std::exp(-d * d / (4.0 * params.t0));
    }
    case SurfaceKind::GrimReaperPlane:
      return f_grim_reaper(params.x0, params.t0);
    case SurfaceKind::BowlSoliton:
      return f_bowl(surface, params.x0, params.t0);
  }
  throw Error("f_functional: unreachable");
}

// ---------------------------------------------------------------------------
// Entropy search
// ---------------------------------------------------------------------------

namespace {

// deterministic Nelder-Mead ascent on F(x0, log t0)
struct Simplex {
  int evaluations = 0;

  Eigen::VectorXd maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd start, double scale, int max_iter,
                           double tol, double* best_out) {
    const int d = static_cast<int>(start.size());
    std::vector<Eigen::VectorXd> pts(d + 1, start);
    std::vector<double> val(d + 1);
    for (int i = 0; i < d; ++i) pts[i + 1][i] += scale;
    for (int i = 0; i <= d; ++i) {
      val[i] = f(pts[i]);
      ++evaluations;
    }
    for (int it = 0; it < max_iter; ++it) {
      std::vector<int> order(d + 1);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return val[a] > val[b]; });
      std::vector<Eigen::VectorXd> spts(d + 1);
      std::vector<double> sval(d + 1);
      for (int i = 0; i <= d; ++i) {
        spts[i] = pts[order[i]];
        sval[i] = val[order[i]];
      }
      pts = spts;
      val = sval;
      if (std::abs(val[0] - val[d]) <=
          tol * (std::abs(val[0]) + std::abs(val[d]) + 1e-30))
        break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i) centroid += pts[i];
      centroid /= d;

      auto eval = [&](const Eigen::VectorXd& p) {
        ++evaluations;
        return f(p);
      };
      const Eigen::VectorXd xr = centroid + (centroid - pts[d]);
      const double fr = eval(xr);
      if (fr > val[0]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[d]);
        const double fe = eval(xe);
        if (fe > fr) {
          pts[d] = xe;
          val[d] = fe;
        } else {
          pts[d] = xr;
          val[d] = fr;
        }
      } else if (fr > val[d - 1]) {
        pts[d] = xr;
        val[d] = fr;
      } else {
        const Eigen::VectorXd xc = centroid + 0.5 * (pts[d] - centroid);
        const double fc = eval(xc);
        if (fc > val[d]) {
          pts[d] = xc;
          val[d] = fc;
        } else {
          for (int i = 1; i <= d; ++i) {
            pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
            val[i] = eval(pts[i]);
          }
        }
      }
    }
    int best = 0;
    for (int i = 1; i <= d; ++i)
      if (val[i] > val[best]) best = i;
    *best_out = val[best];
    return pts[best];
  }
};

EntropyResult entropy_impl(
    const std::function<double(const Eigen::VectorXd&, double)>& F,
    const std::function<Eigen::VectorXd(double)>& weighted_centroid,
    int ambient, double length_scale, const EntropySearchConfig& config) {
  EntropyResult res;
  Simplex simplex;

  // log-spaced t0 seeds with Gaussian-centroid x0 initialization
  struct Seed {
    Eigen::VectorXd x0;
    double t0, value;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < config.t0_grid; ++i) {
    const double t0 =
        config.t0_min * std::pow(config.t0_max / config.t0_min,
                                 config.t0_grid == 1
                                     ? 0.5
                                     : static_cast<double>(i) /
                                           (config.t0_grid - 1));
    Seed s;
    s.t0 = t0;
    s.x0 = weighted_centroid(t0);
    s.value = F(s.x0, t0);
    ++simplex.evaluations;
    seeds.push_back(s);
    res.t0_profile.emplace_back(t0, s.value);
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Seed& a, const Seed& b) { return a.value > b.value; });

  const int nstarts = std::min<int>(config.starts, static_cast<int>(seeds.size()));
  res.starts = nstarts;
  double best = -1;
  Eigen::VectorXd best_pt;
  // the configured t0 window is a hard search constraint: below the mesh
  // scale the quadrature of the sharpening Gaussian is meaningless
  const double lt_lo = std::log(config.t0_min), lt_hi = std::log(config.t0_max);
  for (int s = 0; s < nstarts; ++s) {
    Eigen::VectorXd start(ambient + 1);
    start.head(ambient) = seeds[s].x0;
    start[ambient] =
        std::clamp(std::log(seeds[s].t0), lt_lo, lt_hi - 1e-12);
    double val = 0;
    const Eigen::VectorXd pt = simplex.maximize(
        [&](const Eigen::VectorXd& p) {
          if (p[ambient] < lt_lo || p[ambient] > lt_hi) return -1e300;
          return F(p.head(ambient), std::exp(p[ambient]));
        },
        start, 0.1 * length_scale, config.max_iterations, config.simplex_tol,
        &val);
    if (val > best) {
      best = val;
      best_pt = pt;
    }
  }
  res.lambda = best;
  res.argmax.x0 = best_pt.head(ambient);
  res.argmax.t0 = std::exp(best_pt[ambient]);
  res.evaluations = simplex.evaluations;

  // flat-t0 detection (hyperplanes): F barely moves across a 4x scale change
  const double fup = F(res.argmax.x0, res.argmax.t0 * 4.0);
  const double fdn = F(res.argmax.x0, res.argmax.t0 / 4.0);
  res.t0_degenerate =
      std::max(std::abs(fup - best), std::abs(fdn - best)) < 1e-7 * (best + 1e-30);
  return res;
}

}  // namespace

EntropyResult entropy(const TriangleMesh& mesh,
                      const EntropySearchConfig& config) {
  if (mesh.n_faces() == 0) throw Error("entropy: empty surface");
  // area centroid and quadrature points for the weighted centroid seed
  Eigen::Vector3d c0 = Eigen::Vector3d::Zero();
  double area = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const double a = mesh.face_area(f);
    const Eigen::Vector3d cen = (mesh.V.row(mesh.F(f, 0)) +
                                 mesh.V.row(mesh.F(f, 1)) +
                                 mesh.V.row(mesh.F(f, 2))) / 3.0;
    c0 += a * cen;
    area += a;
  }
  c0 /= area;

  auto F = [&](const Eigen::VectorXd& x0, double t0) {
    FFunctionalParams p;
    p.x0 = x0;
    p.t0 = t0;
    return f_functional(mesh, p, config.rule);
  };
  auto centroid = [&](double t0) -> Eigen::VectorXd {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    double wsum = 0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
      const Eigen::Vector3d cen = (mesh.V.row(mesh.F(f, 0)) +
                                   mesh.V.row(mesh.F(f, 1)) +
                                   mesh.V.row(mesh.F(f, 2))) / 3.0;
      const double w =
          mesh.face_area(f) *
          std::exp(-(cen - c0).squaredNorm() / (4.0 * t0));
      acc += w * cen;
      wsum += w;
    }
    return acc / wsum;
  };

  const double scale = std::sqrt(area);
  EntropyResult res = entropy_impl(F, centroid, 3, scale, config);

  // truncation error bar: Gaussian mass of the best-fit model beyond the rim
  if (mesh.has_boundary()) {
    try {
      const VertexGeometry geom = compute_vertex_geometry(mesh);
      const CylinderFit fit = cylinder_fit(mesh, geom);
      const double t0 = res.argmax.t0;
      const Eigen::Vector3d x0 = res.argmax.x0;
      if (fit.k == 1) {
        const Eigen::Vector3d a = fit.axis.row(0);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < mesh.n_vertices(); ++i) {
          const double z = a.dot(Eigen::Vector3d(mesh.V.row(i)) - fit.center);
          lo = std::min(lo, z);
          hi = std::max(hi, z);
        }
        const double z0 = a.dot(x0 - fit.center);
        const double s = 2.0 * std::sqrt(t0);
        const double frac = 0.5 * std::erfc((hi - z0) / s) +
                            0.5 * std::erfc((z0 - lo) / s);
        const double f_inf = std::pow(4.0 * M_PI * t0, -0.5) * 2.0 * M_PI *
                             fit.radius *
                             std::exp(-fit.radius * fit.radius / (4.0 * t0));
        res.truncation_tail = f_inf * frac;
      } else if (fit.k == 0) {
        double rim = 1e300;
        const auto bnd = mesh.boundary_vertices();
        for (int i = 0; i < mesh.n_vertices(); ++i)
          if (bnd[i])
            rim = std::min(rim,
                           (Eigen::Vector3d(mesh.V.row(i)) - x0).norm());
        res.truncation_tail = std::exp(-rim * rim / (4.0 * t0));
      }
    } catch (const Error&) {
      res.truncation_tail = 0;  // no usable fit: no error bar
    }
  }
  return res;
}

EntropyResult entropy(const AnalyticSurface& surface,
                      const EntropySearchConfig& config) {
  const int amb = surface.ambient_dim();
  auto F = [&](const Eigen::VectorXd& x0, double t0) {
    FFunctionalParams p;
    p.x0 = x0;
    p.t0 = t0;
    return f_functional(surface, p);
  };
  auto centroid = [&](double) {
    return Eigen::VectorXd::Zero(amb).eval();
  };
  return entropy_impl(F, centroid, amb, 1.0, config);
}

double cylinder_entropy_closed_form(int n, int k) {
  if (k < 0 || k > n) throw Error("cylinder_entropy_closed_form: need 0<=k<=n");
  if (k == 0) return 1.0;
  return std::pow(4.0 * M_PI, -0.5 * k) * unit_sphere_area(k) *
         std::pow(2.0 * k, 0.5 * k) * std::exp(-0.5 * k);
}

namespace {

template <typename Fn>
Eigen::VectorXd fd_gradient(const Fn& F, const Eigen::VectorXd& x0, double t0,
                            double step) {
  const int d = static_cast<int>(x0.size());
  Eigen::VectorXd grad(d + 1);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[i] += step;
    xm[i] -= step;
    grad[i] = (F(xp, t0) - F(xm, t0)) / (2.0 * step);
  }
  const double lt = std::log(t0);
  grad[d] = (F(x0, std::exp(lt + step)) - F(x0, std::exp(lt - step))) /
            (2.0 * step);
  return grad;
}

}  // namespace

Eigen::VectorXd f_gradient(const AnalyticSurface& surface,
                           const FFunctionalParams& params, double step) {
  return fd_gradient(
      [&](const Eigen::VectorXd& x0, double t0) {
        FFunctionalParams p;
        p.x0 = x0;
        p.t0 = t0;
        return f_functional(surface, p);
      },
      params.x0, params.t0, step);
}

Eigen::VectorXd f_gradient(const TriangleMesh& mesh,
                           const FFunctionalParams& params, double step,
                           QuadratureRule rule) {
  return fd_gradient(
      [&](const Eigen::VectorXd& x0, double t0) {
        FFunctionalParams p;
        p.x0 = x0;
        p.t0 = t0;
        return f_functional(mesh, p, rule);
      },
      params.x0, params.t0, step);
}

}  // namespace mcflab
