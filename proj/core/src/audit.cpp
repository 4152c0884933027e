#include "mcflab/audit.hpp"

#include <cmath>
#include <limits>

namespace mcflab {

namespace {

constexpr double kWFloor = 1e-6;  // denominator floor for w-ratios

std::vector<char> ball_mask(const TriangleMesh& mesh,
                            const std::vector<char>& interior,
                            const Eigen::Vector3d& center, double radius) {
  std::vector<char> mask(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i)
    mask[i] = interior[i] &&
              (Eigen::Vector3d(mesh.V.row(i)) - center).norm() <= radius;
  return mask;
}

void take_sup(double value, int index, double& best, int& argmax) {
  if (argmax < 0 || value > best) {
    best = value;
    argmax = index;
  }
}

}  // namespace

AuditReport audit_mean_convex_estimate(const TriangleMesh& mesh,
                                       const VertexGeometry& geom, double R,
                                       double delta, double collar,
                                       std::optional<double> user_C) {
  if (R <= 2) throw Error("audit_mean_convex_estimate: need R > 2");
  if (delta <= 0) throw Error("audit_mean_convex_estimate: need delta > 0");
  AuditReport rep;
  rep.theorem = "mean_convex_curvature_estimate";
  rep.R = R;
  rep.delta = delta;

  const auto interior = mesh.interior_mask(collar);
  const auto in_R = ball_mask(mesh, interior, Eigen::Vector3d::Zero(), R);
  const auto in_Rm1 =
      ball_mask(mesh, interior, Eigen::Vector3d::Zero(), R - 1.0);

  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_R[i]) continue;
    ++rep.region_count;
    if (geom.H[i] < delta) ++rep.hypothesis_violations;
  }
  if (rep.region_count == 0)
    throw Error("audit_mean_convex_estimate: empty sample in B_R");
  rep.hypothesis_fraction =
      1.0 - static_cast<double>(rep.hypothesis_violations) / rep.region_count;
  rep.hypothesis_ok = rep.hypothesis_violations == 0;

  rep.ratio.setConstant(mesh.n_vertices(),
                        std::numeric_limits<double>::quiet_NaN());
  rep.ratio_region.assign(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_Rm1[i]) continue;
    if (geom.H[i] < delta) continue;  // ratios on the valid subregion only
    const double xnorm = mesh.V.row(i).norm();
    rep.ratio[i] =
        std::sqrt(geom.A2[i]) * (R - xnorm) / (R * geom.H[i]);
    rep.ratio_region[i] = 1;
    take_sup(rep.ratio[i], i, rep.empirical_C, rep.argmax);
  }
  rep.user_C = user_C;
  if (user_C) rep.pass = rep.hypothesis_ok && rep.empirical_C <= *user_C;
  return rep;
}

AuditReport audit_graphical_estimate(const TriangleMesh& mesh,
                                     const VertexGeometry& geom,
                                     const Eigen::Vector3d& V, double R,
                                     double delta, const Eigen::Vector3d& x0,
                                     double collar,
                                     std::optional<double> user_C) {
  if (delta <= 0) throw Error("audit_graphical_estimate: need delta > 0");
  AuditReport rep;
  rep.theorem = "graphical_curvature_estimate";
  rep.R = R;
  rep.delta = delta;
  rep.V = V.normalized();
  rep.x0 = x0;

  const auto interior = mesh.interior_mask(collar);
  const auto in_R = ball_mask(mesh, interior, x0, R);
  const auto in_half = ball_mask(mesh, interior, x0, 0.5 * R);

  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_R[i]) continue;
    ++rep.region_count;
    if (rep.V.dot(geom.normals.row(i)) < delta) ++rep.hypothesis_violations;
  }
  if (rep.region_count == 0)
    throw Error("audit_graphical_estimate: empty sample in B_R");
  rep.hypothesis_fraction =
      1.0 - static_cast<double>(rep.hypothesis_violations) / rep.region_count;
  rep.hypothesis_ok = rep.hypothesis_violations == 0;

  rep.ratio.setConstant(mesh.n_vertices(),
                        std::numeric_limits<double>::quiet_NaN());
  rep.ratio_region.assign(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_half[i]) continue;
    rep.ratio[i] = std::sqrt(geom.A2[i]);
    rep.ratio_region[i] = 1;
    take_sup(rep.ratio[i], i, rep.empirical_C, rep.argmax);
  }
  rep.user_C = user_C;
  if (user_C) rep.pass = rep.hypothesis_ok && rep.empirical_C <= *user_C;
  return rep;
}

AuditReport audit_translator_estimate(const TriangleMesh& mesh,
                                      const VertexGeometry& geom,
                                      const Eigen::Vector3d& V, double R,
                                      double delta, const Eigen::Vector3d& x0,
                                      double collar,
                                      std::optional<double> user_C) {
  if (delta <= 0) throw Error("audit_translator_estimate: need delta > 0");
  AuditReport rep;
  rep.theorem = "translator_curvature_estimate";
  rep.R = R;
  rep.delta = delta;
  rep.V = V.normalized();
  rep.x0 = x0;

  rep.precheck_residual_linf =
      translator_residual(mesh, geom, Eigen::Vector3d::UnitZ(), collar)
          .summary.linf;

  const auto interior = mesh.interior_mask(collar);
  const auto in_R = ball_mask(mesh, interior, x0, R);
  const auto in_half = ball_mask(mesh, interior, x0, 0.5 * R);

  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_R[i]) continue;
    ++rep.region_count;
    if (rep.V.dot(geom.normals.row(i)) < delta) ++rep.hypothesis_violations;
  }
  if (rep.region_count == 0)
    throw Error("audit_translator_estimate: empty sample in B_R(x0)");
  rep.hypothesis_fraction =
      1.0 - static_cast<double>(rep.hypothesis_violations) / rep.region_count;
  rep.hypothesis_ok = rep.hypothesis_violations == 0;

  const double prefactor = 1.0 / R + 1.0 / (R * R);
  rep.ratio.setConstant(mesh.n_vertices(),
                        std::numeric_limits<double>::quiet_NaN());
  rep.ratio_region.assign(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_half[i]) continue;
    const double w = rep.V.dot(geom.normals.row(i));
    if (std::abs(w) < kWFloor) {
      ++rep.excluded;
      continue;
    }
    rep.ratio[i] = geom.A2[i] / (prefactor * w * w);
    rep.ratio_region[i] = 1;
    take_sup(rep.ratio[i], i, rep.empirical_C, rep.argmax);
  }
  rep.user_C = user_C;
  if (user_C) rep.pass = rep.hypothesis_ok && rep.empirical_C <= *user_C;
  return rep;
}

std::vector<AuditReport> audit_translator_sweep(
    const TriangleMesh& mesh, const VertexGeometry& geom,
    const Eigen::Vector3d& V, const std::vector<double>& Rs, double delta,
    const Eigen::Vector3d& x0, double collar) {
  std::vector<AuditReport> out;
  out.reserve(Rs.size());
  for (double R : Rs)
    out.push_back(
        audit_translator_estimate(mesh, geom, V, R, delta, x0, collar));
  return out;
}

AuditReport check_growth_bound(const TriangleMesh& mesh,
                               const VertexGeometry& geom, double R,
                               double collar) {
  AuditReport rep;
  rep.theorem = "linear_growth_bound";
  rep.R = R;

  const auto interior = mesh.interior_mask(collar);
  const auto in_R = ball_mask(mesh, interior, Eigen::Vector3d::Zero(), R);
  const auto in_Rm1 =
      ball_mask(mesh, interior, Eigen::Vector3d::Zero(), R - 1.0);

  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_R[i]) continue;
    ++rep.region_count;
    if (!(geom.H[i] > 0)) ++rep.hypothesis_violations;
  }
  if (rep.region_count == 0)
    throw Error("check_growth_bound: empty sample in B_R");
  rep.hypothesis_fraction =
      1.0 - static_cast<double>(rep.hypothesis_violations) / rep.region_count;
  rep.hypothesis_ok = rep.hypothesis_violations == 0;

  rep.ratio.setConstant(mesh.n_vertices(),
                        std::numeric_limits<double>::quiet_NaN());
  rep.ratio_region.assign(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!in_Rm1[i]) continue;
    rep.ratio[i] = std::sqrt(geom.A2[i]) / (1.0 + mesh.V.row(i).norm());
    rep.ratio_region[i] = 1;
    take_sup(rep.ratio[i], i, rep.empirical_C, rep.argmax);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cutoff machinery
// ---------------------------------------------------------------------------

namespace {

double cutoff_rhs(double mu, double n_dim, double H, double xmx0_dot_n,
                  double xT2) {
  return 24.0 * mu * xT2 - 6.0 * n_dim * mu * mu +
         6.0 * mu * mu * H * xmx0_dot_n;
}

double cutoff_bound(double rho, double n_dim, double xnorm) {
  return (24.0 + 6.0 * n_dim) * std::pow(rho, 4) +
         3.0 * std::pow(rho, 3) * xnorm;
}

}  // namespace

CutoffIdentityReport verify_cutoff_identity(const TriangleMesh& mesh,
                                            const VertexGeometry& geom,
                                            const DriftOperators& ops,
                                            const Eigen::Vector3d& x0,
                                            double rho, double collar,
                                            double precheck_tol) {
  if (rho <= 0) throw Error("verify_cutoff_identity: rho must be positive");
  CutoffIdentityReport rep;
  rep.precheck_residual_linf =
      shrinker_residual(mesh, geom, collar).summary.linf;
  rep.precheck_ok = rep.precheck_residual_linf <= precheck_tol;

  const int nv = mesh.n_vertices();
  Eigen::VectorXd phi(nv);
  rep.mu.resize(nv);
  for (int i = 0; i < nv; ++i) {
    rep.mu[i] = rho * rho - (Eigen::Vector3d(mesh.V.row(i)) - x0).squaredNorm();
    phi[i] = std::pow(std::max(rep.mu[i], 0.0), 3);
  }
  rep.lhs = ops.laplacian * phi;

  const auto interior = mesh.interior_mask(collar);
  rep.support.assign(nv, 0);
  rep.rhs.setZero(nv);
  rep.bound_margin_min = std::numeric_limits<double>::infinity();
  int in_support = 0;
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < nv; ++i) {
    if (!interior[i] || rep.mu[i] <= 0) continue;
    const Eigen::Vector3d x = mesh.V.row(i), n = geom.normals.row(i);
    const Eigen::Vector3d d = x - x0;
    const double dn = d.dot(n);
    const double xT2 = (d - dn * n).squaredNorm();
    rep.rhs[i] = cutoff_rhs(rep.mu[i], 2.0, geom.H[i], dn, xT2);
    rep.support[i] = 1;
    ++in_support;
    diff[i] = rep.lhs[i] - rep.rhs[i];
    const double margin = cutoff_bound(rho, 2.0, x.norm()) - std::abs(rep.rhs[i]);
    rep.bound_margin_min = std::min(rep.bound_margin_min, margin);
  }
  if (in_support == 0) {
    rep.empty_region = true;
    rep.bound_margin_min = 0;
    return rep;
  }
  rep.residual = summarize(diff, rep.support, geom.area);
  rep.bound_holds = rep.bound_margin_min >= 0;
  return rep;
}

CutoffIdentityReport verify_cutoff_identity(const AnalyticSurface& surface,
                                            const Eigen::VectorXd& x0,
                                            double rho, int grid_per_axis) {
  if (rho <= 0) throw Error("verify_cutoff_identity: rho must be positive");
  if (!surface.supports_closed_calculus())
    throw Error("verify_cutoff_identity: no closed-form calculus here");
  if (x0.size() != surface.ambient_dim())
    throw Error("verify_cutoff_identity: x0 has wrong dimension");

  CutoffIdentityReport rep;
  rep.precheck_residual_linf =
      shrinker_residual(surface, grid_per_axis).summary.linf;
  rep.precheck_ok = rep.precheck_residual_linf <= 1e-10;

  const auto grid = surface.default_grid(grid_per_axis);
  const long m = static_cast<long>(grid.size());
  const double n_dim = surface.dim();
  rep.mu.resize(m);
  rep.lhs.setZero(m);
  rep.rhs.setZero(m);
  rep.support.assign(grid.size(), 0);
  rep.bound_margin_min = std::numeric_limits<double>::infinity();
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(m);
  int in_support = 0;
  for (long i = 0; i < m; ++i) {
    const Eigen::VectorXd& p = grid[static_cast<size_t>(i)];
    const SurfaceSample s = surface.sample(p);
    const Eigen::VectorXd d = s.position - x0;
    rep.mu[i] = rho * rho - d.squaredNorm();
    if (rep.mu[i] <= 0) continue;
    rep.support[static_cast<size_t>(i)] = 1;
    ++in_support;
    // Lap mu = -Lap|x|^2 + 2 Lap<x,x0>, grad mu = -2 (x-x0)^T
    const double lap_mu = -surface.lap_x2(p) + 2.0 * surface.lap_linear(p, x0);
    const double dn = d.dot(s.normal);
    const double xT2 = (d - dn * s.normal).squaredNorm();
    rep.lhs[i] = 3.0 * rep.mu[i] * rep.mu[i] * lap_mu +
                 6.0 * rep.mu[i] * 4.0 * xT2;
    rep.rhs[i] = cutoff_rhs(rep.mu[i], n_dim, s.H, dn, xT2);
    diff[i] = rep.lhs[i] - rep.rhs[i];
    const double margin =
        cutoff_bound(rho, n_dim, s.position.norm()) - std::abs(rep.rhs[i]);
    rep.bound_margin_min = std::min(rep.bound_margin_min, margin);
  }
  if (in_support == 0) {
    rep.empty_region = true;
    rep.bound_margin_min = 0;
    return rep;
  }
  rep.residual = summarize(diff, rep.support, Eigen::VectorXd());
  rep.bound_holds = rep.bound_margin_min >= 0;
  return rep;
}

// ---------------------------------------------------------------------------
// phi f scan
// ---------------------------------------------------------------------------

namespace {

void barrier_fields(double delta, double A2, double v_val, long i,
                    CutoffScan& scan) {
  const double y = v_val * v_val;
  const double denom = 1.0 - scan.k * y;
  if (denom <= 0)
    throw Error(
        "scan_phi_f_max: h(v^2) undefined (1 - k v^2 <= 0); this cannot "
        "happen when H >= delta");
  scan.v[i] = v_val;
  scan.h[i] = y / denom;
  scan.f[i] = A2 * scan.h[i];
  scan.F[i] = scan.phi[i] * scan.f[i];
  (void)delta;
}

void finish_scan(CutoffScan& scan) {
  scan.R = scan.x0_full.norm() + scan.rho;
  const double denom = std::pow(scan.rho, 6) + scan.R * std::pow(scan.rho, 5) +
                       scan.R * scan.R * std::pow(scan.rho, 4);
  scan.bound_ratio = scan.F_y0 / denom;
}

}  // namespace

CutoffScan scan_phi_f_max(const TriangleMesh& mesh, const VertexGeometry& geom,
                          const Eigen::Vector3d& x0, double rho, double delta,
                          double collar) {
  if (rho <= 0 || delta <= 0)
    throw Error("scan_phi_f_max: need rho, delta > 0");
  CutoffScan scan;
  scan.x0_full = x0;
  scan.rho = rho;
  scan.delta = delta;
  scan.v0 = 1.0 / delta;
  scan.k = 1.0 / (2.0 * scan.v0 * scan.v0);

  const int nv = mesh.n_vertices();
  scan.mu.resize(nv);
  scan.phi.resize(nv);
  scan.v.setZero(nv);
  scan.h.setZero(nv);
  scan.f.setZero(nv);
  scan.F.setZero(nv);
  scan.admitted.assign(nv, 0);

  const auto interior = mesh.interior_mask(collar);
  for (int i = 0; i < nv; ++i) {
    scan.mu[i] = rho * rho - (Eigen::Vector3d(mesh.V.row(i)) - x0).squaredNorm();
    scan.phi[i] = std::pow(std::max(scan.mu[i], 0.0), 3);
    if (!interior[i] || scan.mu[i] <= 0) continue;
    if (geom.H[i] < delta) {
      ++scan.hypothesis_violations;
      continue;
    }
    scan.admitted[i] = 1;
    barrier_fields(delta, geom.A2[i], 1.0 / geom.H[i], i, scan);
    if (scan.y0 < 0 || scan.F[i] > scan.F_y0) {
      scan.F_y0 = scan.F[i];
      scan.y0 = i;
    }
  }
  if (scan.y0 < 0)
    throw Error("scan_phi_f_max: no admitted vertex in B_rho(x0)");
  scan.y0_point = mesh.V.row(scan.y0);
  finish_scan(scan);
  return scan;
}

CutoffScan scan_phi_f_max(const AnalyticSurface& surface,
                          const Eigen::VectorXd& x0, double rho, double delta,
                          int grid_per_axis) {
  if (rho <= 0 || delta <= 0)
    throw Error("scan_phi_f_max: need rho, delta > 0");
  if (x0.size() != surface.ambient_dim())
    throw Error("scan_phi_f_max: x0 has wrong dimension");
  CutoffScan scan;
  scan.x0_full = x0;
  scan.rho = rho;
  scan.delta = delta;
  scan.v0 = 1.0 / delta;
  scan.k = 1.0 / (2.0 * scan.v0 * scan.v0);

  const auto grid = surface.default_grid(grid_per_axis);
  const long m = static_cast<long>(grid.size());
  scan.mu.resize(m);
  scan.phi.resize(m);
  scan.v.setZero(m);
  scan.h.setZero(m);
  scan.f.setZero(m);
  scan.F.setZero(m);
  scan.admitted.assign(grid.size(), 0);

  double v_eq_linf = 0;
  const bool cylinder = surface.kind() == SurfaceKind::GeneralizedCylinder;
  for (long i = 0; i < m; ++i) {
    const SurfaceSample s = surface.sample(grid[static_cast<size_t>(i)]);
    scan.mu[i] = rho * rho - (s.position - x0).squaredNorm();
    scan.phi[i] = std::pow(std::max(scan.mu[i], 0.0), 3);
    if (scan.mu[i] <= 0) continue;
    if (s.H < delta) {
      ++scan.hypothesis_violations;
      continue;
    }
    scan.admitted[static_cast<size_t>(i)] = 1;
    barrier_fields(delta, s.A2, 1.0 / s.H, i, scan);
    if (scan.y0 < 0 || scan.F[i] > scan.F_y0) {
      scan.F_y0 = scan.F[i];
      scan.y0 = static_cast<int>(i);
    }
    if (cylinder) {
      // v is constant on cylinders: the v-equation collapses to
      // -(|A|^2 - 1/2) v, which closed-form evaluation checks directly
      const double resid = -(s.A2 - 0.5) * scan.v[i];
      v_eq_linf = std::max(v_eq_linf, std::abs(resid));
    }
  }
  if (scan.y0 < 0)
    throw Error("scan_phi_f_max: no admitted sample in B_rho(x0)");
  scan.y0_point = surface.sample(grid[static_cast<size_t>(scan.y0)]).position;
  if (cylinder) scan.v_equation_linf = v_eq_linf;
  finish_scan(scan);
  return scan;
}

}  // namespace mcflab
