#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "mcflab/analytic.hpp"
#include "mcflab/mesh.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/soliton.hpp"
#include "mcflab/vertex_geometry.hpp"

namespace mcflab {

// Numerical exercise of a curvature-estimate theorem: hypothesis check over
// the sampled region, the per-vertex ratio the theorem bounds, and the
// empirical constant (its supremum). Hypothesis failures never abort: the
// ratios are still reported on the subregion where the hypothesis holds.
struct AuditReport {
  std::string theorem;
  double R = 0;
  double delta = 0;
  Eigen::Vector3d x0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d V = Eigen::Vector3d::UnitZ();

  int region_count = 0;            // sampled vertices in B_R (collar excluded)
  int hypothesis_violations = 0;
  double hypothesis_fraction = 1;  // holds / region_count
  bool hypothesis_ok = true;

  Eigen::VectorXd ratio;           // the audited quantity per vertex
  std::vector<char> ratio_region;
  double empirical_C = 0;
  int argmax = -1;
  int excluded = 0;                // below-floor denominators

  std::optional<double> precheck_residual_linf;  // translator audits
  std::optional<double> user_C;
  std::optional<bool> pass;
};

// |A|(x) <= C R/(R-|x|) H(x) on B_{R-1} given H >= delta on B_R.
AuditReport audit_mean_convex_estimate(const TriangleMesh& mesh,
                                       const VertexGeometry& geom, double R,
                                       double delta, double collar = 1.0,
                                       std::optional<double> user_C = {});

// |A| <= C on B_{R/2}(x0) given w = <V,n> >= delta on B_R(x0).
AuditReport audit_graphical_estimate(
    const TriangleMesh& mesh, const VertexGeometry& geom,
    const Eigen::Vector3d& V, double R, double delta,
    const Eigen::Vector3d& x0 = Eigen::Vector3d::Zero(), double collar = 1.0,
    std::optional<double> user_C = {});

// translator estimate |A|^2(x) <= C (1/R + 1/R^2) w^2(x) on B_{R/2}(x0);
// the translator residual is checked first and attached.
AuditReport audit_translator_estimate(
    const TriangleMesh& mesh, const VertexGeometry& geom,
    const Eigen::Vector3d& V, double R, double delta,
    const Eigen::Vector3d& x0 = Eigen::Vector3d::Zero(), double collar = 1.0,
    std::optional<double> user_C = {});

// empirical C(R) as R grows: bounded on genuine translators, with hypothesis
// failure kicking in before C(R) can diverge on the grim reaper.
std::vector<AuditReport> audit_translator_sweep(
    const TriangleMesh& mesh, const VertexGeometry& geom,
    const Eigen::Vector3d& V, const std::vector<double>& Rs, double delta,
    const Eigen::Vector3d& x0 = Eigen::Vector3d::Zero(), double collar = 1.0);

// |A| <= C (1 + |x|) on B_{R-1} given H > 0 on B_R.
AuditReport check_growth_bound(const TriangleMesh& mesh,
                               const VertexGeometry& geom, double R,
                               double collar = 1.0);

// ---------------------------------------------------------------------------
// Cutoff machinery
// ---------------------------------------------------------------------------

// Lap phi = 24 mu |(x-x0)^T|^2 - 6 n mu^2 + 6 mu^2 H <x-x0, n> for the cutoff
// phi = (mu_+)^3, mu = rho^2 - |x-x0|^2, on shrinkers; plus the pointwise
// bound |Lap phi| <= (24 + 6n) rho^4 + 3 rho^3 |x|.
struct CutoffIdentityReport {
  double precheck_residual_linf = 0;
  bool precheck_ok = true;
  bool empty_region = false;
  Eigen::VectorXd mu, lhs, rhs;  // per vertex / sample
  std::vector<char> support;     // mu > 0 (and interior, collar excluded)
  FieldSummary residual;         // lhs - rhs over the support
  double bound_margin_min = 0;   // min over support of bound - |rhs|
  bool bound_holds = true;
};

CutoffIdentityReport verify_cutoff_identity(const TriangleMesh& mesh,
                                            const VertexGeometry& geom,
                                            const DriftOperators& ops,
                                            const Eigen::Vector3d& x0,
                                            double rho, double collar = 1.0,
                                            double precheck_tol = 1e-2);

CutoffIdentityReport verify_cutoff_identity(const AnalyticSurface& surface,
                                            const Eigen::VectorXd& x0,
                                            double rho,
                                            int grid_per_axis = 64);

// The proof's barrier construction: v = 1/H, h = v^2/(1 - k v^2) with
// k = 1/(2 v0^2), f = |A|^2 h, F = phi f, located maximum y0 and the ratio
// F(y0) / (rho^6 + R rho^5 + R^2 rho^4) with R = |x0| + rho.
struct CutoffScan {
  Eigen::VectorXd x0_full;  // ambient center (3-d for meshes)
  double rho = 0, delta = 0, v0 = 0, k = 0;
  Eigen::VectorXd mu, phi, v, h, f, F;
  std::vector<char> admitted;  // in-ball, interior, H >= delta
  int hypothesis_violations = 0;
  int y0 = -1;
  Eigen::VectorXd y0_point;
  double F_y0 = 0;
  double R = 0;
  double bound_ratio = 0;
  std::optional<double> v_equation_linf;  // analytic shrinkers only
};

CutoffScan scan_phi_f_max(const TriangleMesh& mesh, const VertexGeometry& geom,
                          const Eigen::Vector3d& x0, double rho, double delta,
                          double collar = 1.0);

CutoffScan scan_phi_f_max(const AnalyticSurface& surface,
                          const Eigen::VectorXd& x0, double rho, double delta,
                          int grid_per_axis = 64);

}  // namespace mcflab
