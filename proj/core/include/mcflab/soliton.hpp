#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "mcflab/analytic.hpp"
#include "mcflab/mesh.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/vertex_geometry.hpp"

namespace mcflab {

// Per-vertex (or per-sample) residual with summaries over the interior.
// Mesh summaries are area-weighted; analytic grids are sample-uniform.
struct ResidualField {
  Eigen::VectorXd values;
  std::vector<char> interior;
  FieldSummary summary;
};

// residual of H = <x,n>/2
ResidualField shrinker_residual(const TriangleMesh& mesh,
                                const VertexGeometry& geom,
                                double collar = 1.0);
ResidualField shrinker_residual(const AnalyticSurface& surface,
                                int grid_per_axis = 64);

// residual of H = -<direction,n>
ResidualField translator_residual(const TriangleMesh& mesh,
                                  const VertexGeometry& geom,
                                  const Eigen::Vector3d& direction =
                                      Eigen::Vector3d::UnitZ(),
                                  double collar = 1.0);
ResidualField translator_residual(const AnalyticSurface& surface,
                                  int grid_per_axis = 64);

enum class Identity {
  LH_eq_H,         // L H = H
  Lw_eq_halfw,     // L <V,n> = <V,n>/2
  Simons_shrinker, // drift-Laplacian of |A|^2 = |A|^2 - 2|A|^4 + 2|grad A|^2
  Lfrak_w_zero,    // translator: Lfrak <V,n> = 0
  Lfrak_A2,        // translator: Lfrak |A|^2 vs the two candidate tails
};

std::string identity_name(Identity id);

struct IdentityCandidate {
  std::string rhs;  // description of the candidate right-hand side
  FieldSummary summary;
};

struct IdentityReport {
  std::string name;
  ResidualField residual;          // winning candidate for Lfrak_A2
  int excluded = 0;                // H=0 or flagged vertices
  std::vector<IdentityCandidate> candidates;  // Lfrak_A2 determination
  std::string verdict;             // Lfrak_A2: which tail the data satisfies
};

// Closed-form verification on the analytic catalog. Simons_shrinker and
// Lfrak_A2 need |grad A|^2 in closed form and are analytic-only by default.
IdentityReport verify_identity(const AnalyticSurface& surface, Identity id,
                               const Eigen::VectorXd& V = {},
                               int grid_per_axis = 64);

// Discrete verification with the assembled operators. The Simons and
// Lfrak_A2 checks estimate |grad A|^2 from parallel-transported one-ring
// differences and sit behind `experimental`.
IdentityReport verify_identity(const TriangleMesh& mesh,
                               const VertexGeometry& geom,
                               const DriftOperators& ops, Identity id,
                               const Eigen::Vector3d& V = Eigen::Vector3d::UnitZ(),
                               double collar = 1.0, bool experimental = false);

// tau = A/H with one-ring finite differences in parallel-transported frames.
struct TauField {
  std::vector<Eigen::Matrix3d> tau;  // ambient, tangent-plane supported
  Eigen::VectorXd trace;             // = 1 wherever defined
  Eigen::VectorXd grad_norm;         // |grad tau| estimate
  std::vector<char> defined;
  FieldSummary grad_summary;
  int excluded_below_floor = 0;
  std::optional<double> equation_residual_linf;  // experimental mesh mode
};

TauField tau_field(const TriangleMesh& mesh, const VertexGeometry& geom,
                   double h_floor = 1e-6, double collar = 1.0,
                   bool experimental_equation = false);

struct AnalyticTauReport {
  Eigen::VectorXd eigenvalues;
  double trace = 0;
  double grad_norm = 0;
  double equation_residual = 0;
};

AnalyticTauReport tau_field(const AnalyticSurface& surface,
                            const Eigen::VectorXd& params);

// Fitted generalized cylinder S^k x R^(2-k): the measurable form of the
// rigidity conclusions for surfaces in 3-space.
struct CylinderFit {
  int k = -1;  // -1 when indeterminate
  bool indeterminate = false;
  Eigen::Vector3d spectrum = Eigen::Vector3d::Zero();  // averaged |curvatures|
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::MatrixX3d axis;     // (2-k) rows spanning the flat directions
  double radius = 0;
  double deviation = 0;      // max vertex distance to the fitted model
  double h_deviation = 0;    // max |H - sqrt(k/2)| over the interior
};

CylinderFit cylinder_fit(const TriangleMesh& mesh, const VertexGeometry& geom,
                         double collar = 1.0);

}  // namespace mcflab
