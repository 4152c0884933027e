#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "mcflab/numeric.hpp"

namespace mcflab {

enum class SurfaceKind {
  GeneralizedCylinder,  // S^k(sqrt(2k)) x R^(n-k), the shrinker cylinders
  Hyperplane,
  GrimReaperPlane,  // x3 = -log cos x1, product with the x2 line
  BowlSoliton,      // rotationally symmetric translator graph
};

struct SurfaceSample {
  Eigen::VectorXd position;
  Eigen::VectorXd normal;  // unit; outward / positive-last-component
  double H = 0;            // sum of principal curvatures w.r.t. normal
  Eigen::VectorXd principal_curvatures;
  double A2 = 0;  // |A|^2
  std::optional<double> gradA2;  // |grad A|^2 where a closed form is known
};

// Rotationally symmetric translator profile u(r), integrated from the smooth
// axis start u ~ r^2/4. Evaluation goes through a cubic Hermite interpolant of
// the integrated samples, so the translator residual of the rotated graph
// measures genuine integration/representation error rather than echoing the
// ODE back.
struct BowlProfile {
  std::vector<double> r, u, du;
  double step = 0;       // sample spacing
  double tolerance = 0;  // combined integration + interpolation error scale

  double r_max() const { return r.empty() ? 0.0 : r.back(); }
  double eval_u(double rq) const;
  double eval_du(double rq) const;
  double eval_ddu(double rq) const;
};

// Integrates u'' = (1 + u'^2)(1 - u'/r). Throws when Richardson disagreement
// between step and step/2 indicates the step is too large.
BowlProfile bowl_profile(double r_max, double step);

// Closed-form soliton catalog entry. Evaluators are pure; parameter vectors
// have dim() entries (angles first for cylinders, then axial coordinates).
class AnalyticSurface {
 public:
  static AnalyticSurface generalized_cylinder(int n, int k);
  static AnalyticSurface hyperplane(const Eigen::VectorXd& normal,
                                    double offset);
  static AnalyticSurface grim_reaper_plane();
  static AnalyticSurface bowl_soliton(BowlProfile profile);

  SurfaceKind kind() const { return kind_; }
  int dim() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  int cylinder_k() const { return k_; }
  const BowlProfile& profile() const { return profile_; }
  bool is_shrinker() const;    // satisfies H = <x,n>/2 identically
  bool is_translator() const;  // satisfies H = -<e_{n+1},n>

  SurfaceSample sample(const Eigen::VectorXd& params) const;

  // Parameter grid for invariant checks and sampled verifications: a full
  // per_axis x per_axis grid for n <= 2, seeded quasi-random points for
  // higher-dimensional catalogs.
  std::vector<Eigen::VectorXd> default_grid(int per_axis = 64,
                                            double extent = 5.0) const;

  // --- closed-form tangential calculus -----------------------------------
  // These are independent, per-kind formulas (sphere harmonics, flat product
  // metrics, graph calculus); the identity verifiers compare them against the
  // paper-side expressions. Throws Error where no closed form exists.
  bool supports_closed_calculus() const;
  double lap_linear(const Eigen::VectorXd& params,
                    const Eigen::VectorXd& c) const;  // Lap <x,c>
  double lap_x2(const Eigen::VectorXd& params) const;  // Lap |x|^2
  double w(const Eigen::VectorXd& params, const Eigen::VectorXd& V) const;
  double lap_w(const Eigen::VectorXd& params, const Eigen::VectorXd& V) const;
  double drift_x_w(const Eigen::VectorXd& params,
                   const Eigen::VectorXd& V) const;  // <x, grad w>
  double dirder_w(const Eigen::VectorXd& params, const Eigen::VectorXd& V,
                  const Eigen::VectorXd& e) const;  // <e, grad w>
  double lap_H(const Eigen::VectorXd& params) const;
  double drift_x_H(const Eigen::VectorXd& params) const;
  double lap_A2(const Eigen::VectorXd& params) const;
  double drift_x_A2(const Eigen::VectorXd& params) const;
  double dirder_A2(const Eigen::VectorXd& params,
                   const Eigen::VectorXd& e) const;

  // tau = A/H: eigenvalues and |grad tau| (cylinders and the grim reaper
  // carry parallel tau).
  bool tau_supported() const;
  Eigen::VectorXd tau_eigenvalues(const Eigen::VectorXd& params) const;
  double tau_grad_norm(const Eigen::VectorXd& params) const;

 private:
  AnalyticSurface() = default;
  Eigen::VectorXd sphere_unit(const Eigen::VectorXd& params) const;

  SurfaceKind kind_ = SurfaceKind::Hyperplane;
  int n_ = 2;
  int k_ = 0;
  double radius_ = 0;          // cylinders: sqrt(2k)
  Eigen::VectorXd plane_normal_;
  double plane_offset_ = 0;
  Eigen::MatrixXd plane_basis_;  // columns: orthonormal basis of the plane
  BowlProfile profile_;
};

// Catalog factory following the experiment configs: kind + integer/real
// parameters. Rejects k > n and nonpositive dimensions.
AnalyticSurface make_analytic(SurfaceKind kind, int n = 2, int k = 0,
                              const Eigen::VectorXd& plane_normal = {},
                              double plane_offset = 0.0,
                              double bowl_r_max = 4.0,
                              double bowl_step = 1e-3);

// Area of the unit k-sphere.
double unit_sphere_area(int k);

}  // namespace mcflab
