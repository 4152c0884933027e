#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "mcflab/analytic.hpp"
#include "mcflab/mesh.hpp"

namespace mcflab {

// Gaussian center/scale pair of the F-functional.
struct FFunctionalParams {
  Eigen::VectorXd x0;
  double t0 = 1.0;
};

enum class QuadratureRule {
  Gauss3,     // edge midpoints, exact through quadratics
  Centroid1,  // single centroid point
};

// (4 pi t0)^{-n/2} integral of exp(-|x-x0|^2 / 4 t0). Meshes are surfaces in
// 3-space (n = 2); analytic entries integrate in closed form or by 1-D/2-D
// parameter quadrature at machine accuracy.
double f_functional(const TriangleMesh& mesh, const FFunctionalParams& params,
                    QuadratureRule rule = QuadratureRule::Gauss3);
double f_functional(const AnalyticSurface& surface,
                    const FFunctionalParams& params);

struct EntropySearchConfig {
  double t0_min = 1.0 / 16;
  double t0_max = 16.0;
  int t0_grid = 17;  // log-spaced seeds
  int starts = 5;    // best grid seeds carried into simplex descent
  int max_iterations = 500;
  double simplex_tol = 1e-10;
  QuadratureRule rule = QuadratureRule::Gauss3;
};

// Best-found supremum of F over (x0, log t0): a lower bound for the true
// entropy, never a certified sup. The search trace records how hard we tried.
struct EntropyResult {
  double lambda = 0;
  FFunctionalParams argmax;
  int evaluations = 0;
  int starts = 0;
  bool t0_degenerate = false;  // flat t0 direction at the optimum
  std::vector<std::pair<double, double>> t0_profile;  // (t0, seeded F)
  double truncation_tail = 0;  // Gaussian mass beyond a truncated mesh's rim
};

EntropyResult entropy(const TriangleMesh& mesh,
                      const EntropySearchConfig& config = {});
EntropyResult entropy(const AnalyticSurface& surface,
                      const EntropySearchConfig& config = {});

// (4 pi)^{-k/2} * omega_k * (2k)^{k/2} * e^{-k/2}; 1 for k = 0. Entropy of
// S^k x R^{n-k}, independent of n.
double cylinder_entropy_closed_form(int n, int k);

// Finite-difference gradient of F in (x0, log t0); the shrinker criticality
// check evaluates it at (0, 1).
Eigen::VectorXd f_gradient(const AnalyticSurface& surface,
                           const FFunctionalParams& params, double step = 1e-4);
Eigen::VectorXd f_gradient(const TriangleMesh& mesh,
                           const FFunctionalParams& params, double step = 1e-4,
                           QuadratureRule rule = QuadratureRule::Gauss3);

}  // namespace mcflab
