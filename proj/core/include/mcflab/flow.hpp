#pragma once

#include <string>
#include <vector>

#include "mcflab/mesh.hpp"
#include "mcflab/vertex_geometry.hpp"

namespace mcflab {

enum class FlowMode { Mcf, Rescaled };
enum class Stepper { Explicit, SemiImplicit };

// Rescaled mode moves by -(H - <x,n>/2) n, whose fixed points are
// self-shrinkers; plain mcf moves by -H n. The semi-implicit stepper treats
// the Laplacian of position implicitly (the mean curvature vector equals the
// surface Laplacian of position) and, in rescaled mode, the <x,n>n/2 source
// explicitly; it incurs benign tangential vertex motion, which the residual
// monitors (scalar fields) do not see. Boundary vertices are held fixed.
struct FlowConfig {
  FlowMode mode = FlowMode::Rescaled;
  Stepper stepper = Stepper::SemiImplicit;
  double dt = 0.0;          // fixed step when > 0
  double dt_courant = 0.1;  // otherwise dt = dt_courant * h_min^2
  int max_steps = 1000;
  double stop_residual_linf = 1e-3;
  double stop_displacement = 1e-8;
  int monitor_every = 1;
  int snapshot_every = 0;  // 0: first and last only
  double quality_floor = 0.05;
  double collar = 1.0;

  void validate() const;
  double resolve_dt(const TriangleMesh& mesh) const;
};

struct FlowMonitorRow {
  int step = 0;
  double time = 0;
  double residual_linf = 0;  // shrinker residual over the interior
  double residual_l2 = 0;
  double f01 = 0;            // F-functional at (0,1)
  double min_H = 0;
  double max_A = 0;
  double min_quality = 0;
  double displacement = 0;   // max vertex move of the last step
};

enum class StopReason {
  ResidualTolerance,
  DisplacementTolerance,
  MaxSteps,
  QualityError,
};

std::string stop_reason_name(StopReason r);

struct FlowTrajectory {
  std::vector<TriangleMesh> snapshots;
  std::vector<int> snapshot_steps;
  std::vector<FlowMonitorRow> series;
  StopReason stop = StopReason::MaxSteps;
  std::string message;
};

// One step; does not mutate the input. Throws Error (advising a smaller dt)
// when a face falls below the quality floor.
TriangleMesh flow_step(const TriangleMesh& mesh, const VertexGeometry& geom,
                       const FlowConfig& config, double dt);

// Driver with monitors; stops on tolerance, max_steps, or a quality error
// (recorded in the trajectory rather than thrown).
FlowTrajectory run_flow(const TriangleMesh& mesh, const FlowConfig& config);

// Maximal upward violation of monotonicity of an F_{0,1} series (0 for a
// nonincreasing series).
double monitor_entropy_violation(const std::vector<double>& f01_series);
double monitor_entropy(const FlowTrajectory& trajectory);

}  // namespace mcflab
