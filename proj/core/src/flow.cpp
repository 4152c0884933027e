#include "mcflab/flow.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcflab/entropy.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/soliton.hpp"

namespace mcflab {

void FlowConfig::validate() const {
  if (dt < 0 || (dt == 0 && dt_courant <= 0))
    throw Error("FlowConfig: need dt > 0 or a positive courant factor");
  if (max_steps <= 0) throw Error("FlowConfig: max_steps must be positive");
  if (stop_residual_linf <= 0 || stop_displacement <= 0)
    throw Error("FlowConfig: stop tolerances must be positive");
  if (monitor_every <= 0) throw Error("FlowConfig: monitor_every must be positive");
}

double FlowConfig::resolve_dt(const TriangleMesh& mesh) const {
  if (dt > 0) return dt;
  const double h = mesh.min_edge_length();
  return dt_courant * h * h;
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::ResidualTolerance: return "residual_tolerance";
    case StopReason::DisplacementTolerance: return "displacement_tolerance";
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::QualityError: return "quality_error";
  }
  return "unknown";
}

TriangleMesh flow_step(const TriangleMesh& mesh, const VertexGeometry& geom,
                       const FlowConfig& config, double dt) {
  const int nv = mesh.n_vertices();
  const auto boundary = mesh.boundary_vertices();
  TriangleMesh out = mesh;

  if (config.stepper == Stepper::Explicit) {
    for (int i = 0; i < nv; ++i) {
      if (boundary[i]) continue;
      const Eigen::Vector3d x = mesh.V.row(i), n = geom.normals.row(i);
      double speed = -geom.H[i];
      if (config.mode == FlowMode::Rescaled) speed += 0.5 * x.dot(n);
      out.V.row(i) = x + dt * speed * n;
    }
  } else {
    const DriftOperators ops = assemble_operators(mesh, geom);
    // (M - dt C) x_new = M (x_old + dt * source), source = <x,n>n/2
    Eigen::SparseMatrix<double> A(nv, nv);
    {
      std::vector<Eigen::Triplet<double>> mt;
      mt.reserve(nv);
      for (int i = 0; i < nv; ++i) mt.emplace_back(i, i, ops.mass[i]);
      A.setFromTriplets(mt.begin(), mt.end());
    }
    A = A - dt * ops.stiffness;

    Eigen::MatrixX3d rhs(nv, 3);
    for (int i = 0; i < nv; ++i) {
      Eigen::Vector3d x = mesh.V.row(i);
      if (config.mode == FlowMode::Rescaled) {
        const Eigen::Vector3d n = geom.normals.row(i);
        x += dt * 0.5 * x.dot(n) * n;
      }
      rhs.row(i) = ops.mass[i] * x;
    }
    // held-fixed boundary rows
    bool any_boundary = false;
    for (int i = 0; i < nv; ++i) any_boundary |= boundary[i] != 0;
    if (any_boundary) {
      for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
          if (boundary[it.row()]) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
      A.prune(0.0);
      for (int i = 0; i < nv; ++i)
        if (boundary[i]) rhs.row(i) = mesh.V.row(i);
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
      throw Error("flow_step: implicit solve failed to factorize");
    for (int c = 0; c < 3; ++c)
      out.V.col(c) = solver.solve(Eigen::VectorXd(rhs.col(c)));
  }

  const double q = out.min_face_quality();
  if (q < config.quality_floor) {
    std::ostringstream os;
    os << "flow_step: face quality " << q << " fell below the floor "
       << config.quality_floor << "; retry with a smaller dt";
    throw Error(os.str());
  }
  return out;
}

namespace {

FlowMonitorRow monitor(const TriangleMesh& mesh, const VertexGeometry& geom,
                       const FlowConfig& config, int step, double time,
                       double displacement) {
  FlowMonitorRow row;
  row.step = step;
  row.time = time;
  row.displacement = displacement;
  const ResidualField res = shrinker_residual(mesh, geom, config.collar);
  row.residual_linf = res.summary.linf;
  row.residual_l2 = res.summary.l2;
  FFunctionalParams p;
  p.x0 = Eigen::Vector3d::Zero();
  p.t0 = 1.0;
  row.f01 = f_functional(mesh, p);
  const auto interior = mesh.interior_mask(config.collar);
  double minh = 1e300, maxa = 0;
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    if (!interior[i]) continue;
    minh = std::min(minh, geom.H[i]);
    maxa = std::max(maxa, std::sqrt(geom.A2[i]));
  }
  row.min_H = minh;
  row.max_A = maxa;
  row.min_quality = mesh.min_face_quality();
  return row;
}

}  // namespace

FlowTrajectory run_flow(const TriangleMesh& mesh, const FlowConfig& config) {
  config.validate();
  FlowTrajectory traj;
  TriangleMesh current = mesh;
  double time = 0;
  double displacement = 0;
  int applied_steps = 0;

  traj.snapshots.push_back(current);
  traj.snapshot_steps.push_back(0);

  for (int step = 0; step <= config.max_steps; ++step) {
    const VertexGeometry geom = compute_vertex_geometry(current);
    const bool monitored = step % config.monitor_every == 0;
    FlowMonitorRow row;
    if (monitored || step == config.max_steps) {
      row = monitor(current, geom, config, step, time, displacement);
      traj.series.push_back(row);
    }
    if (monitored && step > 0) {
      if (row.residual_linf < config.stop_residual_linf &&
          config.mode == FlowMode::Rescaled) {
        traj.stop = StopReason::ResidualTolerance;
        break;
      }
      if (row.displacement < config.stop_displacement) {
        traj.stop = StopReason::DisplacementTolerance;
        break;
      }
    }
    if (step == config.max_steps) {
      traj.stop = StopReason::MaxSteps;
      break;
    }

    const double dt = config.resolve_dt(current);
    TriangleMesh next;
    try {
      next = flow_step(current, geom, config, dt);
    } catch (const Error& e) {
      traj.stop = StopReason::QualityError;
      traj.message = e.what();
      break;
    }
    displacement = (next.V - current.V).rowwise().norm().maxCoeff();
    current = std::move(next);
    time += dt;
    applied_steps = step + 1;
    if (config.snapshot_every > 0 && (step + 1) % config.snapshot_every == 0) {
      traj.snapshots.push_back(current);
      traj.snapshot_steps.push_back(step + 1);
    }
  }

  if (traj.snapshot_steps.back() != applied_steps) {
    traj.snapshots.push_back(current);
    traj.snapshot_steps.push_back(applied_steps);
  }
  return traj;
}

double monitor_entropy(const FlowTrajectory& trajectory) {
  std::vector<double> f01;
  f01.reserve(trajectory.series.size());
  for (const auto& row : trajectory.series) f01.push_back(row.f01);
  return monitor_entropy_violation(f01);
}

double monitor_entropy_violation(const std::vector<double>& f01_series) {
  double worst = 0;
  for (size_t i = 0; i + 1 < f01_series.size(); ++i)
    worst = std::max(worst, f01_series[i + 1] - f01_series[i]);
  return std::max(worst, 0.0);
}

}  // namespace mcflab
