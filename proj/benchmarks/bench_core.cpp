#include <benchmark/benchmark.h>

#include <map>

#include "mcflab/entropy.hpp"
#include "mcflab/flow.hpp"
#include "mcflab/meshgen.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/soliton.hpp"

using namespace mcflab;

namespace {

const TriangleMesh& sphere(int subdiv) {
  static std::map<int, TriangleMesh> cache;
  auto it = cache.find(subdiv);
  if (it == cache.end())
    it = cache.emplace(subdiv, gen_icosphere(2.0, subdiv)).first;
  return it->second;
}

}  // namespace

static void BM_vertex_geometry(benchmark::State& state) {
  const TriangleMesh& m = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    VertexGeometry g = compute_vertex_geometry(m);
    benchmark::DoNotOptimize(g.H.sum());
  }
  state.SetItemsProcessed(state.iterations() * m.n_vertices());
}
BENCHMARK(BM_vertex_geometry)->Arg(3)->Arg(4)->Arg(5);

static void BM_assemble_operators(benchmark::State& state) {
  const TriangleMesh& m = sphere(static_cast<int>(state.range(0)));
  const VertexGeometry g = compute_vertex_geometry(m);
  for (auto _ : state) {
    DriftOperators ops = assemble_operators(m, g);
    benchmark::DoNotOptimize(ops.stability.nonZeros());
  }
  state.SetItemsProcessed(state.iterations() * m.n_vertices());
}
BENCHMARK(BM_assemble_operators)->Arg(3)->Arg(4);

static void BM_shrinker_residual(benchmark::State& state) {
  const TriangleMesh& m = sphere(4);
  const VertexGeometry g = compute_vertex_geometry(m);
  for (auto _ : state) {
    ResidualField r = shrinker_residual(m, g);
    benchmark::DoNotOptimize(r.summary.linf);
  }
}
BENCHMARK(BM_shrinker_residual);

static void BM_f_functional(benchmark::State& state) {
  const TriangleMesh& m = sphere(static_cast<int>(state.range(0)));
  FFunctionalParams p;
  p.x0 = Eigen::Vector3d::Zero();
  p.t0 = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(f_functional(m, p));
  state.SetItemsProcessed(state.iterations() * m.n_faces());
}
BENCHMARK(BM_f_functional)->Arg(3)->Arg(4)->Arg(5);

static void BM_entropy_search(benchmark::State& state) {
  const TriangleMesh& m = sphere(3);
  for (auto _ : state) {
    EntropyResult e = entropy(m);
    benchmark::DoNotOptimize(e.lambda);
  }
}
BENCHMARK(BM_entropy_search)->Unit(benchmark::kMillisecond);

static void BM_flow_step(benchmark::State& state) {
  const bool implicit = state.range(1) != 0;
  const TriangleMesh& m = sphere(static_cast<int>(state.range(0)));
  const VertexGeometry g = compute_vertex_geometry(m);
  FlowConfig cfg;
  cfg.stepper = implicit ? Stepper::SemiImplicit : Stepper::Explicit;
  for (auto _ : state) {
    TriangleMesh next = flow_step(m, g, cfg, 1e-3);
    benchmark::DoNotOptimize(next.V.sum());
  }
  state.SetItemsProcessed(state.iterations() * m.n_vertices());
}
BENCHMARK(BM_flow_step)->Args({4, 0})->Args({4, 1})->Unit(benchmark::kMillisecond);

static void BM_cylinder_fit(benchmark::State& state) {
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 10.0, 32);
  const VertexGeometry g = compute_vertex_geometry(tube);
  for (auto _ : state) {
    CylinderFit f = cylinder_fit(tube, g);
    benchmark::DoNotOptimize(f.radius);
  }
}
BENCHMARK(BM_cylinder_fit);

BENCHMARK_MAIN();
