#include <doctest.h>

#include <cmath>

#include "mcflab/meshgen.hpp"
#include "mcflab/numeric.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/vertex_geometry.hpp"

using namespace mcflab;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("icosphere mean curvature converges at second order to H=1") {
  std::vector<double> hs, errs;
  for (int s = 2; s <= 4; ++s) {
    const TriangleMesh m = gen_icosphere(2.0, s);
    const VertexGeometry g = compute_vertex_geometry(m);
    double worst = 0;
    for (int i = 0; i < m.n_vertices(); ++i)
      worst = std::max(worst, std::abs(g.H[i] - 1.0));
    hs.push_back(m.min_edge_length());
    errs.push_back(worst);
  }
  CHECK(errs[2] < errs[1]);
  CHECK(errs[1] < errs[0]);
  CHECK(loglog_slope(hs, errs) >= 1.8);
  CHECK(errs[2] < 1e-4);
}

TEST_CASE("tube |A|^2 approaches 1/2 in the interior") {
  const TriangleMesh m = gen_tube(std::sqrt(2.0), 10.0, 32);
  const VertexGeometry g = compute_vertex_geometry(m);
  const auto interior = m.interior_mask(1.0);
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (!interior[i]) continue;
    CHECK(std::abs(g.A2[i] - 0.5) < 1e-2);
    CHECK(std::abs(g.H[i] - std::sqrt(0.5)) < 1e-3);
  }
}

TEST_CASE("flat disk is flat away from the rim") {
  const TriangleMesh m = gen_disk(6.0, 24);
  const VertexGeometry g = compute_vertex_geometry(m);
  const auto interior = m.interior_mask(1.0);
  for (int i = 0; i < m.n_vertices(); ++i) {
    if (!interior[i]) continue;
    CHECK(std::abs(g.H[i]) < 1e-10);
    CHECK(std::abs(g.A2[i]) < 1e-10);
  }
}

TEST_CASE("area weights are positive and partition the total area") {
  for (const TriangleMesh& m :
       {gen_icosphere(2.0, 3), gen_tube(1.0, 6.0, 16), gen_disk(4.0, 12)}) {
    const VertexGeometry g = compute_vertex_geometry(m);
    CHECK(g.area.minCoeff() > 0);
    CHECK(g.total_area == doctest::Approx(m.total_area()).epsilon(1e-10));
  }
}

TEST_CASE("pointwise Cauchy-Schwarz |A|^2 >= H^2/2 and trace consistency") {
  const TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.08, 3);
  const VertexGeometry g = compute_vertex_geometry(m);
  for (int i = 0; i < m.n_vertices(); ++i) {
    CHECK(g.A2[i] >= 0.5 * g.H[i] * g.H[i] - 1e-12);
    // H equals the trace of the shape operator to round-off
    CHECK(std::abs(g.shape[i].trace() - g.H[i]) < 1e-10);
    // ambient operator annihilates the normal
    const Eigen::Vector3d n = g.normals.row(i);
    CHECK((g.shape[i] * n).norm() < 1e-10);
  }
}

TEST_CASE("valence below 3 is rejected") {
  TriangleMesh m;
  m.V.resize(3, 3);
  m.V << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  m.F.resize(1, 3);
  m.F << 0, 1, 2;
  CHECK_THROWS_AS(compute_vertex_geometry(m), const Error&);
}

TEST_CASE("tangential gradient: constants, affine fields, tube axis") {
  const TriangleMesh disk = gen_disk(6.0, 24);
  const VertexGeometry gd = compute_vertex_geometry(disk);
  const auto interior = disk.interior_mask(1.0);

  ScalarField ones = ScalarField::Ones(disk.n_vertices());
  const VectorField zero = tangential_gradient(disk, gd, ones);
  CHECK(zero.v.cwiseAbs().maxCoeff() < 1e-13);

  // affine exactness on the flat disk
  const Eigen::Vector3d c(0.3, -1.2, 0.7);
  ScalarField f(disk.n_vertices());
  for (int i = 0; i < disk.n_vertices(); ++i) f[i] = c.dot(disk.V.row(i));
  const VectorField grad = tangential_gradient(disk, gd, f);
  const Eigen::Vector3d c_tan(0.3, -1.2, 0.0);
  for (int i = 0; i < disk.n_vertices(); ++i) {
    if (!interior[i]) continue;
    CHECK((Eigen::Vector3d(grad.v.row(i)) - c_tan).norm() < 1e-10);
  }

  // x3 on a tube aligned with the x3 axis has unit axial gradient
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 10.0, 24);
  const VertexGeometry gt = compute_vertex_geometry(tube);
  const auto tint = tube.interior_mask(1.0);
  ScalarField z = tube.V.col(2);
  const VectorField gz = tangential_gradient(tube, gt, z);
  for (int i = 0; i < tube.n_vertices(); ++i) {
    if (!tint[i]) continue;
    CHECK((Eigen::Vector3d(gz.v.row(i)) - Eigen::Vector3d::UnitZ()).norm() <
          1e-6);
  }
}

TEST_CASE("vector field outputs are tangent to the vertex normals") {
  const TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.05, 9);
  const VertexGeometry g = compute_vertex_geometry(m);
  ScalarField f(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i)
    f[i] = std::sin(m.V(i, 0)) * m.V(i, 2);
  const VectorField grad = tangential_gradient(m, g, f);
  double scale = grad.v.cwiseAbs().maxCoeff();
  for (int i = 0; i < m.n_vertices(); ++i)
    CHECK(std::abs(grad.v.row(i).dot(g.normals.row(i))) < 1e-10 * scale);
}

TEST_SUITE_END();
