#include <doctest.h>

#include <cmath>

#include "mcflab/meshgen.hpp"
#include "mcflab/numeric.hpp"
#include "mcflab/operators.hpp"
#include "mcflab/rng.hpp"

using namespace mcflab;

TEST_SUITE_BEGIN("operators");

namespace {

double rel_l2(const Eigen::VectorXd& r, const Eigen::VectorXd& ref,
              const Eigen::VectorXd& w) {
  double num = 0, den = 0;
  for (int i = 0; i < r.size(); ++i) {
    num += w[i] * r[i] * r[i];
    den += w[i] * ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("laplacian annihilates constants, drift of constants vanishes") {
  const TriangleMesh m = gen_tube(std::sqrt(2.0), 8.0, 20);
  const VertexGeometry g = compute_vertex_geometry(m);
  const DriftOperators ops = assemble_operators(m, g);
  const ScalarField ones = ScalarField::Ones(m.n_vertices());
  CHECK((ops.laplacian * ones).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ops.drift * ones).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ops.drift_laplacian * ones).cwiseAbs().maxCoeff() < 1e-12);
  // L(1) = |A|^2 + 1/2 pointwise
  const Eigen::VectorXd l1 = ops.stability * ones;
  for (int i = 0; i < m.n_vertices(); ++i)
    CHECK(l1[i] == doctest::Approx(g.A2[i] + 0.5).epsilon(1e-11));
}

TEST_CASE("operators agree with their definitions entrywise") {
  const TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.05, 5);
  const VertexGeometry g = compute_vertex_geometry(m);
  const DriftOperators ops = assemble_operators(m, g);
  Rng rng(17);
  ScalarField f(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) f[i] = rng.uniform(-1.0, 1.0);

  const Eigen::VectorXd lf = ops.drift_laplacian * f;
  const Eigen::VectorXd expect = ops.laplacian * f - ops.drift * f;
  CHECK((lf - expect).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXd sf = ops.stability * f;
  const Eigen::VectorXd expect2 =
      lf + ((g.A2.array() + 0.5) * f.array()).matrix();
  CHECK((sf - expect2).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXd tf = ops.translator * f;
  const Eigen::VectorXd expect3 = ops.laplacian * f + ops.grad_z * f +
                                  (g.A2.array() * f.array()).matrix();
  CHECK((tf - expect3).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drift is the composition of the gradient with x/2") {
  const TriangleMesh m = gen_icosphere(2.0, 3);
  const VertexGeometry g = compute_vertex_geometry(m);
  const DriftOperators ops = assemble_operators(m, g);
  Rng rng(23);
  ScalarField f(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) f[i] = rng.uniform(-1.0, 1.0);

  const Eigen::VectorXd gx = ops.grad_x * f, gy = ops.grad_y * f,
                        gz = ops.grad_z * f;
  const VectorField grad = tangential_gradient(m, g, f);
  for (int i = 0; i < m.n_vertices(); ++i) {
    CHECK(gx[i] == doctest::Approx(grad.v(i, 0)).epsilon(1e-10));
    const double drift_i =
        0.5 * Eigen::Vector3d(m.V.row(i)).dot(grad.v.row(i));
    CHECK((ops.drift * f)[i] == doctest::Approx(drift_i).epsilon(1e-10));
    (void)gy;
    (void)gz;
  }
}

TEST_CASE("laplacian is symmetric in the area inner product") {
  const TriangleMesh m = gen_tube(std::sqrt(2.0), 8.0, 24);
  const VertexGeometry g = compute_vertex_geometry(m);
  const DriftOperators ops = assemble_operators(m, g);
  Rng rng(5);
  ScalarField f(m.n_vertices()), h(m.n_vertices());
  for (int i = 0; i < m.n_vertices(); ++i) {
    f[i] = rng.uniform(-1.0, 1.0);
    h[i] = rng.uniform(-1.0, 1.0);
  }
  const double a = (ops.laplacian * f).dot((g.area.array() * h.array()).matrix());
  const double b = (ops.laplacian * h).dot((g.area.array() * f.array()).matrix());
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

TEST_CASE("degree-1 spherical harmonics are discrete eigenfunctions") {
  // Lap <c,x> = -(2/4) <c,x> on the radius-2 sphere, error falling at
  // observed order >= 1
  std::vector<double> hs, errs;
  const Eigen::Vector3d c(0.4, -0.2, 0.89);
  for (int s = 2; s <= 4; ++s) {
    const TriangleMesh m = gen_icosphere(2.0, s, 30);
    const VertexGeometry g = compute_vertex_geometry(m);
    const DriftOperators ops = assemble_operators(m, g);
    ScalarField f(m.n_vertices());
    for (int i = 0; i < m.n_vertices(); ++i) f[i] = c.dot(m.V.row(i));
    const Eigen::VectorXd r = ops.laplacian * f + 0.5 * f;
    hs.push_back(m.min_edge_length());
    errs.push_back(rel_l2(r, f, g.area));
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(loglog_slope(hs, errs) >= 1.0);
}

TEST_CASE("assembly rejects zero area weights") {
  const TriangleMesh m = gen_icosphere(1.0, 2);
  VertexGeometry g = compute_vertex_geometry(m);
  g.area[7] = 0.0;
  CHECK_THROWS_AS(assemble_operators(m, g), const Error&);
}

TEST_SUITE_END();
