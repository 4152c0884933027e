#include <doctest.h>

#include <cmath>

#include "mcflab/entropy.hpp"
#include "mcflab/meshgen.hpp"

using namespace mcflab;

TEST_SUITE_BEGIN("entropy");

namespace {

FFunctionalParams origin_params(int dim, double t0) {
  FFunctionalParams p;
  p.x0 = Eigen::VectorXd::Zero(dim);
  p.t0 = t0;
  return p;
}

}  // namespace

TEST_CASE("hyperplane through the origin has F = 1 at (0,1)") {
  const auto plane = make_analytic(SurfaceKind::Hyperplane, 2);
  CHECK(f_functional(plane, origin_params(3, 1.0)) == doctest::Approx(1.0));
  // any t0, any in-plane center
  FFunctionalParams p = origin_params(3, 0.37);
  p.x0 << 2.0, -5.0, 0.0;
  CHECK(f_functional(plane, p) == doctest::Approx(1.0));
}

TEST_CASE("hyperplane at distance d has F = exp(-d^2/4t0)") {
  const auto plane = make_analytic(SurfaceKind::Hyperplane, 2);  // normal e3
  for (double d : {0.5, 1.0, 2.5}) {
    for (double t0 : {0.5, 1.0, 3.0}) {
      FFunctionalParams p = origin_params(3, t0);
      p.x0[2] = d;
      CHECK(f_functional(plane, p) ==
            doctest::Approx(std::exp(-d * d / (4 * t0))).epsilon(1e-12));
    }
  }
}

TEST_CASE("radius-2 sphere has F(0,1) = 4/e") {
  const auto sphere = AnalyticSurface::generalized_cylinder(2, 2);
  CHECK(f_functional(sphere, origin_params(3, 1.0)) ==
        doctest::Approx(4.0 / M_E).epsilon(1e-12));
  const TriangleMesh mesh = gen_icosphere(2.0, 4);
  FFunctionalParams p3;
  p3.x0 = Eigen::Vector3d::Zero();
  p3.t0 = 1.0;
  CHECK(f_functional(mesh, p3) == doctest::Approx(4.0 / M_E).epsilon(0.01));
}

TEST_CASE("t0 must be positive") {
  const TriangleMesh mesh = gen_icosphere(1.0, 1);
  FFunctionalParams p;
  p.x0 = Eigen::Vector3d::Zero();
  p.t0 = 0.0;
  CHECK_THROWS_AS(f_functional(mesh, p), const Error&);
}

TEST_CASE("cylinder entropy closed form") {
  CHECK(cylinder_entropy_closed_form(2, 0) == 1.0);
  CHECK(cylinder_entropy_closed_form(2, 1) ==
        doctest::Approx(std::sqrt(2 * M_PI / M_E)).epsilon(1e-12));
  CHECK(cylinder_entropy_closed_form(2, 2) ==
        doctest::Approx(4.0 / M_E).epsilon(1e-12));
  // independent of the ambient dimension
  CHECK(cylinder_entropy_closed_form(5, 2) ==
        doctest::Approx(cylinder_entropy_closed_form(2, 2)));
  CHECK_THROWS_AS(cylinder_entropy_closed_form(2, 3), const Error&);
  // cross-check against the quadrature path at (0,1)
  const auto tube = AnalyticSurface::generalized_cylinder(2, 1);
  CHECK(f_functional(tube, origin_params(3, 1.0)) ==
        doctest::Approx(cylinder_entropy_closed_form(2, 1)).epsilon(1e-12));
}

TEST_CASE("entropy search finds the shrinker maxima") {
  const TriangleMesh sphere = gen_icosphere(2.0, 4);
  const EntropyResult es = entropy(sphere);
  CHECK(es.lambda == doctest::Approx(4.0 / M_E).epsilon(0.01));
  CHECK(es.argmax.t0 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(es.argmax.x0.norm() < 0.05);
  CHECK(es.lambda >= es.t0_profile[8].second);  // beats every probed seed
  for (const auto& [t0, f] : es.t0_profile) CHECK(es.lambda >= f - 1e-12);

  const auto analytic_sphere = AnalyticSurface::generalized_cylinder(2, 2);
  const EntropyResult ea = entropy(analytic_sphere);
  CHECK(ea.lambda == doctest::Approx(4.0 / M_E).epsilon(1e-4));
}

TEST_CASE("hyperplane entropy is 1 with a degenerate t0 direction") {
  const auto plane = make_analytic(SurfaceKind::Hyperplane, 2);
  const EntropyResult e = entropy(plane);
  CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e.t0_degenerate);
}

TEST_CASE("truncated tube entropy approaches the cylinder value") {
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 20.0, 32);
  const EntropyResult e = entropy(tube);
  CHECK(e.lambda ==
        doctest::Approx(std::sqrt(2 * M_PI / M_E)).epsilon(0.01));
  CHECK(e.truncation_tail >= 0);
  CHECK(e.truncation_tail < 1e-6);  // erfc tail of the 20-long tube
}

TEST_CASE("the disk reports a vanishing truncation tail") {
  const EntropyResult e = entropy(gen_disk(10.0, 32));
  CHECK(e.truncation_tail >= 0);
  CHECK(e.truncation_tail < 1e-12);  // rim at distance 10 from the center
}

TEST_CASE("entropy of an empty surface is an error") {
  TriangleMesh empty;
  empty.V.resize(0, 3);
  empty.F.resize(0, 3);
  CHECK_THROWS_AS(entropy(empty), const Error&);
}

TEST_CASE("criticality: the F gradient vanishes at (0,1) on shrinkers") {
  for (int k : {1, 2}) {
    const auto s = AnalyticSurface::generalized_cylinder(2, k);
    const Eigen::VectorXd grad = f_gradient(s, origin_params(3, 1.0));
    CHECK(grad.norm() < 1e-6);
  }
}

TEST_CASE("scaling identity F_{0,t0}(c Sigma) = F_{0,t0/c^2}(Sigma)") {
  const TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.1, 3);
  const double c = 1.3;
  TriangleMesh scaled = m;
  scaled.V *= c;
  for (double t0 : {0.5, 1.0, 2.0}) {
    FFunctionalParams pt;
    pt.x0 = Eigen::Vector3d::Zero();
    pt.t0 = t0;
    FFunctionalParams ps;
    ps.x0 = Eigen::Vector3d::Zero();
    ps.t0 = t0 / (c * c);
    CHECK(f_functional(scaled, pt) ==
          doctest::Approx(f_functional(m, ps)).epsilon(1e-12));
  }
}

TEST_CASE("analytic and mesh quadratures agree on translator surfaces") {
  // grim reaper: the x2 marginal is exact, so F cannot depend on x0[1]
  const auto grim = AnalyticSurface::grim_reaper_plane();
  FFunctionalParams p = origin_params(3, 1.0);
  const double f0 = f_functional(grim, p);
  p.x0[1] = 7.5;
  CHECK(f_functional(grim, p) == doctest::Approx(f0).epsilon(1e-10));
  CHECK(f0 > 0);
  CHECK(f0 < 2.0);

  // bowl cap: 2-D parameter quadrature vs the triangle quadrature of the
  // generated mesh
  const BowlProfile prof = bowl_profile(3.0, 1e-3);
  const auto bowl = AnalyticSurface::bowl_soliton(prof);
  const TriangleMesh cap = gen_bowl_cap(prof, 3.0, 48);
  FFunctionalParams q = origin_params(3, 1.0);
  CHECK(f_functional(bowl, q) ==
        doctest::Approx(f_functional(cap, q)).epsilon(5e-3));
}

TEST_CASE("3-point quadrature beats the centroid rule on the sphere") {
  for (int s = 2; s <= 4; ++s) {
    const TriangleMesh m = gen_icosphere(2.0, s);
    FFunctionalParams p;
    p.x0 = Eigen::Vector3d::Zero();
    p.t0 = 1.0;
    const double exact = 4.0 / M_E;
    const double e3 =
        std::abs(f_functional(m, p, QuadratureRule::Gauss3) - exact);
    const double e1 =
        std::abs(f_functional(m, p, QuadratureRule::Centroid1) - exact);
    CHECK(e3 < e1);
  }
}

TEST_SUITE_END();
