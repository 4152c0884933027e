#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcflab/audit.hpp"
#include "mcflab/flow.hpp"
#include "mcflab/meshgen.hpp"

using namespace mcflab;

TEST_SUITE_BEGIN("audit");

namespace {

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int x, int y) { return v[x] < v[y]; });
    std::vector<double> r(n);
    for (size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double mean = (n - 1) / 2.0;
  double num = 0, da = 0, db = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (ra[i] - mean) * (rb[i] - mean);
    da += (ra[i] - mean) * (ra[i] - mean);
    db += (rb[i] - mean) * (rb[i] - mean);
  }
  return num / std::sqrt(da * db);
}

}  // namespace

TEST_CASE("mean-convex audit on the exact tube stays below C = 1") {
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 16.0, 32);
  const VertexGeometry g = compute_vertex_geometry(tube);
  const AuditReport rep = audit_mean_convex_estimate(tube, g, 8.0, 0.5);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.empirical_C <= 1.0);
  // |A|/H = 1, so the ratio is (R - |x|)/R with |x| >= sqrt(2)
  CHECK(rep.empirical_C ==
        doctest::Approx((8.0 - std::sqrt(2.0)) / 8.0).epsilon(0.01));
}

TEST_CASE("mean-convex audit on the sphere matches the closed-form ratio") {
  const TriangleMesh sphere = gen_icosphere(2.0, 4);
  const VertexGeometry g = compute_vertex_geometry(sphere);
  const AuditReport rep = audit_mean_convex_estimate(sphere, g, 4.0, 0.5);
  CHECK(rep.hypothesis_ok);
  // |A| = 1/sqrt(2), H = 1, |x| = 2: ratio = (1/sqrt2)(4-2)/4
  CHECK(rep.empirical_C ==
        doctest::Approx(std::sqrt(0.5) * 0.5).epsilon(2e-3));
  const AuditReport with_c =
      audit_mean_convex_estimate(sphere, g, 4.0, 0.5, 1.0, 1.0);
  CHECK(with_c.pass.has_value());
  CHECK(*with_c.pass);
}

TEST_CASE("flat disk is flagged as hypothesis-violated, not an error") {
  const TriangleMesh disk = gen_disk(6.0, 24);
  const VertexGeometry g = compute_vertex_geometry(disk);
  const AuditReport rep = audit_mean_convex_estimate(disk, g, 4.0, 0.5);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK(rep.hypothesis_fraction == doctest::Approx(0.0));
  CHECK(rep.empirical_C == 0.0);  // no valid subregion
}

TEST_CASE("graphical audit: flat disk and translated sphere cap") {
  const TriangleMesh disk = gen_disk(8.0, 24);
  const VertexGeometry gd = compute_vertex_geometry(disk);
  const AuditReport flat = audit_graphical_estimate(
      disk, gd, Eigen::Vector3d::UnitZ(), 6.0, 0.9);
  CHECK(flat.hypothesis_ok);
  CHECK(flat.empirical_C < 1e-8);

  // radius-2 sphere with its north pole moved to the origin: inside B_1 the
  // normal stays within 30 degrees of e3
  TriangleMesh sphere = gen_icosphere(2.0, 4);
  sphere.V.rowwise() += Eigen::RowVector3d(0, 0, -2.0);
  const VertexGeometry gs = compute_vertex_geometry(sphere);
  const AuditReport cap = audit_graphical_estimate(
      sphere, gs, Eigen::Vector3d::UnitZ(), 1.0, 0.8);
  CHECK(cap.hypothesis_ok);
  CHECK(cap.empirical_C == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
}

TEST_CASE("graphical audit flags the grim reaper band") {
  const TriangleMesh grim = gen_grim_reaper_patch(1.45, 6.0, 64);
  const VertexGeometry g = compute_vertex_geometry(grim);
  // w = cos(x1) >= 0.5 only for |x1| <= pi/3: the wide patch violates it in B_2
  const AuditReport rep = audit_graphical_estimate(
      grim, g, Eigen::Vector3d::UnitZ(), 2.0, 0.5);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK(rep.hypothesis_fraction > 0.0);
  CHECK(rep.hypothesis_fraction < 1.0);
  CHECK(rep.empirical_C > 0.5);  // sup |A| = max cos near the waist
  CHECK(rep.empirical_C < 1.1);
}

TEST_CASE("translator audit: hyperplane containing the direction is exact") {
  // vertical plane: rotate the disk into the xz-plane, normal e2
  TriangleMesh plane = gen_disk(8.0, 24);
  const Eigen::MatrixX3d v = plane.V;
  plane.V.col(1) = -v.col(2);
  plane.V.col(2) = v.col(1);
  for (int f = 0; f < plane.n_faces(); ++f)
    std::swap(plane.F(f, 1), plane.F(f, 2));
  const VertexGeometry g = compute_vertex_geometry(plane);
  const AuditReport rep = audit_translator_estimate(
      plane, g, Eigen::Vector3d::UnitY(), 4.0, 0.5);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.empirical_C < 1e-10);
  CHECK(*rep.precheck_residual_linf < 1e-10);
}

TEST_CASE("translator sweep on the grim reaper: C grows until the hypothesis fails") {
  const TriangleMesh grim = gen_grim_reaper_patch(1.45, 8.0, 64);
  const VertexGeometry g = compute_vertex_geometry(grim);
  const auto sweep = audit_translator_sweep(
      grim, g, Eigen::Vector3d::UnitZ(), {1.0, 2.0, 4.0, 8.0}, 0.5);
  REQUIRE(sweep.size() == 4);
  CHECK(sweep[0].hypothesis_ok);       // B_1: |x1| <= 1 keeps w >= cos(1)
  CHECK_FALSE(sweep[3].hypothesis_ok); // large balls include the steep tails
  // the empirical constant grows roughly like R^2/(R+1) on the valid band
  CHECK(sweep[1].empirical_C > sweep[0].empirical_C);
  CHECK(sweep[3].empirical_C > sweep[1].empirical_C);
  // hypothesis fraction decays as the ball grows
  CHECK(sweep[3].hypothesis_fraction < sweep[1].hypothesis_fraction);
}

TEST_CASE("translator audit on the bowl cap is finite") {
  const BowlProfile prof = bowl_profile(4.0, 1e-3);
  const TriangleMesh bowl = gen_bowl_cap(prof, 4.0, 40);
  const VertexGeometry g = compute_vertex_geometry(bowl);
  const AuditReport rep = audit_translator_estimate(
      bowl, g, Eigen::Vector3d::UnitZ(), 4.0, 0.5);
  CHECK(std::isfinite(rep.empirical_C));
  CHECK(rep.empirical_C > 0);
  // the polar fan's first ring carries an O(1)-pattern cotan artifact, so the
  // pointwise precheck is loose; the area-weighted residual is genuinely small
  CHECK(*rep.precheck_residual_linf < 0.15);
  CHECK(translator_residual(bowl, g).summary.l2 < 5e-3);
}

TEST_CASE("growth bound constants match the closed forms") {
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 22.0, 32);
  const VertexGeometry gt = compute_vertex_geometry(tube);
  const AuditReport rt = check_growth_bound(tube, gt, 10.0);
  CHECK(rt.hypothesis_ok);
  // sup |A|/(1+|x|) at the smallest |x| = sqrt(2)
  CHECK(rt.empirical_C ==
        doctest::Approx(std::sqrt(0.5) / (1 + std::sqrt(2.0))).epsilon(5e-3));

  const TriangleMesh sphere = gen_icosphere(2.0, 4);
  const VertexGeometry gs = compute_vertex_geometry(sphere);
  const AuditReport rs = check_growth_bound(sphere, gs, 4.0);
  CHECK(rs.empirical_C == doctest::Approx(std::sqrt(0.5) / 3.0).epsilon(5e-3));
}

TEST_CASE("cutoff identity is exact on analytic shrinkers") {
  Eigen::VectorXd center0 = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd off(3);
  off << 0.5, 0.3, -0.2;
  for (int k : {1, 2}) {
    const auto cyl = AnalyticSurface::generalized_cylinder(2, k);
    for (const auto& x0 : {center0, off}) {
      const CutoffIdentityReport rep = verify_cutoff_identity(cyl, x0, 3.0);
      REQUIRE_FALSE(rep.empty_region);
      CHECK(rep.precheck_ok);
      CHECK(rep.residual.linf < 1e-12);
      CHECK(rep.bound_holds);  // no tolerance
    }
  }
  // plane through the origin
  const auto plane = make_analytic(SurfaceKind::Hyperplane, 2);
  const CutoffIdentityReport rp = verify_cutoff_identity(plane, center0, 2.0);
  CHECK(rp.residual.linf < 1e-12);
  CHECK(rp.bound_holds);
}

TEST_CASE("cutoff identity is universal; only the bound needs the shrinker") {
  // the grim reaper is not a shrinker: the precheck warns but the divergence
  // identity itself still holds in closed form
  const auto grim = AnalyticSurface::grim_reaper_plane();
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3);
  const CutoffIdentityReport rep = verify_cutoff_identity(grim, x0, 1.5);
  CHECK_FALSE(rep.precheck_ok);
  CHECK(rep.residual.linf < 1e-12);
}

TEST_CASE("cutoff identity: empty region reported") {
  const auto tube = AnalyticSurface::generalized_cylinder(2, 1);
  Eigen::VectorXd far(3);
  far << 50.0, 0.0, 0.0;
  const CutoffIdentityReport rep = verify_cutoff_identity(tube, far, 1.0);
  CHECK(rep.empty_region);
}

TEST_CASE("discrete cutoff identity converges on the tube") {
  auto run = [](int res) {
    const TriangleMesh tube = gen_tube(std::sqrt(2.0), 10.0, res);
    const VertexGeometry g = compute_vertex_geometry(tube);
    const DriftOperators ops = assemble_operators(tube, g);
    return verify_cutoff_identity(tube, g, ops, Eigen::Vector3d::Zero(), 2.0);
  };
  const CutoffIdentityReport lo = run(24), hi = run(48);
  CHECK(hi.residual.l2 < lo.residual.l2 / 1.3);
  CHECK(hi.bound_holds);
}

TEST_CASE("phi-f scan reproduces the hand-derived tube constants") {
  const auto tube = AnalyticSurface::generalized_cylinder(2, 1);
  const CutoffScan scan =
      scan_phi_f_max(tube, Eigen::VectorXd::Zero(3), 2.0, 0.5);
  CHECK(scan.k == 0.125);  // (2 v0^2)^{-1} with v0 = 2, exact in doubles
  CHECK(scan.v0 == 2.0);
  REQUIRE(scan.y0 >= 0);
  CHECK(scan.v[scan.y0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(scan.h[scan.y0] == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  CHECK(scan.f[scan.y0] == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(scan.hypothesis_violations == 0);
  CHECK(*scan.v_equation_linf < 1e-14);
  CHECK(scan.bound_ratio > 0);
  CHECK(scan.bound_ratio < 1.0);

  const auto sphere = AnalyticSurface::generalized_cylinder(2, 2);
  const CutoffScan s2 =
      scan_phi_f_max(sphere, Eigen::VectorXd::Zero(3), 3.0, 0.5);
  CHECK(s2.h[s2.y0] == doctest::Approx(8.0 / 7.0).epsilon(1e-13));
  CHECK(s2.f[s2.y0] == doctest::Approx(4.0 / 7.0).epsilon(1e-13));
}

TEST_CASE("scan admits the boundary case delta = H") {
  const auto tube = AnalyticSurface::generalized_cylinder(2, 1);
  const double delta = std::sqrt(0.5);  // exactly the tube's H
  const CutoffScan scan =
      scan_phi_f_max(tube, Eigen::VectorXd::Zero(3), 2.0, delta);
  CHECK(scan.hypothesis_violations == 0);
  // k v^2 = 1/2: h = 2 v^2 stays finite
  CHECK(scan.h[scan.y0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("scan internal consistency: stored fields recompute bitwise") {
  const TriangleMesh tube = gen_tube(std::sqrt(2.0), 10.0, 24);
  const VertexGeometry g = compute_vertex_geometry(tube);
  const CutoffScan scan =
      scan_phi_f_max(tube, g, Eigen::Vector3d::Zero(), 2.0, 0.5);
  for (int i = 0; i < scan.F.size(); ++i) {
    const double mu = scan.mu[i];
    CHECK(scan.phi[i] == std::pow(std::max(mu, 0.0), 3));  // bit-for-bit
    if (scan.admitted[i]) {
      CHECK(scan.f[i] == g.A2[i] * scan.h[i]);
      CHECK(scan.F[i] == scan.phi[i] * scan.f[i]);
    } else {
      CHECK(scan.F[i] == 0.0);  // F vanishes outside the admitted set
    }
  }
  // deterministic argmax tie-break: recompute
  int best = -1;
  for (int i = 0; i < scan.F.size(); ++i)
    if (scan.admitted[i] && (best < 0 || scan.F[i] > scan.F[best])) best = i;
  CHECK(best == scan.y0);
}

TEST_CASE("scan flags hypothesis violations without aborting") {
  const TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.2, 5);
  const VertexGeometry g = compute_vertex_geometry(m);
  const CutoffScan scan =
      scan_phi_f_max(m, g, Eigen::Vector3d::Zero(), 3.0, 0.9);
  CHECK(scan.hypothesis_violations > 0);
  CHECK(scan.y0 >= 0);
}

TEST_CASE("thm1 empirical constants are refinement-stable on exact shrinkers") {
  auto run = [](const TriangleMesh& m, double R) {
    const VertexGeometry g = compute_vertex_geometry(m);
    return audit_mean_convex_estimate(m, g, R, 0.5);
  };
  const AuditReport s3 = run(gen_icosphere(2.0, 3), 4.0);
  const AuditReport s4 = run(gen_icosphere(2.0, 4), 4.0);
  CHECK(std::abs(s3.empirical_C - s4.empirical_C) < 0.05 * s4.empirical_C);
  // ratio field bounded by max(1, sup|A|/inf H) (R - |x|)/R; on the sphere
  // sup|A|/inf H = 1/sqrt(2) and |x| = 2
  CHECK(s4.empirical_C <= 1.0 * (4.0 - 2.0) / 4.0 + 1e-6);

  const AuditReport t1 = run(gen_tube(std::sqrt(2.0), 16.0, 24), 8.0);
  const AuditReport t2 = run(gen_tube(std::sqrt(2.0), 16.0, 48), 8.0);
  CHECK(std::abs(t1.empirical_C - t2.empirical_C) < 0.05 * t2.empirical_C);
}

TEST_CASE("tau statistics track the shrinker residual along a flow") {
  // the desk-scale shadow of the exponential tau decay: as the rescaled flow
  // relaxes a perturbed sphere, |grad tau| and the residual fall together
  TriangleMesh m = perturb_along_normals(gen_icosphere(2.0, 3), 0.1, 11);
  FlowConfig cfg;
  cfg.stepper = Stepper::SemiImplicit;
  cfg.dt = 0.01;
  cfg.max_steps = 60;
  cfg.snapshot_every = 10;
  cfg.monitor_every = 10;
  const FlowTrajectory traj = run_flow(m, cfg);
  REQUIRE(traj.snapshots.size() >= 5);
  std::vector<double> residuals, tau_sup, growth_c;
  for (const auto& snap : traj.snapshots) {
    const VertexGeometry g = compute_vertex_geometry(snap);
    residuals.push_back(shrinker_residual(snap, g).summary.linf);
    tau_sup.push_back(tau_field(snap, g).grad_summary.linf);
    growth_c.push_back(check_growth_bound(snap, g, 4.0).empirical_C);
  }
  CHECK(spearman(residuals, tau_sup) > 0.5);
  // the linear-growth constant relaxes along with the residual
  CHECK(growth_c.back() < growth_c.front());
}

TEST_SUITE_END();
