#include "mcflab/meshgen.hpp"

#include <array>
#include <functional>
#include <cmath>
#include <map>
#include <vector>

#include "mcflab/rng.hpp"
#include "mcflab/vertex_geometry.hpp"

namespace mcflab {

namespace {

TriangleMesh from_lists(const std::vector<Eigen::Vector3d>& verts,
                        const std::vector<std::array<int, 3>>& faces) {
  TriangleMesh mesh;
  mesh.V.resize(static_cast<long>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.V.row(static_cast<long>(i)) = verts[i];
  mesh.F.resize(static_cast<long>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    mesh.F.row(static_cast<long>(f)) << faces[f][0], faces[f][1], faces[f][2];
  return mesh;
}

void finalize(TriangleMesh& mesh) {
  const Eigen::Vector3d lo = mesh.V.colwise().minCoeff();
  const Eigen::Vector3d hi = mesh.V.colwise().maxCoeff();
  const double scale2 = (hi - lo).squaredNorm();
  mesh.validate(1e-12 * std::max(scale2, 1e-30));
}

// Stitch two concentric closed vertex rings (sorted by angle) into a triangle
// annulus with a two-pointer walk. Orientation: (outer, inner) pairs wound
// counterclockwise seen from +z give +z-side normals.
void stitch_rings(const std::vector<int>& inner,
                  const std::vector<double>& inner_ang,
                  const std::vector<int>& outer,
                  const std::vector<double>& outer_ang,
                  std::vector<std::array<int, 3>>& faces) {
  const size_t ni = inner.size(), no = outer.size();
  size_t i = 0, o = 0;
  auto ang = [](const std::vector<double>& a, size_t idx, size_t n) {
    return a[idx % n] + 2.0 * M_PI * (idx / n);
  };
  while (i < ni || o < no) {
    const double next_i = ang(inner_ang, i + 1, ni);
    const double next_o = ang(outer_ang, o + 1, no);
    if (o < no && (next_o <= next_i || i >= ni)) {
      faces.push_back({outer[o % no], outer[(o + 1) % no], inner[i % ni]});
      ++o;
    } else {
      faces.push_back({inner[(i + 1) % ni], inner[i % ni], outer[o % no]});
      ++i;
    }
  }
}

}  // namespace

TriangleMesh gen_icosphere(double radius, int subdiv, int relax_iters) {
  if (radius <= 0) throw Error("gen_icosphere: radius must be positive");
  if (subdiv < 0 || subdiv > 9) throw Error("gen_icosphere: subdiv out of range");
  if (relax_iters < 0) throw Error("gen_icosphere: relax_iters must be >= 0");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& v : verts) v = radius * v.normalized();

  for (int level = 0; level < subdiv; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto k = std::minmax(a, b);
      auto it = midpoint.find(k);
      if (it != midpoint.end()) return it->second;
      const Eigen::Vector3d m =
          radius * (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint[k] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh = from_lists(verts, faces);
  // outward orientation
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Eigen::Vector3d c = (mesh.V.row(mesh.F(f, 0)) +
                               mesh.V.row(mesh.F(f, 1)) +
                               mesh.V.row(mesh.F(f, 2))) / 3.0;
    if (mesh.face_normal(f).dot(c) < 0) std::swap(mesh.F(f, 1), mesh.F(f, 2));
  }
  // optional tangential relaxation on the sphere: equalizes the vertex
  // distribution so discretization-error fields vary smoothly, which the
  // identity convergence studies need
  if (relax_iters > 0) {
    const MeshAdjacency adj = build_adjacency(mesh);
    for (int it = 0; it < relax_iters; ++it) {
      Eigen::MatrixX3d next = mesh.V;
      for (int i = 0; i < mesh.n_vertices(); ++i) {
        Eigen::Vector3d c = Eigen::Vector3d::Zero();
        for (int j : adj.vertex_vertices[i]) c += mesh.V.row(j);
        next.row(i) = radius * c.normalized();
      }
      mesh.V = next;
    }
  }
  finalize(mesh);
  return mesh;
}

TriangleMesh gen_tube(double radius, double length, int res) {
  if (radius <= 0 || length <= 0) throw Error("gen_tube: radius/length > 0");
  if (res < 8) throw Error("gen_tube: resolution below minimal level 8");
  const int nth = res;
  const double edge = 2.0 * M_PI * radius / nth;
  const int nz = std::max(2, static_cast<int>(std::lround(length / edge)) + 1);

  std::vector<Eigen::Vector3d> verts;
  for (int j = 0; j < nz; ++j) {
    const double z = -0.5 * length + length * j / (nz - 1);
    for (int i = 0; i < nth; ++i) {
      const double th = 2.0 * M_PI * i / nth;
      verts.push_back({radius * std::cos(th), radius * std::sin(th), z});
    }
  }
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j + 1 < nz; ++j) {
    for (int i = 0; i < nth; ++i) {
      const int a = j * nth + i, b = j * nth + (i + 1) % nth;
      const int c = (j + 1) * nth + i, d = (j + 1) * nth + (i + 1) % nth;
      // outward winding
      faces.push_back({a, b, d});
      faces.push_back({a, d, c});
    }
  }
  TriangleMesh mesh = from_lists(verts, faces);
  finalize(mesh);
  return mesh;
}

namespace {

// Hexagonal disk triangulation: ring j of m has 6j vertices at radius r(j).
TriangleMesh radial_graph(int rings, const std::vector<double>& radii,
                          const std::function<double(double)>& height) {
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> prev_ids = {0};
  std::vector<double> prev_ang = {0.0};
  verts.push_back({0.0, 0.0, height(0.0)});

  for (int j = 1; j <= rings; ++j) {
    const int count = 6 * j;
    std::vector<int> ids(count);
    std::vector<double> angs(count);
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * M_PI * i / count;
      ids[i] = static_cast<int>(verts.size());
      angs[i] = th;
      verts.push_back({radii[j] * std::cos(th), radii[j] * std::sin(th),
                       height(radii[j])});
    }
    if (j == 1) {
      for (int i = 0; i < count; ++i)
        faces.push_back({0, ids[i], ids[(i + 1) % count]});
    } else {
      stitch_rings(prev_ids, prev_ang, ids, angs, faces);
    }
    prev_ids = ids;
    prev_ang = angs;
  }
  return from_lists(verts, faces);
}

}  // namespace

TriangleMesh gen_disk(double radius, int res) {
  if (radius <= 0) throw Error("gen_disk: radius must be positive");
  if (res < 2) throw Error("gen_disk: resolution below minimal level 2");
  std::vector<double> radii(res + 1);
  for (int j = 0; j <= res; ++j) radii[j] = radius * j / res;
  TriangleMesh mesh = radial_graph(res, radii, [](double) { return 0.0; });
  finalize(mesh);
  return mesh;
}

TriangleMesh gen_bowl_cap(const BowlProfile& profile, double r_max, int res) {
  if (res < 2) throw Error("gen_bowl_cap: resolution below minimal level 2");
  if (r_max > profile.r_max() + 1e-12)
    throw Error("gen_bowl_cap: r_max exceeds profile range");
  std::vector<double> radii(res + 1);
  for (int j = 0; j <= res; ++j) radii[j] = r_max * j / res;
  TriangleMesh mesh = radial_graph(
      res, radii, [&](double r) { return r == 0.0 ? 0.0 : profile.eval_u(r); });
  finalize(mesh);
  return mesh;
}

TriangleMesh gen_grim_reaper_patch(double u_max, double width, int res) {
  if (!(u_max > 0) || u_max >= M_PI / 2)
    throw Error("gen_grim_reaper_patch: need 0 < u_max < pi/2");
  if (res < 4) throw Error("gen_grim_reaper_patch: resolution below 4");
  const int nu = res;
  // arclength across the profile, to keep cells near square
  const double span = 2.0 * std::log(std::tan(u_max) + 1.0 / std::cos(u_max));
  const double cell = span / nu;
  const int nv = std::max(2, static_cast<int>(std::lround(width / cell)));

  std::vector<Eigen::Vector3d> verts;
  for (int j = 0; j <= nv; ++j) {
    const double v = -0.5 * width + width * j / nv;
    for (int i = 0; i <= nu; ++i) {
      const double u = -u_max + 2.0 * u_max * i / nu;
      verts.push_back({u, v, -std::log(std::cos(u))});
    }
  }
  std::vector<std::array<int, 3>> faces;
  const int stride = nu + 1;
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const int a = j * stride + i, b = a + 1;
      const int c = a + stride, d = c + 1;
      // upward winding (+x3 side); the diagonal must touch each patch
      // corner or the corner vertex ends up with valence 2
      bool diag_ad = (i + j) % 2 == 0;
      if (i == 0 && j == 0) diag_ad = true;
      if (i == nu - 1 && j == 0) diag_ad = false;
      if (i == 0 && j == nv - 1) diag_ad = false;
      if (i == nu - 1 && j == nv - 1) diag_ad = true;
      if (diag_ad) {
        faces.push_back({a, b, d});
        faces.push_back({a, d, c});
      } else {
        faces.push_back({a, b, c});
        faces.push_back({b, d, c});
      }
    }
  }
  TriangleMesh mesh = from_lists(verts, faces);
  finalize(mesh);
  return mesh;
}

TriangleMesh perturb_along_normals(const TriangleMesh& mesh, double amplitude,
                                   std::uint64_t seed, double wavelength_min,
                                   double wavelength_max) {
  if (amplitude < 0) throw Error("perturb_along_normals: amplitude >= 0");
  if (amplitude == 0) return mesh;
  if (!(wavelength_min > 0) || wavelength_max < wavelength_min)
    throw Error("perturb_along_normals: bad wavelength band");

  constexpr int kModes = 8;
  Rng rng(seed);
  std::vector<Eigen::Vector3d> wavevec(kModes);
  std::vector<double> amp(kModes), phase(kModes);
  double norm = 0.0;
  for (int m = 0; m < kModes; ++m) {
    // uniform direction on the sphere
    const double z = rng.uniform(-1.0, 1.0);
    const double th = rng.uniform(0.0, 2.0 * M_PI);
    const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d dir(rr * std::cos(th), rr * std::sin(th), z);
    const double wavelength = rng.uniform(wavelength_min, wavelength_max);
    wavevec[m] = 2.0 * M_PI / wavelength * dir;
    amp[m] = rng.uniform(0.5, 1.0);
    phase[m] = rng.uniform(0.0, 2.0 * M_PI);
    norm += amp[m];
  }

  const Eigen::MatrixX3d normals = area_weighted_normals(mesh);
  TriangleMesh out = mesh;
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const Eigen::Vector3d x = mesh.V.row(i);
    double field = 0.0;
    for (int m = 0; m < kModes; ++m)
      field += amp[m] * std::cos(wavevec[m].dot(x) + phase[m]);
    field /= norm;  // |field| <= 1
    out.V.row(i) = x + amplitude * field * Eigen::Vector3d(normals.row(i));
  }
  finalize(out);
  return out;
}

TriangleMesh gen_mesh(const MeshGenSpec& spec) {
  TriangleMesh mesh;
  if (spec.kind == "icosphere")
    mesh = gen_icosphere(spec.radius, spec.subdiv, spec.relax_iters);
  else if (spec.kind == "tube")
    mesh = gen_tube(spec.radius, spec.length, spec.res);
  else if (spec.kind == "disk")
    mesh = gen_disk(spec.radius, spec.res);
  else if (spec.kind == "grim_reaper")
    mesh = gen_grim_reaper_patch(spec.u_max, spec.width, spec.res);
  else if (spec.kind == "bowl")
    mesh = gen_bowl_cap(bowl_profile(spec.r_max, spec.bowl_step), spec.r_max,
                        spec.res);
  else
    throw Error("gen_mesh: unknown kind '" + spec.kind + "'");
  if (spec.perturbation > 0)
    mesh = perturb_along_normals(mesh, spec.perturbation, spec.seed,
                                 spec.wavelength_min, spec.wavelength_max);
  return mesh;
}

}  // namespace mcflab
