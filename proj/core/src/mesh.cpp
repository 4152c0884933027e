#include "mcflab/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace mcflab {

double TriangleMesh::face_area(int f) const {
  const Eigen::Vector3d a = V.row(F(f, 0)), b = V.row(F(f, 1)),
                        c = V.row(F(f, 2));
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriangleMesh::total_area() const {
  double s = 0;
  for (int f = 0; f < n_faces(); ++f) s += face_area(f);
  return s;
}

Eigen::Vector3d TriangleMesh::face_normal(int f) const {
  const Eigen::Vector3d a = V.row(F(f, 0)), b = V.row(F(f, 1)),
                        c = V.row(F(f, 2));
  return (b - a).cross(c - a).normalized();
}

double TriangleMesh::face_quality(int f) const {
  const Eigen::Vector3d a = V.row(F(f, 0)), b = V.row(F(f, 1)),
                        c = V.row(F(f, 2));
  const double l2 =
      (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
  if (l2 == 0) return 0;
  return 4.0 * std::sqrt(3.0) * face_area(f) / l2;
}

double TriangleMesh::min_face_quality() const {
  double q = std::numeric_limits<double>::infinity();
  for (int f = 0; f < n_faces(); ++f) q = std::min(q, face_quality(f));
  return n_faces() ? q : 0.0;
}

double TriangleMesh::min_edge_length() const {
  double h = std::numeric_limits<double>::infinity();
  for (int f = 0; f < n_faces(); ++f)
    for (int e = 0; e < 3; ++e)
      h = std::min(h, (V.row(F(f, e)) - V.row(F(f, (e + 1) % 3))).norm());
  return h;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

void TriangleMesh::validate(double area_floor) const {
  const int nv = n_vertices();
  for (int f = 0; f < n_faces(); ++f) {
    for (int e = 0; e < 3; ++e) {
      const int v = F(f, e);
      if (v < 0 || v >= nv) {
        std::ostringstream os;
        os << "face " << f << " references vertex " << v << " out of range";
        throw Error(os.str());
      }
    }
    if (F(f, 0) == F(f, 1) || F(f, 1) == F(f, 2) || F(f, 0) == F(f, 2))
      throw Error("face " + std::to_string(f) + " repeats a vertex");
    if (face_area(f) < area_floor) {
      std::ostringstream os;
      os << "face " << f << " has area " << face_area(f)
         << " below the degeneracy floor " << area_floor;
      throw Error(os.str());
    }
  }

  // directed-edge counts: manifold means each undirected edge appears in at
  // most two faces, and consistent orientation means each direction at most
  // once.
  std::map<EdgeKey, int> count;
  std::map<EdgeKey, int> directed;  // +1 for (a<b) direction, -1 for reverse
  for (int f = 0; f < n_faces(); ++f) {
    for (int e = 0; e < 3; ++e) {
      const int a = F(f, e), b = F(f, (e + 1) % 3);
      count[key(a, b)] += 1;
      directed[key(a, b)] += (a < b) ? 1 : -1;
    }
  }
  std::vector<EdgeKey> bad;
  for (const auto& [k, c] : count)
    if (c > 2) bad.push_back(k);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "non-manifold mesh: " << bad.size()
       << " edge(s) shared by more than two faces:";
    for (size_t i = 0; i < bad.size() && i < 8; ++i)
      os << " (" << bad[i].first << "," << bad[i].second << ")";
    if (bad.size() > 8) os << " ...";
    throw NonManifoldError(os.str(), bad);
  }
  for (const auto& [k, d] : directed) {
    if (count[k] == 2 && d != 0) {
      std::ostringstream os;
      os << "inconsistent orientation across edge (" << k.first << ","
         << k.second << ")";
      throw Error(os.str());
    }
  }
}

std::vector<char> TriangleMesh::boundary_vertices() const {
  std::map<EdgeKey, int> count;
  for (int f = 0; f < n_faces(); ++f)
    for (int e = 0; e < 3; ++e) count[key(F(f, e), F(f, (e + 1) % 3))] += 1;
  std::vector<char> b(n_vertices(), 0);
  for (const auto& [k, c] : count) {
    if (c == 1) {
      b[k.first] = 1;
      b[k.second] = 1;
    }
  }
  return b;
}

bool TriangleMesh::has_boundary() const {
  const auto b = boundary_vertices();
  return std::any_of(b.begin(), b.end(), [](char c) { return c != 0; });
}

std::vector<double> TriangleMesh::distance_to_boundary() const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n_vertices(), inf);
  const auto bnd = boundary_vertices();

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int i = 0; i < n_vertices(); ++i) {
    if (bnd[i]) {
      dist[i] = 0;
      heap.push({0.0, i});
    }
  }
  if (heap.empty()) return dist;

  const auto adj = build_adjacency(*this);
  while (!heap.empty()) {
    auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i]) continue;
    for (int j : adj.vertex_vertices[i]) {
      const double nd = d + (V.row(i) - V.row(j)).norm();
      if (nd < dist[j]) {
        dist[j] = nd;
        heap.push({nd, j});
      }
    }
  }
  return dist;
}

std::vector<char> TriangleMesh::interior_mask(double collar) const {
  std::vector<char> mask(n_vertices(), 1);
  if (!has_boundary()) return mask;
  const auto dist = distance_to_boundary();
  for (int i = 0; i < n_vertices(); ++i) mask[i] = dist[i] > collar ? 1 : 0;
  return mask;
}

MeshAdjacency build_adjacency(const TriangleMesh& mesh) {
  MeshAdjacency adj;
  adj.vertex_faces.resize(mesh.n_vertices());
  std::vector<std::set<int>> nbrs(mesh.n_vertices());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.F(f, e), b = mesh.F(f, (e + 1) % 3);
      adj.vertex_faces[a].push_back(f);
      nbrs[a].insert(b);
      nbrs[b].insert(a);
    }
  }
  adj.vertex_vertices.resize(mesh.n_vertices());
  for (int i = 0; i < mesh.n_vertices(); ++i)
    adj.vertex_vertices[i].assign(nbrs[i].begin(), nbrs[i].end());
  return adj;
}

}  // namespace mcflab
