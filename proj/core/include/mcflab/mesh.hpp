#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "mcflab/numeric.hpp"

namespace mcflab {

struct NonManifoldError : Error {
  NonManifoldError(std::string msg, std::vector<std::pair<int, int>> bad)
      : Error(std::move(msg)), edges(std::move(bad)) {}
  std::vector<std::pair<int, int>> edges;
};

// Oriented triangle mesh in 3-space. Immutable by convention: operations that
// change geometry return a new mesh.
struct TriangleMesh {
  Eigen::MatrixX3d V;
  Eigen::MatrixX3i F;

  int n_vertices() const { return static_cast<int>(V.rows()); }
  int n_faces() const { return static_cast<int>(F.rows()); }

  double face_area(int f) const;
  double total_area() const;
  Eigen::Vector3d face_normal(int f) const;  // unit normal from orientation
  // 4*sqrt(3)*area / (sum of squared edge lengths); 1 for equilateral.
  double face_quality(int f) const;
  double min_face_quality() const;
  double min_edge_length() const;

  // Manifoldness (every edge in at most two faces), consistent orientation,
  // and the face-area degeneracy floor. Throws NonManifoldError / Error.
  void validate(double area_floor = 0.0) const;

  std::vector<char> boundary_vertices() const;
  bool has_boundary() const;

  // Shortest edge-path distance from each vertex to the boundary vertex set
  // (infinity when the mesh is closed).
  std::vector<double> distance_to_boundary() const;

  // Vertices farther than `collar` from the boundary; the region statistics
  // are computed over. Closed meshes are all-interior.
  std::vector<char> interior_mask(double collar) const;
};

// One-ring connectivity used by geometry and transport code.
struct MeshAdjacency {
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> vertex_vertices;
};

MeshAdjacency build_adjacency(const TriangleMesh& mesh);

}  // namespace mcflab
