#pragma once

#include <Eigen/Core>

#include <vector>

#include "mcflab/mesh.hpp"

namespace mcflab {

// Per-vertex discrete geometry: outward unit normal, mean curvature from the
// cotangent mean-curvature vector over the mixed Voronoi area, shape operator
// from a one-ring quadric fit (two-ring fallback below 5 neighbors) with its
// trace matched to the cotangent H, |A|^2 as the squared Frobenius norm, and
// the mixed Voronoi area weight.
struct VertexGeometry {
  Eigen::MatrixX3d normals;
  Eigen::VectorXd H;
  Eigen::VectorXd A2;
  std::vector<Eigen::Matrix3d> shape;  // ambient 3x3, tangent-plane supported
  Eigen::VectorXd area;
  std::vector<char> flagged;  // rank-deficient fits, excluded from statistics
  double total_area = 0;
};

Eigen::MatrixX3d area_weighted_normals(const TriangleMesh& mesh);

// fit_rings: quadric stencil radius (1 = one-ring with a two-ring fallback
// below 5 neighbors, 2 = always two-ring).
VertexGeometry compute_vertex_geometry(const TriangleMesh& mesh,
                                       int fit_rings = 1);

}  // namespace mcflab
