#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mcflab/mesh.hpp"
#include "mcflab/vertex_geometry.hpp"

namespace mcflab {

using ScalarField = Eigen::VectorXd;

// One tangent 3-vector per vertex (orthogonal to the vertex normal).
struct VectorField {
  Eigen::MatrixX3d v;
};

// Per-face affine gradients averaged to vertices with face-area weights and
// projected into the vertex tangent planes.
VectorField tangential_gradient(const TriangleMesh& mesh,
                                const VertexGeometry& geom,
                                const ScalarField& f);

// Sparse operators on vertex scalar fields. laplacian = mass^{-1} stiffness
// with cotangent weights; drift f = <x, grad f>/2; drift_laplacian is the
// Gaussian-weight Laplacian, stability adds |A|^2 + 1/2, translator is the
// e3-direction analogue Delta + <e3, grad .> + |A|^2.
struct DriftOperators {
  Eigen::VectorXd mass;                    // mixed Voronoi areas
  Eigen::SparseMatrix<double> stiffness;   // symmetric, rows sum to zero
  Eigen::SparseMatrix<double> laplacian;
  Eigen::SparseMatrix<double> grad_x, grad_y, grad_z;
  Eigen::SparseMatrix<double> drift;
  Eigen::SparseMatrix<double> drift_laplacian;  // laplacian - drift
  Eigen::SparseMatrix<double> stability;        // drift_laplacian + diag(|A|^2 + 1/2)
  Eigen::SparseMatrix<double> translator;       // laplacian + grad_z + diag(|A|^2)

  // <V, grad .> for an arbitrary constant direction.
  Eigen::SparseMatrix<double> direction_derivative(
      const Eigen::Vector3d& V) const {
    return V.x() * grad_x + V.y() * grad_y + V.z() * grad_z;
  }
};

DriftOperators assemble_operators(const TriangleMesh& mesh,
                                  const VertexGeometry& geom);

}  // namespace mcflab
