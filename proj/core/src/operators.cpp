#include "mcflab/operators.hpp"

#include <Eigen/Geometry>

#include <vector>

namespace mcflab {

namespace {

// gradient of the hat function of corner `corner` on face f
Eigen::Vector3d hat_gradient(const TriangleMesh& mesh, int f, int corner) {
  const Eigen::Vector3d a = mesh.V.row(mesh.F(f, corner)),
                        b = mesh.V.row(mesh.F(f, (corner + 1) % 3)),
                        c = mesh.V.row(mesh.F(f, (corner + 2) % 3));
  const Eigen::Vector3d n2 = (b - a).cross(c - a);  // 2*area*normal
  const double two_area = n2.norm();
  if (two_area < 1e-300) throw Error("degenerate face in gradient assembly");
  return n2.cross(c - b) / (two_area * two_area);
}

}  // namespace

VectorField tangential_gradient(const TriangleMesh& mesh,
                                const VertexGeometry& geom,
                                const ScalarField& f) {
  if (f.size() != mesh.n_vertices())
    throw Error("tangential_gradient: field length mismatch");
  Eigen::MatrixX3d acc = Eigen::MatrixX3d::Zero(mesh.n_vertices(), 3);
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int face = 0; face < mesh.n_faces(); ++face) {
    const double area = mesh.face_area(face);
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int e = 0; e < 3; ++e)
      grad += f[mesh.F(face, e)] * hat_gradient(mesh, face, e);
    for (int e = 0; e < 3; ++e) {
      acc.row(mesh.F(face, e)) += area * grad;
      wsum[mesh.F(face, e)] += area;
    }
  }
  VectorField out;
  out.v.resize(mesh.n_vertices(), 3);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    Eigen::Vector3d v = acc.row(i) / wsum[i];
    const Eigen::Vector3d n = geom.normals.row(i);
    out.v.row(i) = v - v.dot(n) * n;
  }
  return out;
}

DriftOperators assemble_operators(const TriangleMesh& mesh,
                                  const VertexGeometry& geom) {
  const int nv = mesh.n_vertices();
  DriftOperators ops;
  ops.mass = geom.area;
  for (int i = 0; i < nv; ++i)
    if (!(ops.mass[i] > 0))
      throw Error("zero area weight at vertex " + std::to_string(i));

  using T = Eigen::Triplet<double>;

  // cotangent stiffness, (Cf)_i = sum_j w_ij (f_j - f_i)
  std::vector<T> ct;
  ct.reserve(mesh.n_faces() * 12);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    for (int e = 0; e < 3; ++e) {
      const int i = mesh.F(f, e), j = mesh.F(f, (e + 1) % 3),
                k = mesh.F(f, (e + 2) % 3);
      const Eigen::Vector3d a = mesh.V.row(i) - mesh.V.row(k);
      const Eigen::Vector3d b = mesh.V.row(j) - mesh.V.row(k);
      const double cross = a.cross(b).norm();
      const double w = cross < 1e-300 ? 0.0 : 0.5 * a.dot(b) / cross;
      ct.emplace_back(i, j, w);
      ct.emplace_back(j, i, w);
      ct.emplace_back(i, i, -w);
      ct.emplace_back(j, j, -w);
    }
  }
  ops.stiffness.resize(nv, nv);
  ops.stiffness.setFromTriplets(ct.begin(), ct.end());

  Eigen::SparseMatrix<double> minv(nv, nv);
  {
    std::vector<T> mt;
    mt.reserve(nv);
    for (int i = 0; i < nv; ++i) mt.emplace_back(i, i, 1.0 / ops.mass[i]);
    minv.setFromTriplets(mt.begin(), mt.end());
  }
  ops.laplacian = minv * ops.stiffness;

  // vertex-averaged tangential gradient, one sparse matrix per component
  std::vector<T> gx, gy, gz;
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(nv);
  for (int f = 0; f < mesh.n_faces(); ++f)
    for (int e = 0; e < 3; ++e) wsum[mesh.F(f, e)] += mesh.face_area(f);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const double area = mesh.face_area(f);
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector3d hg = hat_gradient(mesh, f, e);
      const int src = mesh.F(f, e);
      for (int c = 0; c < 3; ++c) {
        const int dst = mesh.F(f, c);
        const double w = area / wsum[dst];
        gx.emplace_back(dst, src, w * hg.x());
        gy.emplace_back(dst, src, w * hg.y());
        gz.emplace_back(dst, src, w * hg.z());
      }
    }
  }
  ops.grad_x.resize(nv, nv);
  ops.grad_y.resize(nv, nv);
  ops.grad_z.resize(nv, nv);
  ops.grad_x.setFromTriplets(gx.begin(), gx.end());
  ops.grad_y.setFromTriplets(gy.begin(), gy.end());
  ops.grad_z.setFromTriplets(gz.begin(), gz.end());

  // tangent-plane projection: g <- g - n (n . g)
  {
    auto diag = [nv](const Eigen::VectorXd& d) {
      Eigen::SparseMatrix<double> m(nv, nv);
      std::vector<T> t;
      t.reserve(nv);
      for (int i = 0; i < nv; ++i) t.emplace_back(i, i, d[i]);
      m.setFromTriplets(t.begin(), t.end());
      return m;
    };
    const Eigen::SparseMatrix<double> nx = diag(geom.normals.col(0));
    const Eigen::SparseMatrix<double> ny = diag(geom.normals.col(1));
    const Eigen::SparseMatrix<double> nz = diag(geom.normals.col(2));
    const Eigen::SparseMatrix<double> ndot =
        nx * ops.grad_x + ny * ops.grad_y + nz * ops.grad_z;
    ops.grad_x = ops.grad_x - nx * ndot;
    ops.grad_y = ops.grad_y - ny * ndot;
    ops.grad_z = ops.grad_z - nz * ndot;

    ops.drift = 0.5 * (diag(mesh.V.col(0)) * ops.grad_x +
                       diag(mesh.V.col(1)) * ops.grad_y +
                       diag(mesh.V.col(2)) * ops.grad_z);
    ops.drift_laplacian = ops.laplacian - ops.drift;
    ops.stability = ops.drift_laplacian;
    ops.translator = ops.laplacian + ops.grad_z;
    const Eigen::VectorXd a2half = geom.A2.array() + 0.5;
    ops.stability = ops.stability + diag(a2half);
    ops.translator = ops.translator + diag(geom.A2);
  }
  return ops;
}

}  // namespace mcflab
