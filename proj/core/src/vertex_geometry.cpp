#include "mcflab/vertex_geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>

namespace mcflab {

namespace {

double cot(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double cross = a.cross(b).norm();
  if (cross < 1e-300) return 0.0;
  return a.dot(b) / cross;
}

}  // namespace

Eigen::MatrixX3d area_weighted_normals(const TriangleMesh& mesh) {
  Eigen::MatrixX3d normals = Eigen::MatrixX3d::Zero(mesh.n_vertices(), 3);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Eigen::Vector3d a = mesh.V.row(mesh.F(f, 0)),
                          b = mesh.V.row(mesh.F(f, 1)),
                          c = mesh.V.row(mesh.F(f, 2));
    const Eigen::Vector3d an = 0.5 * (b - a).cross(c - a);  // area * normal
    for (int e = 0; e < 3; ++e) normals.row(mesh.F(f, e)) += an;
  }
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const double len = normals.row(i).norm();
    if (len > 0) normals.row(i) /= len;
  }
  return normals;
}

VertexGeometry compute_vertex_geometry(const TriangleMesh& mesh,
                                       int fit_rings) {
  if (fit_rings < 1 || fit_rings > 2)
    throw Error("compute_vertex_geometry: fit_rings must be 1 or 2");
  const int nv = mesh.n_vertices();
  VertexGeometry g;
  g.normals = area_weighted_normals(mesh);
  g.H.setZero(nv);
  g.A2.setZero(nv);
  g.area.setZero(nv);
  g.shape.assign(nv, Eigen::Matrix3d::Zero());
  g.flagged.assign(nv, 0);

  // mixed Voronoi areas (Voronoi cell inside non-obtuse triangles, area/2 at
  // the obtuse corner and area/4 at the others), which partition each face
  Eigen::MatrixX3d mcv = Eigen::MatrixX3d::Zero(nv, 3);  // 2*area*H*n accum
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const int i0 = mesh.F(f, 0), i1 = mesh.F(f, 1), i2 = mesh.F(f, 2);
    const Eigen::Vector3d p0 = mesh.V.row(i0), p1 = mesh.V.row(i1),
                          p2 = mesh.V.row(i2);
    const double c0 = cot(p1 - p0, p2 - p0);
    const double c1 = cot(p2 - p1, p0 - p1);
    const double c2 = cot(p0 - p2, p1 - p2);
    const double area = mesh.face_area(f);

    // cotangent accumulation for the mean curvature vector
    mcv.row(i0) += 0.5 * (c2 * (p0 - p1) + c1 * (p0 - p2));
    mcv.row(i1) += 0.5 * (c0 * (p1 - p2) + c2 * (p1 - p0));
    mcv.row(i2) += 0.5 * (c1 * (p2 - p0) + c0 * (p2 - p1));

    if (c0 >= 0 && c1 >= 0 && c2 >= 0) {
      const double l01 = (p1 - p0).squaredNorm();
      const double l12 = (p2 - p1).squaredNorm();
      const double l20 = (p0 - p2).squaredNorm();
      g.area[i0] += (l01 * c2 + l20 * c1) / 8.0;
      g.area[i1] += (l01 * c2 + l12 * c0) / 8.0;
      g.area[i2] += (l20 * c1 + l12 * c0) / 8.0;
    } else {
      g.area[i0] += (c0 < 0 ? area / 2 : area / 4);
      g.area[i1] += (c1 < 0 ? area / 2 : area / 4);
      g.area[i2] += (c2 < 0 ? area / 2 : area / 4);
    }
  }
  g.total_area = g.area.sum();

  const MeshAdjacency adj = build_adjacency(mesh);
  for (int i = 0; i < nv; ++i) {
    if (adj.vertex_vertices[i].size() < 3)
      throw Error("vertex " + std::to_string(i) + " has valence below 3");
    if (g.area[i] <= 0)
      throw Error("vertex " + std::to_string(i) + " has nonpositive area weight");
  }

  // quadric fit per vertex, in the frame of the area-weighted normal. The
  // fit's linear term refines the normal; the refined normal resolves the
  // mean-curvature sign and carries the tangent plane everywhere downstream.
  for (int i = 0; i < nv; ++i) {
    const Eigen::Vector3d n = g.normals.row(i);
    int axis = 0;
    for (int d = 1; d < 3; ++d)
      if (std::abs(n[d]) < std::abs(n[axis])) axis = d;
    Eigen::Vector3d t1 = Eigen::Vector3d::Unit(axis);
    t1 = (t1 - t1.dot(n) * n).normalized();
    const Eigen::Vector3d t2 = n.cross(t1);

    std::vector<int> nbrs = adj.vertex_vertices[i];
    if (fit_rings == 2 || nbrs.size() < 5) {
      std::set<int> two_ring(nbrs.begin(), nbrs.end());
      for (int j : adj.vertex_vertices[i])
        for (int l : adj.vertex_vertices[j])
          if (l != i) two_ring.insert(l);
      nbrs.assign(two_ring.begin(), two_ring.end());
    }

    Eigen::MatrixXd M(static_cast<long>(nbrs.size()), 5);
    Eigen::VectorXd rhs(static_cast<long>(nbrs.size()));
    for (size_t r = 0; r < nbrs.size(); ++r) {
      const Eigen::Vector3d d = mesh.V.row(nbrs[r]) - mesh.V.row(i);
      const double u = d.dot(t1), v = d.dot(t2);
      M.row(static_cast<long>(r)) << 0.5 * u * u, u * v, 0.5 * v * v, u, v;
      rhs[static_cast<long>(r)] = d.dot(n);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);

    Eigen::Vector3d n_ref = n;
    Eigen::Matrix2d S2;
    bool ok = nbrs.size() >= 5 && qr.rank() == 5;
    if (ok) {
      const Eigen::VectorXd q = qr.solve(rhs);
      Eigen::Matrix2d hess;
      hess << q[0], q[1], q[1], q[2];
      const Eigen::Vector2d grad(q[3], q[4]);
      const double g2 = grad.squaredNorm();
      n_ref = (n - q[3] * t1 - q[4] * t2).normalized();
      // P^{-1/2} for P = I + grad gradT
      Eigen::Matrix2d pinvsqrt = Eigen::Matrix2d::Identity();
      if (g2 > 0) {
        const Eigen::Vector2d gh = grad / std::sqrt(g2);
        pinvsqrt -= (1.0 - 1.0 / std::sqrt(1.0 + g2)) * gh * gh.transpose();
      }
      // shape operator of the local graph w.r.t. the fitted normal direction
      S2 = -(pinvsqrt * hess * pinvsqrt) / std::sqrt(1.0 + g2);
    }
    g.normals.row(i) = n_ref;
    const Eigen::Vector3d m = mcv.row(i) / g.area[i];
    g.H[i] = (m.dot(n_ref) >= 0 ? 1.0 : -1.0) * m.norm();
    if (!ok) {
      // degenerate neighborhood: isotropic operator with the right trace
      g.flagged[i] = 1;
      S2 = 0.5 * g.H[i] * Eigen::Matrix2d::Identity();
    } else {
      // match the trace to the cotangent mean curvature
      S2 += 0.5 * (g.H[i] - S2.trace()) * Eigen::Matrix2d::Identity();
    }
    g.A2[i] = S2.squaredNorm();
    Eigen::Vector3d s1 = t1 - t1.dot(n_ref) * n_ref;
    s1.normalize();
    const Eigen::Vector3d s2v = n_ref.cross(s1);
    Eigen::Matrix<double, 3, 2> T;
    T.col(0) = s1;
    T.col(1) = s2v;
    g.shape[i] = T * S2 * T.transpose();
  }
  return g;
}

}  // namespace mcflab
