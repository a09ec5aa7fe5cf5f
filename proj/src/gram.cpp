#include "mrmom/operators.hpp"
#include "mrmom/quadrature.hpp"

namespace mrmom {

int collect_tri_dofs(const TriMesh& mesh, const EdgeConnectivity& conn, int t,
                     std::array<TriDof, 3>& out) {
  int count = 0;
  for (int k = 0; k < 3; ++k) {
    const int e = conn.tri_edges[t][k];
    if (e < 0) continue;
    TriDof d;
    d.dof = e;
    d.sign = conn.tri_signs[t][k];
    d.free_vertex = mesh.vertices[mesh.triangles[t][k]];
    d.length = conn.interior[e].length;
    out[count++] = d;
  }
  return count;
}

Eigen::MatrixXd assemble_gram(const TriMesh& mesh,
                              const EdgeConnectivity& conn) {
  const int n = conn.num_dofs();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const TriQuadratureRule& rule = tri_rule(2);  // exact for the quadratic integrand
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int nd = collect_tri_dofs(mesh, conn, t, dofs);
    if (nd == 0) continue;
    const auto& tri = mesh.triangles[t];
    const TriQuadrature q = map_rule(rule, mesh.vertices[tri[0]],
                                     mesh.vertices[tri[1]],
                                     mesh.vertices[tri[2]]);
    const double area = triangle_area(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    for (int a = 0; a < nd; ++a)
      for (int b = a; b < nd; ++b) {
        double acc = 0;
        for (int p = 0; p < q.size(); ++p) {
          const Eigen::Vector3d r = q.points.row(p).transpose();
          acc += q.weights[p] *
                 (r - dofs[a].free_vertex).dot(r - dofs[b].free_vertex);
        }
        const double coef = dofs[a].sign * dofs[b].sign * dofs[a].length *
                            dofs[b].length / (4.0 * area * area);
        g(dofs[a].dof, dofs[b].dof) += coef * acc;
        if (a != b) g(dofs[b].dof, dofs[a].dof) += coef * acc;
      }
  }
  return g;
}

}  // namespace mrmom
