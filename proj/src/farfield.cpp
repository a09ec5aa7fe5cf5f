#include "mrmom/farfield.hpp"
#include "mrmom/operators.hpp"
#include "mrmom/quadrature.hpp"

namespace mrmom {

Eigen::Vector3cd radiated_far_field(const TriMesh& mesh,
                                    const EdgeConnectivity& conn,
                                    const Medium& med,
                                    const Eigen::VectorXcd& x,
                                    const Eigen::Vector3d& rhat,
                                    int quad_degree) {
  const double k = med.wavenumber();
  const TriQuadratureRule& rule = tri_rule(quad_degree);
  Eigen::Vector3cd moment = Eigen::Vector3cd::Zero();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int nd = collect_tri_dofs(mesh, conn, t, dofs);
    if (nd == 0) continue;
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d& a = mesh.vertices[tri[0]];
    const TriQuadrature q =
        map_rule(rule, a, mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    const double area =
        triangle_area(a, mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    for (int i = 0; i < q.size(); ++i) {
      const Eigen::Vector3d r = q.points.row(i).transpose();
      const Complex phase = std::exp(Complex(0, k * rhat.dot(r)));
      Eigen::Vector3cd cur = Eigen::Vector3cd::Zero();
      for (int d = 0; d < nd; ++d)
        cur += (x(dofs[d].dof) * dofs[d].sign * dofs[d].length / (2.0 * area)) *
               (r - dofs[d].free_vertex).cast<Complex>();
      moment += q.weights[i] * phase * cur;
    }
  }
  const Complex scale(0, -med.omega() * med.mu / (4.0 * kPi));
  const Eigen::Vector3cd f = scale * moment;
  return f - rhat.cast<Complex>() * rhat.cast<Complex>().dot(f);
}

double bistatic_rcs(const TriMesh& mesh, const EdgeConnectivity& conn,
                    const Medium& med, const Eigen::VectorXcd& x,
                    const Eigen::Vector3d& rhat, double incident_amplitude,
                    int quad_degree) {
  const Eigen::Vector3cd f =
      radiated_far_field(mesh, conn, med, x, rhat, quad_degree);
  return 4.0 * kPi * f.squaredNorm() / (incident_amplitude * incident_amplitude);
}

}  // namespace mrmom
