#include <queue>

#include "mrmom/operators.hpp"

namespace mrmom {

std::vector<bool> efie_only_rows(const TriMesh& mesh,
                                 const EdgeConnectivity& conn) {
  const int nt = mesh.num_triangles();

  // flood triangle components over shared edges, then flag components that
  // carry boundary edges as open
  std::vector<int> comp(nt, -1);
  std::vector<std::vector<int>> tri_neighbors(nt);
  for (const auto& e : conn.interior) {
    tri_neighbors[e.tri_plus].push_back(e.tri_minus);
    tri_neighbors[e.tri_minus].push_back(e.tri_plus);
  }
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (comp[seed] >= 0) continue;
    std::queue<int> bfs;
    bfs.push(seed);
    comp[seed] = ncomp;
    while (!bfs.empty()) {
      const int t = bfs.front();
      bfs.pop();
      for (int u : tri_neighbors[t])
        if (comp[u] < 0) {
          comp[u] = ncomp;
          bfs.push(u);
        }
    }
    ++ncomp;
  }
  std::vector<bool> open_comp(ncomp, false);
  for (const auto& b : conn.boundary) open_comp[comp[b.tri]] = true;

  std::vector<bool> rows(conn.num_dofs(), false);
  for (int e = 0; e < conn.num_dofs(); ++e)
    rows[e] = open_comp[comp[conn.interior[e].tri_plus]];
  return rows;
}

Eigen::MatrixXcd cfie_combine(const Eigen::MatrixXcd& Z,
                              const Eigen::MatrixXcd& B, const Medium& med,
                              const std::vector<bool>& efie_only,
                              double alpha) {
  const double inv_eta = 1.0 / med.impedance();
  Eigen::MatrixXcd C = inv_eta * Z;
  for (int m = 0; m < C.rows(); ++m)
    if (efie_only.empty() || !efie_only[m]) C.row(m) += alpha * B.row(m);
  return C;
}

Eigen::VectorXcd cfie_rhs(const Eigen::VectorXcd& v, const Eigen::VectorXcd& h,
                          const Medium& med, const std::vector<bool>& efie_only,
                          double alpha) {
  const double inv_eta = 1.0 / med.impedance();
  Eigen::VectorXcd rhs = inv_eta * v;
  for (int m = 0; m < rhs.size(); ++m)
    if (efie_only.empty() || !efie_only[m]) rhs(m) += alpha * h(m);
  return rhs;
}

Eigen::MatrixXcd assemble_cfie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               double alpha, const AssemblyOptions& opts) {
  return cfie_combine(assemble_efie(mesh, conn, med, opts),
                      assemble_mfie(mesh, conn, med, opts), med,
                      efie_only_rows(mesh, conn), alpha);
}

Eigen::VectorXcd assemble_cfie_rhs(const TriMesh& mesh,
                                   const EdgeConnectivity& conn,
                                   const PlaneWave& pw, const Medium& med,
                                   double alpha, const AssemblyOptions& opts) {
  return cfie_rhs(efie_rhs(mesh, conn, pw, med, opts),
                  mfie_rhs(mesh, conn, pw, med, opts), med,
                  efie_only_rows(mesh, conn), alpha);
}

}  // namespace mrmom
