#include <queue>
#include <stdexcept>

#include "mrmom/hierarchy.hpp"

namespace mrmom {

void append_vertex_loop(const TriMesh& mesh, const EdgeConnectivity& conn,
                        int v, int column,
                        std::vector<Eigen::Triplet<double>>& out) {
  (void)mesh;
  bool any = false;
  for (int e : conn.vertex_edges[v]) {
    const InteriorEdge& edge = conn.interior[e];
    const double s = edge.v0 == v ? 1.0 : -1.0;
    out.emplace_back(e, column, s / edge.length);
    any = true;
  }
  if (!any) throw std::runtime_error("vertex loop: isolated vertex");
}

Eigen::SparseMatrix<double> global_loops(const TriMesh& mesh,
                                         const EdgeConnectivity& conn) {
  const int nt = mesh.num_triangles();
  const int nv = mesh.num_vertices();
  const int ne = conn.num_dofs();

  // dual spanning forest: BFS over triangles through interior edges
  std::vector<int> dual_parent_edge(nt, -1);  // edge crossed to reach triangle
  std::vector<int> dual_parent_tri(nt, -1);
  std::vector<bool> dual_seen(nt, false);
  std::vector<bool> edge_in_dual(ne, false);
  std::vector<std::vector<int>> tri_edge_list(nt);
  for (int e = 0; e < ne; ++e) {
    tri_edge_list[conn.interior[e].tri_plus].push_back(e);
    tri_edge_list[conn.interior[e].tri_minus].push_back(e);
  }
  for (int seed = 0; seed < nt; ++seed) {
    if (dual_seen[seed]) continue;
    std::queue<int> bfs;
    bfs.push(seed);
    dual_seen[seed] = true;
    while (!bfs.empty()) {
      const int t = bfs.front();
      bfs.pop();
      for (int e : tri_edge_list[t]) {
        const InteriorEdge& edge = conn.interior[e];
        const int other = edge.tri_plus == t ? edge.tri_minus : edge.tri_plus;
        if (dual_seen[other]) continue;
        dual_seen[other] = true;
        dual_parent_edge[other] = e;
        dual_parent_tri[other] = t;
        edge_in_dual[e] = true;
        bfs.push(other);
      }
    }
  }

  // primal spanning forest restricted to edges the dual tree does not cross
  std::vector<bool> vert_seen(nv, false);
  std::vector<bool> edge_in_primal(ne, false);
  std::vector<std::vector<std::pair<int, int>>> vert_adj(nv);  // (other, edge)
  for (int e = 0; e < ne; ++e) {
    if (edge_in_dual[e]) continue;
    vert_adj[conn.interior[e].v0].emplace_back(conn.interior[e].v1, e);
    vert_adj[conn.interior[e].v1].emplace_back(conn.interior[e].v0, e);
  }
  for (int seed = 0; seed < nv; ++seed) {
    if (vert_seen[seed]) continue;
    std::queue<int> bfs;
    bfs.push(seed);
    vert_seen[seed] = true;
    while (!bfs.empty()) {
      const int v = bfs.front();
      bfs.pop();
      for (auto [u, e] : vert_adj[v]) {
        if (vert_seen[u]) continue;
        vert_seen[u] = true;
        edge_in_primal[e] = true;
        bfs.push(u);
      }
    }
  }

  std::vector<int> leftover;
  for (int e = 0; e < ne; ++e)
    if (!edge_in_dual[e] && !edge_in_primal[e]) leftover.push_back(e);

  // one handle cycle per leftover edge: cross it, then return through the
  // dual tree; every intermediate triangle gets one inflow and one outflow,
  // so the result is divergence free by construction
  std::vector<Eigen::Triplet<double>> trip;
  auto cross = [&](int e, int from, std::vector<double>& acc) {
    const InteriorEdge& edge = conn.interior[e];
    const double s = edge.tri_plus == from ? 1.0 : -1.0;
    acc[e] += s / edge.length;
  };
  for (size_t li = 0; li < leftover.size(); ++li) {
    const int e = leftover[li];
    std::vector<double> acc(ne, 0.0);
    const InteriorEdge& edge = conn.interior[e];
    cross(e, edge.tri_plus, acc);
    // dual-tree walk tri_minus -> root and tri_plus -> root; the shared tail
    // cancels, leaving the path tri_minus -> tri_plus
    int t = edge.tri_minus;
    while (dual_parent_tri[t] >= 0) {
      cross(dual_parent_edge[t], t, acc);
      t = dual_parent_tri[t];
    }
    t = edge.tri_plus;
    while (dual_parent_tri[t] >= 0) {
      const InteriorEdge& pe = conn.interior[dual_parent_edge[t]];
      const double s = pe.tri_plus == t ? 1.0 : -1.0;
      acc[dual_parent_edge[t]] -= s / pe.length;  // reversed direction
      t = dual_parent_tri[t];
    }
    for (int j = 0; j < ne; ++j)
      if (acc[j] != 0.0) trip.emplace_back(j, static_cast<int>(li), acc[j]);
  }

  Eigen::SparseMatrix<double> loops(ne, static_cast<int>(leftover.size()));
  loops.setFromTriplets(trip.begin(), trip.end());
  return loops;
}

}  // namespace mrmom
