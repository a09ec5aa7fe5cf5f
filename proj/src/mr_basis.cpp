#include <Eigen/SparseLU>
#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "mrmom/hierarchy.hpp"
#include "mrmom/quadrature.hpp"

namespace mrmom {

namespace {

// One basis function at level l, expressed on that level's edge functions.
using LevelCoeffs = std::vector<std::pair<int, double>>;

struct Projector {
  const HierarchyLevels& h;
  const EdgeConnectivity& fine_conn;
  int fine_level;

  // Carries a level-l function to finest-mesh coefficients by matching the
  // flux through the parametric image of every fine edge; images live in the
  // flat planes of the level-l triangles, so cycles stay divergence free to
  // rounding even on curvature-snapped refinements.
  void project(int l, const LevelCoeffs& coeffs, int col,
               std::vector<Eigen::Triplet<double>>& out) const {
    if (l == fine_level) {
      for (const auto& [e, c] : coeffs) out.emplace_back(e, col, c);
      return;
    }
    const TriMesh& cm = h.meshes[l];
    const EdgeConnectivity& cc = h.conns[l];

    // per support-triangle list of (sign*len/(2A), free vertex)
    struct LocalTerm {
      double scale;
      Eigen::Vector3d free_vertex;
    };
    std::unordered_map<int, std::vector<LocalTerm>> support;
    for (const auto& [j, c] : coeffs) {
      const InteriorEdge& e = cc.interior[j];
      for (const int ct : {e.tri_plus, e.tri_minus}) {
        const auto& tri = cm.triangles[ct];
        int local = -1;
        for (int k = 0; k < 3; ++k)
          if (cc.tri_edges[ct][k] == j) local = k;
        const double area =
            triangle_area(cm.vertices[tri[0]], cm.vertices[tri[1]],
                          cm.vertices[tri[2]]);
        const double sign = ct == e.tri_plus ? 1.0 : -1.0;
        support[ct].push_back(
            {c * sign * e.length / (2.0 * area), cm.vertices[tri[local]]});
      }
    }

    for (const auto& [ct, terms] : support) {
      const auto& ctri = cm.triangles[ct];
      const Eigen::Vector3d cv0 = cm.vertices[ctri[0]];
      const Eigen::Vector3d cv1 = cm.vertices[ctri[1]];
      const Eigen::Vector3d cv2 = cm.vertices[ctri[2]];
      const Eigen::Vector3d nc = triangle_normal(cv0, cv1, cv2);

      for (const int t : h.descendants[l][ct]) {
        // images of the fine-triangle vertices inside the flat level-l cell
        const Eigen::Matrix3d& bary = h.anc_bary[l][t];
        std::array<Eigen::Vector3d, 3> img;
        for (int i = 0; i < 3; ++i)
          img[i] = bary(0, i) * cv0 + bary(1, i) * cv1 + bary(2, i) * cv2;

        for (int k = 0; k < 3; ++k) {
          const int e = fine_conn.tri_edges[t][k];
          if (e < 0 || fine_conn.interior[e].tri_plus != t) continue;
          const Eigen::Vector3d a = img[(k + 1) % 3];
          const Eigen::Vector3d b = img[(k + 2) % 3];
          const Eigen::Vector3d mid = 0.5 * (a + b);
          const Eigen::Vector3d outward = (b - a).cross(nc);
          Eigen::Vector3d f = Eigen::Vector3d::Zero();
          for (const LocalTerm& lt : terms)
            f += lt.scale * (mid - lt.free_vertex);
          // |outward| equals the image edge length, giving the image flux
          const double flux = f.dot(outward);
          const double coef = flux / fine_conn.interior[e].length;
          if (coef != 0.0) out.emplace_back(e, col, coef);
        }
      }
    }
  }
};

std::vector<int> triangle_components(const TriMesh& mesh,
                                     const EdgeConnectivity& conn, int* count) {
  const int nt = mesh.num_triangles();
  std::vector<std::vector<int>> adj(nt);
  for (const auto& e : conn.interior) {
    adj[e.tri_plus].push_back(e.tri_minus);
    adj[e.tri_minus].push_back(e.tri_plus);
  }
  std::vector<int> comp(nt, -1);
  int nc = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (comp[seed] >= 0) continue;
    std::queue<int> bfs;
    bfs.push(seed);
    comp[seed] = nc;
    while (!bfs.empty()) {
      const int t = bfs.front();
      bfs.pop();
      for (int u : adj[t])
        if (comp[u] < 0) {
          comp[u] = nc;
          bfs.push(u);
        }
    }
    ++nc;
  }
  if (count) *count = nc;
  return comp;
}

// BFS dual spanning forest; returns the crossed-edge set.
std::vector<int> dual_tree_edges(const TriMesh& mesh,
                                 const EdgeConnectivity& conn) {
  const int nt = mesh.num_triangles();
  std::vector<std::vector<std::pair<int, int>>> adj(nt);  // (tri, edge)
  for (int e = 0; e < conn.num_dofs(); ++e) {
    const auto& ie = conn.interior[e];
    adj[ie.tri_plus].emplace_back(ie.tri_minus, e);
    adj[ie.tri_minus].emplace_back(ie.tri_plus, e);
  }
  std::vector<bool> seen(nt, false);
  std::vector<int> edges;
  for (int seed = 0; seed < nt; ++seed) {
    if (seen[seed]) continue;
    std::queue<int> bfs;
    bfs.push(seed);
    seen[seed] = true;
    while (!bfs.empty()) {
      const int t = bfs.front();
      bfs.pop();
      for (auto [u, e] : adj[t])
        if (!seen[u]) {
          seen[u] = true;
          edges.push_back(e);
          bfs.push(u);
        }
    }
  }
  return edges;
}

}  // namespace

MrBasis build_mr_basis(const TriMesh& fine, const EdgeConnectivity& conn,
                       int stop_level, LoopVariant variant) {
  if (!conn.closed)
    throw std::runtime_error(
        "multiresolution basis requires a closed surface");
  const HierarchyLevels h = build_levels(fine);
  const int finest = h.depth() - 1;
  const int stop = std::clamp(stop_level, 0, finest);
  const int n = conn.num_dofs();

  MrBasis basis;
  basis.variant = variant;
  basis.stop_level = stop;
  basis.num_levels = finest + 1;
  const Projector proj{h, conn, finest};

  std::vector<Eigen::Triplet<double>> trip;
  int col = 0;
  auto emit = [&](int l, const LevelCoeffs& coeffs, MrKind kind) {
    proj.project(l, coeffs, col, trip);
    basis.level.push_back(l);
    basis.kind.push_back(kind);
    ++col;
  };

  auto vertex_loop_coeffs = [](const EdgeConnectivity& lc, int v) {
    LevelCoeffs coeffs;
    for (int j : lc.vertex_edges[v]) {
      const InteriorEdge& e = lc.interior[j];
      coeffs.emplace_back(j, (e.v0 == v ? 1.0 : -1.0) / e.length);
    }
    return coeffs;
  };

  // cycles at every vertex of level l except one per connected component,
  // plus one cycle per surface handle
  auto emit_all_cycles = [&](int l) {
    const TriMesh& lm = h.meshes[l];
    const EdgeConnectivity& lc = h.conns[l];
    int ncomp = 0;
    const std::vector<int> comp = triangle_components(lm, lc, &ncomp);
    std::vector<int> skip_vertex(ncomp, -1);
    std::vector<int> vcomp(lm.num_vertices(), -1);
    for (int t = 0; t < lm.num_triangles(); ++t)
      for (int k = 0; k < 3; ++k) vcomp[lm.triangles[t][k]] = comp[t];
    for (int v = 0; v < lm.num_vertices(); ++v)
      if (vcomp[v] >= 0) skip_vertex[vcomp[v]] = v;  // last vertex seen wins
    for (int v = 0; v < lm.num_vertices(); ++v) {
      if (vcomp[v] < 0 || skip_vertex[vcomp[v]] == v) continue;
      emit(l, vertex_loop_coeffs(lc, v), MrKind::kVertexLoop);
    }
    const Eigen::SparseMatrix<double> gl = global_loops(lm, lc);
    for (int c = 0; c < gl.cols(); ++c) {
      LevelCoeffs coeffs;
      for (Eigen::SparseMatrix<double>::InnerIterator it(gl, c); it; ++it)
        coeffs.emplace_back(static_cast<int>(it.row()), it.value());
      emit(l, coeffs, MrKind::kGlobalLoop);
    }
  };

  if (variant == LoopVariant::kPointLoops) {
    // single-scale solenoidal half: all cycles live on the finest mesh
    emit_all_cycles(finest);
  } else {
    emit_all_cycles(stop);
  }

  // stop-level charge carriers: one edge function per dual-tree edge
  const TriMesh& sm = h.meshes[stop];
  const EdgeConnectivity& sc = h.conns[stop];
  for (int j : dual_tree_edges(sm, sc))
    emit(stop, {{j, 1.0}}, MrKind::kCoarseRwg);

  // finer levels: intra-parent edge functions, plus (for the hierarchical
  // variant) cycles anchored at the vertices this level introduced
  for (int l = stop + 1; l <= finest; ++l) {
    const TriMesh& lm = h.meshes[l];
    const EdgeConnectivity& lc = h.conns[l];
    const auto& links = fine.nesting->links[l - 1];
    for (int j = 0; j < lc.num_dofs(); ++j) {
      const InteriorEdge& e = lc.interior[j];
      if (links[e.tri_plus].parent == links[e.tri_minus].parent)
        emit(l, {{j, 1.0}}, MrKind::kDetailRwg);
    }
    if (variant == LoopVariant::kHierarchicalLoops) {
      const int old_verts = static_cast<int>(h.meshes[l - 1].vertices.size());
      for (int v = old_verts; v < lm.num_vertices(); ++v)
        emit(l, vertex_loop_coeffs(lc, v), MrKind::kVertexLoop);
    }
  }

  if (col != n)
    throw std::runtime_error(
        "change of basis count mismatch: got " + std::to_string(col) +
        " functions for " + std::to_string(n) +
        " edges; nesting record is not conforming");

  basis.Q.resize(n, n);
  basis.Q.setFromTriplets(trip.begin(), trip.end());

  // Orthonormalize the hierarchical variant with a single ordered QR: all
  // cycle columns first (coarse to fine), then the non-solenoidal columns
  // (coarse to fine).  Cycles are orthogonalized only against cycles, so
  // every cycle column stays an exact combination of one-ring circulations
  // and remains divergence free; later columns lose their cycle content but
  // keep their charge.  With orthonormal columns the change of basis is a
  // similarity transform, so all of the conditioning work is carried by the
  // diagonal rescale, which is exactly what keeps the transformed operator
  // well behaved from the static regime up through moderate frequencies.
  // The flat variant keeps its raw one-ring cycles: their growing mutual
  // overlap under refinement is the behaviour that variant is meant to show.
  if (variant == LoopVariant::kHierarchicalLoops) {
    auto is_cycle = [&](int j) {
      return basis.kind[j] == MrKind::kVertexLoop ||
             basis.kind[j] == MrKind::kGlobalLoop;
    };
    std::vector<int> order;
    order.reserve(n);
    for (int pass = 0; pass < 2; ++pass)
      for (int lvl = stop; lvl <= finest; ++lvl)
        for (int j = 0; j < n; ++j)
          if (basis.level[j] == lvl && is_cycle(j) == (pass == 0))
            order.push_back(j);
    const Eigen::MatrixXd qd(basis.Q);
    Eigen::MatrixXd permuted(n, n);
    for (int j = 0; j < n; ++j) permuted.col(j) = qd.col(order[j]);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(permuted);
    const Eigen::MatrixXd ortho =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd out(n, n);
    for (int j = 0; j < n; ++j) out.col(order[j]) = ortho.col(j);
    basis.Q = out.sparseView();
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(basis.Q);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("change of basis is rank deficient");
  return basis;
}

MrTransformed apply_mr(const Eigen::MatrixXcd& A,
                       const Eigen::SparseMatrix<double>& Q) {
  const Eigen::SparseMatrix<Complex> Qc = Q.cast<Complex>();
  const Eigen::MatrixXcd AQ = A * Qc;
  Eigen::MatrixXcd M = Qc.transpose() * AQ;

  MrTransformed out;
  out.scale.resize(M.rows());
  for (int i = 0; i < M.rows(); ++i) {
    const Complex d = M(i, i);
    out.scale(i) = d == Complex(0, 0) ? Complex(1, 0) : 1.0 / std::sqrt(d);
  }
  for (int j = 0; j < M.cols(); ++j) M.col(j) *= out.scale(j);
  for (int i = 0; i < M.rows(); ++i) M.row(i) *= out.scale(i);
  out.matrix = std::move(M);
  return out;
}

Eigen::VectorXcd mr_rhs(const Eigen::SparseMatrix<double>& Q,
                        const Eigen::VectorXcd& scale,
                        const Eigen::VectorXcd& b) {
  const Eigen::SparseMatrix<Complex> Qc = Q.cast<Complex>();
  Eigen::VectorXcd t = Qc.transpose() * b;
  return t.cwiseProduct(scale);
}

Eigen::VectorXcd mr_recover(const Eigen::SparseMatrix<double>& Q,
                            const Eigen::VectorXcd& scale,
                            const Eigen::VectorXcd& y) {
  const Eigen::SparseMatrix<Complex> Qc = Q.cast<Complex>();
  return Qc * y.cwiseProduct(scale);
}

}  // namespace mrmom
