#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "mrmom/medium.hpp"
#include "mrmom/mesh.hpp"

namespace mrmom {

// ---- solenoidal cycles on a single mesh ------------------------------------

// Cycle column around one vertex: +-1/length on the interior edges incident
// to v, signed so the resulting surface current is divergence free.  Requires
// every incident edge to be interior (vertex not on an open boundary).
void append_vertex_loop(const TriMesh& mesh, const EdgeConnectivity& conn,
                        int v, int column,
                        std::vector<Eigen::Triplet<double>>& out);

// Independent handle cycles (2 * genus per closed component), built by a
// tree/cotree split: BFS spanning tree of the face-adjacency (dual) graph,
// spanning tree of the vertex graph on the uncrossed edges, one fundamental
// dual cycle per leftover edge.
Eigen::SparseMatrix<double> global_loops(const TriMesh& mesh,
                                         const EdgeConnectivity& conn);

// ---- multiresolution change of basis ---------------------------------------

// Per-level views of the nesting chain carried by a refined mesh: meshes,
// edge connectivity, ancestor triangle of each finest triangle with the
// accumulated barycentric map into it, and descendant lists.
struct HierarchyLevels {
  std::vector<TriMesh> meshes;                    // [0..J], J = finest
  std::vector<EdgeConnectivity> conns;
  // ancestor[l][t] / anc_bary[l][t]: level-l ancestor of finest triangle t and
  // the map sending finest-triangle barycentric coords into it
  std::vector<std::vector<int>> ancestor;
  std::vector<std::vector<Eigen::Matrix3d>> anc_bary;
  std::vector<std::vector<std::vector<int>>> descendants;  // [l][coarse tri]
  int depth() const { return static_cast<int>(meshes.size()); }
};

HierarchyLevels build_levels(const TriMesh& fine);

// Stop level selection: fixed index if >= 0, otherwise the coarsest level
// whose longest edge does not exceed `wavelength_fraction` of the operating
// wavelength (finest level if none qualifies).
struct StopRule {
  int fixed_index = -1;
  double wavelength_fraction = 0.125;
};
int choose_stop_level(const HierarchyLevels& levels, const Medium& med,
                      const StopRule& rule);

enum class MrKind {
  kVertexLoop,   // solenoidal, anchored at a vertex of its level
  kGlobalLoop,   // solenoidal handle cycle
  kCoarseRwg,    // nonsolenoidal stop-level edge function (dual-tree edge)
  kDetailRwg,    // nonsolenoidal edge function on an intra-parent edge
};

// Solenoidal half of the basis: either one cycle per finest-mesh vertex
// (single-scale) or cycles distributed over the hierarchy (stop-level
// vertices plus the vertices each refinement introduces).  The
// nonsolenoidal half is hierarchical in both variants.
enum class LoopVariant { kPointLoops, kHierarchicalLoops };

// Square change of basis from the hierarchical mixed set to the finest edge
// functions: column j holds finest-mesh coefficients of one basis function.
// Coarse-level functions are carried to the finest mesh by matching the
// parametric edge fluxes, which keeps cycles exactly divergence free even
// when refinement snapped vertices to a curved surface.
struct MrBasis {
  Eigen::SparseMatrix<double> Q;
  std::vector<int> level;
  std::vector<MrKind> kind;
  LoopVariant variant = LoopVariant::kHierarchicalLoops;
  int stop_level = 0;
  int num_levels = 1;

  std::vector<int> columns_at(int lvl) const {
    std::vector<int> idx;
    for (int j = 0; j < static_cast<int>(level.size()); ++j)
      if (level[j] == lvl) idx.push_back(j);
    return idx;
  }
};

// Requires a closed surface carrying a nesting record (or none, in which case
// the basis degenerates to cycles + tree edge functions on the single level).
// The hierarchical variant is orthonormalized (cycles first, so cycle columns
// stay exact divergence-free circulations); the flat variant keeps raw
// one-ring cycles.  Verifies invertibility of Q and throws if the
// construction lost rank.
MrBasis build_mr_basis(const TriMesh& fine, const EdgeConnectivity& conn,
                       int stop_level,
                       LoopVariant variant = LoopVariant::kHierarchicalLoops);

// Symmetric diagonal-normalized congruence  D Q^T A Q D  with
// D = diag((Q^T A Q)_ii^(-1/2)), principal complex root (unit fallback on
// zero diagonals).  The complex root makes the rescaled diagonal exactly 1:
// besides equalizing magnitudes it rotates the inductive (+j) cycle branch
// and the capacitive (-j) charge branch onto a common half-plane, which is
// what keeps Krylov iteration counts low.  |D| is unchanged from the
// modulus-only rescale, so singular values and condition numbers match it.
struct MrTransformed {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd scale;  // D diagonal
};
MrTransformed apply_mr(const Eigen::MatrixXcd& A,
                       const Eigen::SparseMatrix<double>& Q);

// Right-hand side and solution maps for the transformed system:
// y solves (D Q^T A Q D) y = D Q^T b, then x = Q D y.
Eigen::VectorXcd mr_rhs(const Eigen::SparseMatrix<double>& Q,
                        const Eigen::VectorXcd& scale,
                        const Eigen::VectorXcd& b);
Eigen::VectorXcd mr_recover(const Eigen::SparseMatrix<double>& Q,
                            const Eigen::VectorXcd& scale,
                            const Eigen::VectorXcd& y);

}  // namespace mrmom
