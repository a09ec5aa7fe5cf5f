#include <stdexcept>

#include "mrmom/hierarchy.hpp"

namespace mrmom {

HierarchyLevels build_levels(const TriMesh& fine) {
  HierarchyLevels h;
  // number of strictly coarser meshes in the chain
  const int depth =
      fine.nesting ? static_cast<int>(fine.nesting->levels.size()) : 0;
  h.meshes.resize(depth + 1);
  for (int l = 0; l < depth; ++l) {
    h.meshes[l].vertices = fine.nesting->levels[l].vertices;
    h.meshes[l].triangles = fine.nesting->levels[l].triangles;
  }
  h.meshes[depth] = fine;

  h.conns.resize(depth + 1);
  for (int l = 0; l <= depth; ++l)
    h.conns[l] = build_connectivity(h.meshes[l]);

  const int nt_fine = h.meshes[depth].num_triangles();
  h.ancestor.assign(depth + 1, {});
  h.anc_bary.assign(depth + 1, {});
  h.ancestor[depth].resize(nt_fine);
  h.anc_bary[depth].assign(nt_fine, Eigen::Matrix3d::Identity());
  for (int t = 0; t < nt_fine; ++t) h.ancestor[depth][t] = t;
  for (int l = depth - 1; l >= 0; --l) {
    const auto& links = fine.nesting->links[l];  // children = level l+1 tris
    h.ancestor[l].resize(nt_fine);
    h.anc_bary[l].resize(nt_fine);
    for (int t = 0; t < nt_fine; ++t) {
      const int child = h.ancestor[l + 1][t];
      h.ancestor[l][t] = links[child].parent;
      h.anc_bary[l][t] = links[child].bary * h.anc_bary[l + 1][t];
    }
  }

  h.descendants.assign(depth + 1, {});
  for (int l = 0; l <= depth; ++l) {
    h.descendants[l].assign(h.meshes[l].num_triangles(), {});
    for (int t = 0; t < nt_fine; ++t)
      h.descendants[l][h.ancestor[l][t]].push_back(t);
  }
  return h;
}

int choose_stop_level(const HierarchyLevels& levels, const Medium& med,
                      const StopRule& rule) {
  const int finest = levels.depth() - 1;
  if (rule.fixed_index >= 0) return std::min(rule.fixed_index, finest);
  const double limit = rule.wavelength_fraction * med.wavelength();
  for (int l = 0; l <= finest; ++l) {
    double hmax = 0;
    const TriMesh& m = levels.meshes[l];
    for (const auto& tri : m.triangles)
      for (int k = 0; k < 3; ++k)
        hmax = std::max(hmax, (m.vertices[tri[k]] -
                               m.vertices[tri[(k + 1) % 3]]).norm());
    if (hmax <= limit) return l;
  }
  return finest;  // nothing electrically coarse enough; degenerate hierarchy
}

}  // namespace mrmom
