#include <map>
#include <set>
#include <stdexcept>

#include "mrmom/mesh.hpp"

namespace mrmom {

namespace {

struct EdgeKey {
  int a, b;
  bool operator<(const EdgeKey& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};
EdgeKey key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Exact dyadic barycentric maps for the four midpoint children and the two
// bisection children (split edge opposite local vertex k).
Eigen::Matrix3d cols(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                     const Eigen::Vector3d& z) {
  Eigen::Matrix3d m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return m;
}

const Eigen::Vector3d e0(1, 0, 0), e1(0, 1, 0), e2(0, 0, 1);
const Eigen::Vector3d m01 = (e0 + e1) / 2, m12 = (e1 + e2) / 2,
                      m20 = (e2 + e0) / 2;

TriMesh refine_pass(const TriMesh& mesh, const RegionPredicate& region,
                    double radius) {
  const int nt = mesh.num_triangles();

  std::vector<bool> is_green(nt, false);
  if (mesh.nesting && !mesh.nesting->links.empty()) {
    const auto& last = mesh.nesting->links.back();
    for (int t = 0; t < nt; ++t) is_green[t] = last[t].green;
  }

  auto in_region = [&](int t) {
    const auto& tri = mesh.triangles[t];
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      if (region(mesh.vertices[tri[k]])) return true;
      centroid += mesh.vertices[tri[k]] / 3.0;
    }
    return region(centroid);
  };

  // 0 untouched, 1 green (one split edge), 2 red (all edges split)
  std::vector<int> mode(nt, 0);
  for (int t = 0; t < nt; ++t) {
    if (!in_region(t)) continue;
    if (is_green[t])
      throw std::runtime_error(
          "refine_region: region touches a green closure triangle; green "
          "triangles are terminal — refine with a shrinking region sequence");
    mode[t] = 2;
  }

  // conformity closure: split edges force neighbors to bisect (one hanging
  // node) or to become red (two or more)
  std::set<EdgeKey> split_edges;
  auto collect_split_edges = [&]() {
    split_edges.clear();
    for (int t = 0; t < nt; ++t) {
      if (mode[t] != 2) continue;
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k)
        split_edges.insert(key(tri[(k + 1) % 3], tri[(k + 2) % 3]));
    }
  };
  for (bool changed = true; changed;) {
    changed = false;
    collect_split_edges();
    for (int t = 0; t < nt; ++t) {
      if (mode[t] == 2) continue;
      const auto& tri = mesh.triangles[t];
      int hung = 0;
      for (int k = 0; k < 3; ++k)
        if (split_edges.count(key(tri[(k + 1) % 3], tri[(k + 2) % 3]))) ++hung;
      const int want = hung >= 2 ? 2 : (hung == 1 ? 1 : 0);
      if (want > mode[t]) {
        if (is_green[t])
          throw std::runtime_error(
              "refine_region: closure would split a green triangle; refine "
              "with a shrinking region sequence");
        mode[t] = want;
        if (want == 2) changed = true;  // new split edges, re-run closure
      }
    }
  }
  collect_split_edges();

  TriMesh out;
  out.vertices = mesh.vertices;
  std::map<EdgeKey, int> midpoint_ids;
  for (const auto& ek : split_edges) {
    Eigen::Vector3d p = (mesh.vertices[ek.a] + mesh.vertices[ek.b]) / 2.0;
    if (radius > 0) p = p.normalized() * radius;
    midpoint_ids[ek] = out.num_vertices();
    out.vertices.push_back(p);
  }

  const std::array<Eigen::Matrix3d, 4> red_bary = {
      cols(e0, m01, m20), cols(e1, m12, m01), cols(e2, m20, m12),
      cols(m01, m12, m20)};

  std::vector<ChildLink> links;
  auto emit = [&](const std::array<int, 3>& tri, int parent,
                  const Eigen::Matrix3d& bary, bool green) {
    out.triangles.push_back(tri);
    ChildLink l;
    l.parent = parent;
    l.bary = bary;
    l.green = green;
    links.push_back(l);
    if (!mesh.labels.empty()) out.labels.push_back(mesh.labels[parent]);
  };

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    if (mode[t] == 0) {
      emit(tri, t, Eigen::Matrix3d::Identity(), is_green[t]);
      continue;
    }
    if (mode[t] == 2) {
      const int a = midpoint_ids.at(key(tri[0], tri[1]));
      const int b = midpoint_ids.at(key(tri[1], tri[2]));
      const int c = midpoint_ids.at(key(tri[2], tri[0]));
      emit({tri[0], a, c}, t, red_bary[0], false);
      emit({tri[1], b, a}, t, red_bary[1], false);
      emit({tri[2], c, b}, t, red_bary[2], false);
      emit({a, b, c}, t, red_bary[3], false);
      continue;
    }
    // green bisection across the single hanging edge
    int k_split = -1;
    for (int k = 0; k < 3; ++k)
      if (split_edges.count(key(tri[(k + 1) % 3], tri[(k + 2) % 3]))) {
        k_split = k;
        break;
      }
    const int u = tri[(k_split + 1) % 3];
    const int v = tri[(k_split + 2) % 3];
    const int apex = tri[k_split];
    const int mid = midpoint_ids.at(key(u, v));
    // barycentric positions of (apex, u, v) in the parent's local frame
    const std::array<Eigen::Vector3d, 3> bc = {e0, e1, e2};
    const Eigen::Vector3d ba = bc[k_split];
    const Eigen::Vector3d bu = bc[(k_split + 1) % 3];
    const Eigen::Vector3d bv = bc[(k_split + 2) % 3];
    const Eigen::Vector3d bm = (bu + bv) / 2;
    emit({apex, u, mid}, t, cols(ba, bu, bm), true);
    emit({apex, mid, v}, t, cols(ba, bm, bv), true);
  }

  out.nesting = mesh.nesting.value_or(NestingRecord{});
  out.nesting->levels.push_back({mesh.vertices, mesh.triangles});
  out.nesting->links.push_back(std::move(links));
  return out;
}

}  // namespace

TriMesh refine_region(const TriMesh& mesh, const RegionPredicate& region,
                      int levels, double radius) {
  TriMesh current = mesh;
  for (int l = 0; l < levels; ++l) {
    TriMesh next = refine_pass(current, region, radius);
    if (next.num_triangles() == current.num_triangles()) {
      // nothing intersected the region; don't record a trivial level
      return current;
    }
    current = std::move(next);
  }
  validate_mesh(current);
  return current;
}

}  // namespace mrmom
