#include "mrmom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "mrmom/quadrature.hpp"

namespace mrmom {

namespace {

struct EdgeKey {
  int a, b;  // a < b
  bool operator<(const EdgeKey& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};

EdgeKey key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// Signed volume contribution; the sum over a closed surface equals the
// enclosed volume for outward orientation.
double signed_volume(const TriMesh& m) {
  double vol = 0;
  for (const auto& t : m.triangles) {
    const auto& a = m.vertices[t[0]];
    const auto& b = m.vertices[t[1]];
    const auto& c = m.vertices[t[2]];
    vol += a.dot(b.cross(c)) / 6.0;
  }
  return vol;
}

}  // namespace

void validate_mesh(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  std::set<std::array<int, 3>> seen;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw std::runtime_error("mesh: triangle vertex index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0])
      throw std::runtime_error("mesh: triangle with repeated vertex");
    std::array<int, 3> s = t;
    std::sort(s.begin(), s.end());
    if (!seen.insert(s).second)
      throw std::runtime_error("mesh: duplicate triangle");
    const double area = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                      mesh.vertices[t[2]]);
    if (area < kDegenerateAreaThreshold)
      throw std::runtime_error("mesh: degenerate triangle (area below 1e-14)");
  }
}

EdgeConnectivity build_connectivity(const TriMesh& mesh) {
  const int nt = mesh.num_triangles();
  // edge -> (triangle, local edge index, traverses forward?)
  std::map<EdgeKey, std::vector<std::array<int, 3>>> edge_tris;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int u = tri[(k + 1) % 3];
      const int v = tri[(k + 2) % 3];
      edge_tris[key(u, v)].push_back({t, k, u < v ? 1 : 0});
    }
  }

  EdgeConnectivity conn;
  conn.tri_edges.assign(nt, {-1, -1, -1});
  conn.tri_signs.assign(nt, {0, 0, 0});
  conn.vertex_edges.assign(mesh.num_vertices(), {});

  for (const auto& [ek, tris] : edge_tris) {
    if (tris.size() > 2)
      throw std::runtime_error("mesh: non-manifold edge (three or more "
                               "incident triangles)");
    if (tris.size() == 1) {
      BoundaryEdge be;
      be.v0 = ek.a;
      be.v1 = ek.b;
      be.tri = tris[0][0];
      conn.boundary.push_back(be);
      continue;
    }
    // Interior edge: the plus triangle traverses (v0, v1) in stored order.
    InteriorEdge e;
    const auto& t0 = tris[0];
    const auto& t1 = tris[1];
    if (t0[2] == t1[2])
      throw std::runtime_error("mesh: inconsistent orientation on an interior "
                               "edge; run repair_orientation first");
    const auto& fwd = t0[2] ? t0 : t1;  // traverses (a, b)
    const auto& bwd = t0[2] ? t1 : t0;
    e.v0 = ek.a;
    e.v1 = ek.b;
    e.tri_plus = fwd[0];
    e.tri_minus = bwd[0];
    e.length = (mesh.vertices[e.v1] - mesh.vertices[e.v0]).norm();
    const int id = static_cast<int>(conn.interior.size());
    conn.interior.push_back(e);
    conn.tri_edges[fwd[0]][fwd[1]] = id;
    conn.tri_signs[fwd[0]][fwd[1]] = 1;
    conn.tri_edges[bwd[0]][bwd[1]] = id;
    conn.tri_signs[bwd[0]][bwd[1]] = -1;
    conn.vertex_edges[e.v0].push_back(id);
    conn.vertex_edges[e.v1].push_back(id);
  }
  conn.closed = conn.boundary.empty();
  return conn;
}

void repair_orientation(TriMesh& mesh) {
  const int nt = mesh.num_triangles();
  // adjacency by shared undirected edge
  std::map<EdgeKey, std::vector<int>> edge_tris;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      edge_tris[key(tri[(k + 1) % 3], tri[(k + 2) % 3])].push_back(t);
  }
  for (const auto& [ek, ts] : edge_tris) {
    if (ts.size() > 2)
      throw std::runtime_error("mesh: non-manifold edge (three or more "
                               "incident triangles)");
  }

  auto traverses = [&](int t, int u, int v) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tri[k] == u && tri[(k + 1) % 3] == v) return true;
    return false;
  };

  std::vector<int> state(nt, 0);  // 0 unvisited, 1 kept, -1 flipped
  std::vector<int> component(nt, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (state[seed] != 0) continue;
    const int comp = ncomp++;
    state[seed] = 1;
    component[seed] = comp;
    std::deque<int> queue = {seed};
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      const auto tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        const int u = tri[(k + 1) % 3];
        const int v = tri[(k + 2) % 3];
        for (int o : edge_tris[key(u, v)]) {
          if (o == t) continue;
          // consistent orientation: neighbor must traverse the shared edge
          // in the opposite direction
          const bool t_fwd = traverses(t, u, v) ? (state[t] == 1)
                                                : (state[t] == -1);
          const bool o_fwd_stored = traverses(o, u, v);
          // desired: o traverses opposite to t's effective direction
          const int needed = t_fwd == o_fwd_stored ? -1 : 1;
          if (state[o] == 0) {
            state[o] = needed;
            component[o] = comp;
            queue.push_back(o);
          } else if (state[o] != needed) {
            throw std::runtime_error("mesh: non-orientable surface");
          }
        }
      }
    }
  }

  TriMesh flipped = mesh;
  for (int t = 0; t < nt; ++t)
    if (state[t] == -1)
      std::swap(flipped.triangles[t][1], flipped.triangles[t][2]);

  // Point closed components outward (positive enclosed volume).
  std::vector<double> comp_volume(ncomp, 0.0);
  std::vector<bool> comp_closed(ncomp, true);
  for (const auto& [ek, ts] : edge_tris)
    if (ts.size() == 1) comp_closed[component[ts[0]]] = false;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = flipped.triangles[t];
    comp_volume[component[t]] +=
        flipped.vertices[tri[0]].dot(
            flipped.vertices[tri[1]].cross(flipped.vertices[tri[2]])) /
        6.0;
  }
  for (int t = 0; t < nt; ++t) {
    if (comp_closed[component[t]] && comp_volume[component[t]] < 0)
      std::swap(flipped.triangles[t][1], flipped.triangles[t][2]);
  }
  mesh = std::move(flipped);
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats s;
  s.vertices = mesh.num_vertices();
  s.triangles = mesh.num_triangles();

  std::set<EdgeKey> edges;
  std::set<EdgeKey> boundary;
  std::map<EdgeKey, int> edge_count;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const EdgeKey ek = key(t[(k + 1) % 3], t[(k + 2) % 3]);
      edges.insert(ek);
      edge_count[ek]++;
    }
  }
  for (const auto& [ek, c] : edge_count)
    if (c == 1) boundary.insert(ek);
  s.edges = static_cast<int>(edges.size());
  s.closed = boundary.empty();
  s.euler_characteristic = s.vertices - s.edges + s.triangles;

  double hmin = std::numeric_limits<double>::infinity(), hmax = 0;
  for (const auto& ek : edges) {
    const double len = (mesh.vertices[ek.b] - mesh.vertices[ek.a]).norm();
    hmin = std::min(hmin, len);
    hmax = std::max(hmax, len);
  }
  s.h_min = mesh.triangles.empty() ? 0 : hmin;
  s.h_max = hmax;

  double amin = std::numeric_limits<double>::infinity(), amax = 0, atot = 0;
  for (const auto& t : mesh.triangles) {
    const double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                   mesh.vertices[t[2]]);
    amin = std::min(amin, a);
    amax = std::max(amax, a);
    atot += a;
  }
  s.area_min = mesh.triangles.empty() ? 0 : amin;
  s.area_max = amax;
  s.area_total = atot;

  // connected components over shared edges, genus per closed component
  const int nt = mesh.num_triangles();
  std::map<EdgeKey, std::vector<int>> edge_tris;
  for (int t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k)
      edge_tris[key(mesh.triangles[t][(k + 1) % 3],
                    mesh.triangles[t][(k + 2) % 3])]
          .push_back(t);
  std::vector<int> comp(nt, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (comp[seed] >= 0) continue;
    comp[seed] = ncomp;
    std::deque<int> q = {seed};
    while (!q.empty()) {
      const int t = q.front();
      q.pop_front();
      for (int k = 0; k < 3; ++k)
        for (int o : edge_tris[key(mesh.triangles[t][(k + 1) % 3],
                                   mesh.triangles[t][(k + 2) % 3])])
          if (comp[o] < 0) {
            comp[o] = ncomp;
            q.push_back(o);
          }
    }
    ++ncomp;
  }
  s.components = ncomp;

  // per-component Euler characteristic
  std::vector<std::set<int>> comp_verts(ncomp);
  std::vector<std::set<EdgeKey>> comp_edges(ncomp);
  std::vector<int> comp_tris(ncomp, 0);
  std::vector<bool> comp_closed(ncomp, true);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    comp_tris[comp[t]]++;
    for (int k = 0; k < 3; ++k) {
      comp_verts[comp[t]].insert(tri[k]);
      comp_edges[comp[t]].insert(key(tri[(k + 1) % 3], tri[(k + 2) % 3]));
    }
  }
  for (const auto& [ek, ts] : edge_tris)
    if (ts.size() == 1) comp_closed[comp[ts[0]]] = false;
  int genus = 0;
  for (int c = 0; c < ncomp; ++c) {
    if (!comp_closed[c]) continue;
    const int chi = static_cast<int>(comp_verts[c].size()) -
                    static_cast<int>(comp_edges[c].size()) + comp_tris[c];
    genus += (2 - chi) / 2;
  }
  s.genus = genus;
  return s;
}

RegionPredicate cap_region(const Eigen::Vector3d& axis, double angle_rad) {
  const Eigen::Vector3d n = axis.normalized();
  const double cos_angle = std::cos(angle_rad);
  return [n, cos_angle](const Eigen::Vector3d& p) {
    const double r = p.norm();
    if (r == 0) return false;
    return p.dot(n) / r >= cos_angle;
  };
}

}  // namespace mrmom
