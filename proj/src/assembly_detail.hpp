#pragma once

#include <Eigen/Dense>

#include "mrmom/quadrature.hpp"

namespace mrmom::detail {

// Cached per-triangle geometry used by the pairwise integrators.
struct TriGeom {
  std::array<Eigen::Vector3d, 3> v;
  Eigen::Vector3d centroid;
  Eigen::Vector3d normal;  // unit, right-handed w.r.t. vertex order
  double area = 0;
  double diam = 0;
};

inline TriGeom make_geom(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         const Eigen::Vector3d& c) {
  TriGeom g;
  g.v = {a, b, c};
  g.centroid = (a + b + c) / 3.0;
  const Eigen::Vector3d cr = (b - a).cross(c - a);
  g.area = 0.5 * cr.norm();
  g.normal = cr.normalized();
  g.diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  return g;
}

inline bool separated(const TriGeom& p, const TriGeom& q, double ratio) {
  const double gap = (p.centroid - q.centroid).norm();
  return gap > ratio * 0.5 * (p.diam + q.diam);
}

inline std::array<TriGeom, 4> split4(const TriGeom& g) {
  const Eigen::Vector3d m01 = 0.5 * (g.v[0] + g.v[1]);
  const Eigen::Vector3d m12 = 0.5 * (g.v[1] + g.v[2]);
  const Eigen::Vector3d m20 = 0.5 * (g.v[2] + g.v[0]);
  return {make_geom(g.v[0], m01, m20), make_geom(g.v[1], m12, m01),
          make_geom(g.v[2], m20, m12), make_geom(m01, m12, m20)};
}

// Runs fn(sub_p, sub_q, at_depth_limit) on a quadtree of sub-triangle pairs,
// descending (on the larger member) until the pieces are separated or the
// depth budget is spent.
template <typename Fn>
void for_each_subpair(const TriGeom& p, const TriGeom& q, double ratio,
                      int depth, const Fn& fn) {
  if (separated(p, q, ratio)) {
    fn(p, q, false);
    return;
  }
  if (depth <= 0) {
    fn(p, q, true);
    return;
  }
  if (p.area >= q.area) {
    for (const TriGeom& s : split4(p)) for_each_subpair(s, q, ratio, depth - 1, fn);
  } else {
    for (const TriGeom& s : split4(q)) for_each_subpair(p, s, ratio, depth - 1, fn);
  }
}

inline TriQuadrature map_rule(const TriQuadratureRule& rule, const TriGeom& g) {
  return mrmom::map_rule(rule, g.v[0], g.v[1], g.v[2]);
}

}  // namespace mrmom::detail
