#include "mrmom/quadrature.hpp"

#include <array>
#include <stdexcept>

namespace mrmom {

namespace {

TriQuadratureRule make_rule(int degree,
                            const std::vector<std::array<double, 4>>& orbits) {
  // Each orbit entry is (a, b, c, w); all distinct permutations of (a, b, c)
  // are generated with weight w.
  std::vector<std::array<double, 3>> pts;
  std::vector<double> ws;
  for (const auto& o : orbits) {
    std::array<double, 3> b = {o[0], o[1], o[2]};
    std::vector<std::array<double, 3>> perms = {
        {b[0], b[1], b[2]}, {b[0], b[2], b[1]}, {b[1], b[0], b[2]},
        {b[1], b[2], b[0]}, {b[2], b[0], b[1]}, {b[2], b[1], b[0]}};
    std::vector<std::array<double, 3>> uniq;
    for (const auto& p : perms) {
      bool seen = false;
      for (const auto& q : uniq)
        if (p == q) { seen = true; break; }
      if (!seen) uniq.push_back(p);
    }
    for (const auto& p : uniq) {
      pts.push_back(p);
      ws.push_back(o[3]);
    }
  }
  TriQuadratureRule r;
  r.degree = degree;
  r.bary.resize(static_cast<int>(pts.size()), 3);
  r.weights.resize(static_cast<int>(ws.size()));
  for (int i = 0; i < r.size(); ++i) {
    r.bary.row(i) << pts[i][0], pts[i][1], pts[i][2];
    r.weights[i] = ws[i];
  }
  return r;
}

// Classic symmetric rules (weights sum to 1 on the unit-area reference).
const TriQuadratureRule& rule_deg1() {
  static const TriQuadratureRule r =
      make_rule(1, {{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}});
  return r;
}

const TriQuadratureRule& rule_deg2() {
  static const TriQuadratureRule r =
      make_rule(2, {{2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3}});
  return r;
}

const TriQuadratureRule& rule_deg4() {
  static const TriQuadratureRule r = make_rule(
      4, {{0.445948490915965, 0.445948490915965, 0.108103018168070,
           0.223381589678011},
          {0.091576213509771, 0.091576213509771, 0.816847572980459,
           0.109951743655322}});
  return r;
}

const TriQuadratureRule& rule_deg5() {
  static const TriQuadratureRule r = make_rule(
      5, {{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
          {0.470142064105115, 0.470142064105115, 0.059715871789770,
           0.132394152788506},
          {0.101286507323456, 0.101286507323456, 0.797426985353087,
           0.125939180544827}});
  return r;
}

const TriQuadratureRule& rule_deg6() {
  static const TriQuadratureRule r = make_rule(
      6, {{0.249286745170910, 0.249286745170910, 0.501426509658179,
           0.116786275726379},
          {0.063089014491502, 0.063089014491502, 0.873821971016996,
           0.050844906370207},
          {0.310352451033785, 0.636502499121399, 0.053145049844816,
           0.082851075618374}});
  return r;
}

}  // namespace

const TriQuadratureRule& tri_rule(int degree) {
  if (degree <= 1) return rule_deg1();
  if (degree <= 2) return rule_deg2();
  if (degree <= 4) return rule_deg4();
  if (degree <= 5) return rule_deg5();
  if (degree <= 6) return rule_deg6();
  throw std::invalid_argument("tri_rule: no tabulated rule above degree 6; "
                              "use composite_rule for higher accuracy");
}

TriQuadratureRule composite_rule(const TriQuadratureRule& base, int levels) {
  if (levels <= 0) return base;
  // One dyadic split, applied recursively.  Children of the reference
  // triangle in barycentric coordinates; each maps points by an affine
  // barycentric transform with exact dyadic entries.
  using M3 = Eigen::Matrix3d;
  const Eigen::Vector3d e0(1, 0, 0), e1(0, 1, 0), e2(0, 0, 1);
  const Eigen::Vector3d m01 = (e0 + e1) / 2, m12 = (e1 + e2) / 2,
                        m20 = (e2 + e0) / 2;
  auto child = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                  const Eigen::Vector3d& c) {
    M3 m;
    m.col(0) = a; m.col(1) = b; m.col(2) = c;
    return m;
  };
  const std::array<M3, 4> kids = {child(e0, m01, m20), child(e1, m12, m01),
                                  child(e2, m20, m12), child(m01, m12, m20)};
  TriQuadratureRule out;
  out.degree = base.degree;
  out.bary.resize(base.size() * 4, 3);
  out.weights.resize(base.size() * 4);
  int row = 0;
  for (const auto& k : kids) {
    for (int i = 0; i < base.size(); ++i) {
      Eigen::Vector3d b = k * base.bary.row(i).transpose();
      out.bary.row(row) = b.transpose();
      out.weights[row] = base.weights[i] / 4.0;
      ++row;
    }
  }
  return composite_rule(out, levels - 1);
}

TriQuadrature map_rule(const TriQuadratureRule& rule, const Eigen::Vector3d& v0,
                       const Eigen::Vector3d& v1, const Eigen::Vector3d& v2) {
  TriQuadrature q;
  const double area = triangle_area(v0, v1, v2);
  q.points.resize(rule.size(), 3);
  q.weights.resize(rule.size());
  for (int i = 0; i < rule.size(); ++i) {
    q.points.row(i) = rule.bary(i, 0) * v0.transpose() +
                      rule.bary(i, 1) * v1.transpose() +
                      rule.bary(i, 2) * v2.transpose();
    q.weights[i] = rule.weights[i] * area;
  }
  return q;
}

double triangle_area(const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                     const Eigen::Vector3d& v2) {
  return 0.5 * (v1 - v0).cross(v2 - v0).norm();
}

Eigen::Vector3d triangle_normal(const Eigen::Vector3d& v0,
                                const Eigen::Vector3d& v1,
                                const Eigen::Vector3d& v2) {
  return (v1 - v0).cross(v2 - v0).normalized();
}

}  // namespace mrmom
