#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mrmom {

// Symmetric Gauss rules on the reference triangle, stored as barycentric
// coordinates with weights normalized to sum to 1 (multiply by the physical
// triangle area when integrating).
struct TriQuadratureRule {
  // One row per point: (b0, b1, b2).
  Eigen::Matrix<double, Eigen::Dynamic, 3> bary;
  Eigen::VectorXd weights;
  int degree = 0;  // highest polynomial degree integrated exactly

  int size() const { return static_cast<int>(weights.size()); }
};

// Rule of exactness degree >= `degree` (available: 1, 2, 4, 5, 6).
const TriQuadratureRule& tri_rule(int degree);

// Composite rule: `base` applied on each of the 4^levels congruent
// sub-triangles of a uniform dyadic split.  Raises accuracy for smooth
// non-polynomial integrands without needing very high-order tables.
TriQuadratureRule composite_rule(const TriQuadratureRule& base, int levels);

// Physical quadrature points for a triangle (rows of `points`), with
// weights scaled by the triangle area.
struct TriQuadrature {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::VectorXd weights;  // sum equals the triangle area
  int size() const { return static_cast<int>(weights.size()); }
};

TriQuadrature map_rule(const TriQuadratureRule& rule, const Eigen::Vector3d& v0,
                       const Eigen::Vector3d& v1, const Eigen::Vector3d& v2);

double triangle_area(const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                     const Eigen::Vector3d& v2);

Eigen::Vector3d triangle_normal(const Eigen::Vector3d& v0,
                                const Eigen::Vector3d& v1,
                                const Eigen::Vector3d& v2);

}  // namespace mrmom
