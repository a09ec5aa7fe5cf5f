#pragma once

#include <Eigen/Dense>

namespace mrmom {

// Closed-form static potential integrals over a flat triangle T for an
// arbitrary observation point r:
//   inv_r     = ∫_T 1/|r - r'| dA'
//   rho_inv_r = ∫_T (r' - rho)/|r - r'| dA'   (in-plane vector)
// where rho is the projection of r onto the plane of T.  Valid for any r not
// on the boundary of T; the limit onto the interior of T is finite and
// handled.  Used to desingularize the Green kernel on touching pairs.
struct StaticMoments {
  double inv_r = 0;
  Eigen::Vector3d rho_inv_r = Eigen::Vector3d::Zero();
  Eigen::Vector3d projection = Eigen::Vector3d::Zero();

  // ∫_T r'/|r - r'| dA'
  Eigen::Vector3d r_inv_r() const { return rho_inv_r + inv_r * projection; }
};

StaticMoments static_moments(const Eigen::Vector3d& v0,
                             const Eigen::Vector3d& v1,
                             const Eigen::Vector3d& v2,
                             const Eigen::Vector3d& obs);

// Number of coincident vertex indices between two triangles (0..3).
int shared_vertices(const std::array<int, 3>& a, const std::array<int, 3>& b);

}  // namespace mrmom
