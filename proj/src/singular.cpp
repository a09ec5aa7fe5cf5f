#include <algorithm>
#include <cmath>

#include "mrmom/singular.hpp"

namespace mrmom {

// Edge-by-edge closed forms for the 1/R potentials of a flat triangle
// (Wilton-style line reductions).  All quantities are taken relative to the
// projection rho of the observation point onto the triangle plane.
StaticMoments static_moments(const Eigen::Vector3d& v0,
                             const Eigen::Vector3d& v1,
                             const Eigen::Vector3d& v2,
                             const Eigen::Vector3d& obs) {
  const Eigen::Vector3d n = (v1 - v0).cross(v2 - v0).normalized();
  const double d = n.dot(obs - v0);  // signed height above the plane
  const Eigen::Vector3d rho = obs - d * n;
  const double scale =
      std::max({(v1 - v0).norm(), (v2 - v1).norm(), (v0 - v2).norm()});

  StaticMoments out;
  out.projection = rho;

  const std::array<Eigen::Vector3d, 3> verts = {v0, v1, v2};
  double beta_sum = 0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d& a = verts[i];
    const Eigen::Vector3d& b = verts[(i + 1) % 3];
    const Eigen::Vector3d lhat = (b - a).normalized();
    const Eigen::Vector3d mhat = lhat.cross(n);  // outward in-plane normal
    const double p0 = (a - rho).dot(mhat);       // signed distance to edge line
    const double lp = (b - rho).dot(lhat);
    const double lm = (a - rho).dot(lhat);
    const double rp = (obs - b).norm();
    const double rm = (obs - a).norm();
    const double r0sq = p0 * p0 + d * d;

    double f2 = 0;
    if (r0sq > 1e-28 * scale * scale) {
      // pick the numerically benign form of ln((R+ + l+)/(R- + l-))
      const double num = rp + lp, den = rm + lm;
      if (std::min(num, den) > 1e-14 * scale)
        f2 = std::log(num / den);
      else
        f2 = std::log((rm - lm) / (rp - lp));
    }
    const double bp = std::atan2(p0 * lp, r0sq + std::abs(d) * rp);
    const double bm = std::atan2(p0 * lm, r0sq + std::abs(d) * rm);
    beta_sum += bp - bm;

    out.inv_r += p0 * f2;
    out.rho_inv_r += 0.5 * (r0sq * f2 + lp * rp - lm * rm) * mhat;
  }
  out.inv_r -= std::abs(d) * beta_sum;
  return out;
}

int shared_vertices(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  int count = 0;
  for (int va : a)
    for (int vb : b) count += (va == vb);
  return count;
}

}  // namespace mrmom
