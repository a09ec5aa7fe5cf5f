#include <cmath>

#include "doctest.h"
#include "mrmom/medium.hpp"
#include "mrmom/quadrature.hpp"
#include "mrmom/singular.hpp"

using namespace mrmom;

namespace {

// Numerical reference for smooth (off-plane) observation points.
StaticMoments brute_moments(const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                            const Eigen::Vector3d& v2,
                            const Eigen::Vector3d& obs, int levels) {
  const TriQuadrature q = map_rule(composite_rule(tri_rule(6), levels), v0, v1, v2);
  const Eigen::Vector3d normal = triangle_normal(v0, v1, v2);
  const Eigen::Vector3d rho = obs - normal.dot(obs - v0) * normal;
  StaticMoments m;
  m.projection = rho;
  for (int i = 0; i < q.size(); ++i) {
    const Eigen::Vector3d rp = q.points.row(i).transpose();
    const double inv = 1.0 / (obs - rp).norm();
    m.inv_r += q.weights(i) * inv;
    m.rho_inv_r += q.weights(i) * inv * (rp - rho);
  }
  return m;
}

}  // namespace

TEST_CASE("closed-form potential matches quadrature off the plane") {
  const Eigen::Vector3d v0(0, 0, 0), v1(1.3, 0.1, 0), v2(0.2, 0.9, 0);
  for (const Eigen::Vector3d obs : {Eigen::Vector3d(0.4, 0.3, 0.7),
                                    Eigen::Vector3d(-0.8, 0.2, 0.3),
                                    Eigen::Vector3d(2.0, 1.0, -1.5)}) {
    const StaticMoments a = static_moments(v0, v1, v2, obs);
    const StaticMoments b = brute_moments(v0, v1, v2, obs, 3);
    CHECK(a.inv_r == doctest::Approx(b.inv_r).epsilon(1e-9));
    CHECK((a.rho_inv_r - b.rho_inv_r).norm() < 1e-8 * std::abs(b.inv_r));
    CHECK((a.r_inv_r() - b.r_inv_r()).norm() < 1e-8 * b.r_inv_r().norm());
  }
}

TEST_CASE("potential at a vertex of the unit right triangle") {
  // Polar integration from the right-angle corner: the opposite edge is
  // x + y = 1, so the potential is \int_0^{pi/2} d(theta)/(cos+sin)
  // = sqrt(2) * asinh(1) = sqrt(2) * ln(1 + sqrt 2).
  const Eigen::Vector3d v0(0, 0, 0), v1(1, 0, 0), v2(0, 1, 0);
  const double exact = std::sqrt(2.0) * std::log(1.0 + std::sqrt(2.0));
  const StaticMoments m = static_moments(v0, v1, v2, v0);
  CHECK(m.inv_r == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("in-plane symmetry at the centroid of an equilateral triangle") {
  const double s = 1.7;  // side
  const Eigen::Vector3d v0(0, 0, 0), v1(s, 0, 0),
      v2(s / 2, s * std::sqrt(3.0) / 2, 0);
  const Eigen::Vector3d centroid = (v0 + v1 + v2) / 3.0;
  const StaticMoments m = static_moments(v0, v1, v2, centroid);
  // rho = obs, and the first moment about it cancels by symmetry
  CHECK((m.projection - centroid).norm() < 1e-14);
  CHECK(m.rho_inv_r.norm() < 1e-12 * m.inv_r);
  CHECK(m.inv_r > 0);
}

TEST_CASE("potential is continuous across the surface") {
  const Eigen::Vector3d v0(0, 0, 0), v1(1, 0, 0), v2(0, 1, 0);
  const Eigen::Vector3d inside(0.3, 0.3, 0);
  const double on = static_moments(v0, v1, v2, inside).inv_r;
  for (double z : {1e-3, 1e-5, 1e-7}) {
    const double above =
        static_moments(v0, v1, v2, inside + Eigen::Vector3d(0, 0, z)).inv_r;
    CHECK(std::abs(above - on) < 20 * z + 1e-12);
  }
}

TEST_CASE("potential scales linearly with the triangle") {
  // 1/|r| has homogeneity degree -1, the area element degree 2
  const Eigen::Vector3d v0(0, 0, 0), v1(1.1, 0.2, 0), v2(0.3, 0.8, 0);
  const Eigen::Vector3d obs(0.4, 0.1, 0.6);
  const double base = static_moments(v0, v1, v2, obs).inv_r;
  const double scaled = static_moments(3 * v0, 3 * v1, 3 * v2, 3 * obs).inv_r;
  CHECK(scaled == doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("shared vertex counting") {
  const std::array<int, 3> a{1, 5, 9};
  CHECK(shared_vertices(a, {1, 5, 9}) == 3);
  CHECK(shared_vertices(a, {9, 1, 5}) == 3);
  CHECK(shared_vertices(a, {5, 2, 1}) == 2);
  CHECK(shared_vertices(a, {7, 9, 0}) == 1);
  CHECK(shared_vertices(a, {2, 4, 6}) == 0);
}
