#pragma once

#include <Eigen/Dense>

#include "mrmom/medium.hpp"
#include "mrmom/mesh.hpp"

namespace mrmom {

// Far-zone pattern of the surface current with coefficient vector x:
// E_s(r) ~ exp(-j k r)/r * F(rhat), with
//   F = -j omega mu/(4 pi) (I - rhat rhat^T) sum_n x_n ∫ Lam_n e^{+j k rhat.r'}
Eigen::Vector3cd radiated_far_field(const TriMesh& mesh,
                                    const EdgeConnectivity& conn,
                                    const Medium& med,
                                    const Eigen::VectorXcd& x,
                                    const Eigen::Vector3d& rhat,
                                    int quad_degree = 4);

// Bistatic radar cross-section 4 pi |F|^2 / |E0|^2 for unit-amplitude
// illumination scaled by incident_amplitude.
double bistatic_rcs(const TriMesh& mesh, const EdgeConnectivity& conn,
                    const Medium& med, const Eigen::VectorXcd& x,
                    const Eigen::Vector3d& rhat, double incident_amplitude = 1.0,
                    int quad_degree = 4);

inline Eigen::Vector3d spherical_dir(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

}  // namespace mrmom
