#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mrmom/medium.hpp"

namespace mrmom {

// Linearly polarized plane wave E = amplitude * pol * exp(-j k dir.r).
// `direction` is the unit propagation vector, `polarization` the unit E-field
// direction; they must be orthogonal.  H = (dir x E) / eta.
struct PlaneWave {
  Eigen::Vector3d direction{0, 0, 1};
  Eigen::Vector3d polarization{1, 0, 0};
  double amplitude = 1.0;  // V/m

  Eigen::Vector3cd electric(const Eigen::Vector3d& r, const Medium& m) const;
  Eigen::Vector3cd magnetic(const Eigen::Vector3d& r, const Medium& m) const;
};

// Validates orthogonality/normalization and returns a cleaned-up copy.
PlaneWave make_plane_wave(const Eigen::Vector3d& direction,
                          const Eigen::Vector3d& polarization,
                          double amplitude = 1.0);

}  // namespace mrmom
