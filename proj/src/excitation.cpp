#include <stdexcept>

#include "mrmom/excitation.hpp"

namespace mrmom {

Eigen::Vector3cd PlaneWave::electric(const Eigen::Vector3d& r,
                                     const Medium& m) const {
  const Complex phase =
      std::exp(Complex(0, -m.wavenumber() * direction.dot(r)));
  return (amplitude * phase) * polarization.cast<Complex>();
}

Eigen::Vector3cd PlaneWave::magnetic(const Eigen::Vector3d& r,
                                     const Medium& m) const {
  const Eigen::Vector3d h_dir = direction.cross(polarization);
  const Complex phase =
      std::exp(Complex(0, -m.wavenumber() * direction.dot(r)));
  return (amplitude / m.impedance() * phase) * h_dir.cast<Complex>();
}

PlaneWave make_plane_wave(const Eigen::Vector3d& direction,
                          const Eigen::Vector3d& polarization,
                          double amplitude) {
  PlaneWave pw;
  if (direction.norm() == 0 || polarization.norm() == 0)
    throw std::invalid_argument("plane wave: zero direction or polarization");
  pw.direction = direction.normalized();
  pw.polarization = polarization.normalized();
  if (std::abs(pw.direction.dot(pw.polarization)) > 1e-12)
    throw std::invalid_argument(
        "plane wave: polarization must be orthogonal to propagation");
  pw.amplitude = amplitude;
  return pw;
}

}  // namespace mrmom
