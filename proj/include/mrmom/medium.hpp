#pragma once

#include <cmath>
#include <complex>

namespace mrmom {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kVacuumEps = 8.8541878128e-12;   // F/m
inline constexpr double kVacuumMu = 1.25663706212e-6;    // H/m

// Homogeneous background at a fixed operating frequency.  All solver and
// assembly routines take one of these; time convention is exp(+j omega t).
struct Medium {
  double frequency = 0;  // Hz
  double eps = kVacuumEps;
  double mu = kVacuumMu;

  double omega() const { return 2.0 * kPi * frequency; }
  double speed() const { return 1.0 / std::sqrt(mu * eps); }
  double wavelength() const { return speed() / frequency; }
  double wavenumber() const { return omega() / speed(); }
  double impedance() const { return std::sqrt(mu / eps); }
};

inline Medium free_space(double frequency) { return Medium{frequency}; }

}  // namespace mrmom
