#pragma once

#include "mrmom/medium.hpp"

namespace mrmom {

// Series solution for scattering of a plane wave by a perfectly conducting
// sphere of the given radius, used as the reference answer for the surface
// solvers.  Conventions: the wave travels along +z with x polarization; theta
// is measured from +z and phi from +x.  Returns the bistatic radar
// cross-section (m^2); backscatter is theta = pi.
double mie_pec_rcs(double radius, const Medium& med, double theta, double phi);

double mie_pec_backscatter_rcs(double radius, const Medium& med);

// Total scattering cross-section (m^2) from the series, handy as an energy
// sanity bound.
double mie_pec_total_cross_section(double radius, const Medium& med);

}  // namespace mrmom
