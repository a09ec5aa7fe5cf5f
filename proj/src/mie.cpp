#include <cmath>
#include <complex>
#include <vector>

#include "mrmom/mie.hpp"

namespace mrmom {

namespace {

using Cx = std::complex<double>;

// Riccati-Bessel ratios for a conducting sphere of size parameter x = ka:
// electric-type coefficient uses the derivative ratio, magnetic-type the
// function ratio.  psi_n = x j_n, xi_n = x (j_n + i y_n);
// d/dx [x f_n] = x f_{n-1} - n f_n.
struct MieCoeffs {
  std::vector<Cx> a, b;
};

MieCoeffs pec_coeffs(double x, int nmax) {
  MieCoeffs c;
  c.a.resize(nmax + 1);
  c.b.resize(nmax + 1);
  for (int n = 1; n <= nmax; ++n) {
    const double jn = std::sph_bessel(n, x);
    const double jnm = std::sph_bessel(n - 1, x);
    const double yn = std::sph_neumann(n, x);
    const double ynm = std::sph_neumann(n - 1, x);
    const double psi = x * jn;
    const double psi_d = x * jnm - n * jn;
    const Cx xi = x * Cx(jn, yn);
    const Cx xi_d = x * Cx(jnm, ynm) - static_cast<double>(n) * Cx(jn, yn);
    c.a[n] = psi_d / xi_d;
    c.b[n] = psi / xi;
  }
  return c;
}

int series_terms(double x) {
  return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 10.0));
}

}  // namespace

double mie_pec_rcs(double radius, const Medium& med, double theta, double phi) {
  const double k = med.wavenumber();
  const double x = k * radius;
  const int nmax = series_terms(x);
  const MieCoeffs c = pec_coeffs(x, nmax);

  const double mu = std::cos(theta);
  // angular functions pi_n, tau_n by recurrence
  double pi_prev = 0, pi_cur = 1;
  Cx s1 = 0, s2 = 0;
  for (int n = 1; n <= nmax; ++n) {
    const double tau = n * mu * pi_cur - (n + 1) * pi_prev;
    const double f = (2.0 * n + 1.0) / (n * (n + 1.0));
    s1 += f * (c.a[n] * pi_cur + c.b[n] * tau);
    s2 += f * (c.a[n] * tau + c.b[n] * pi_cur);
    const double pi_next =
        ((2.0 * n + 1.0) * mu * pi_cur - (n + 1.0) * pi_prev) / n;
    pi_prev = pi_cur;
    pi_cur = pi_next;
  }
  const double cp = std::cos(phi), sp = std::sin(phi);
  return 4.0 * kPi / (k * k) *
         (cp * cp * std::norm(s2) + sp * sp * std::norm(s1));
}

double mie_pec_backscatter_rcs(double radius, const Medium& med) {
  return mie_pec_rcs(radius, med, kPi, 0.0);
}

double mie_pec_total_cross_section(double radius, const Medium& med) {
  const double k = med.wavenumber();
  const double x = k * radius;
  const int nmax = series_terms(x);
  const MieCoeffs c = pec_coeffs(x, nmax);
  double acc = 0;
  for (int n = 1; n <= nmax; ++n)
    acc += (2.0 * n + 1.0) * (std::norm(c.a[n]) + std::norm(c.b[n]));
  return 2.0 * kPi / (k * k) * acc;
}

}  // namespace mrmom
