#pragma once

// Removable-singularity helpers. Every closed form in the library pairs the
// undefined unit phase beta/|beta| with a factor that vanishes at beta = 0;
// these functions evaluate the products directly.

#include <cmath>
#include <complex>

namespace fockgeom::detail {

/// sinh(x)/x.
inline double sinhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
  }
  return std::sinh(x) / x;
}

/// sinh(x)/x - 1 without cancellation.
inline double sinhc_m1(double x) {
  if (std::abs(x) < 0.5) {
    // x^2/3! + x^4/5! + ...; at |x| = 0.5 the x^20 term is below 1e-32.
    const double x2 = x * x;
    double term = x2 / 6.0;
    double sum = term;
    for (int k = 2; k <= 10; ++k) {
      term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return sum;
  }
  return (std::sinh(x) - x) / x;
}

/// tanh(x)/x.
inline double tanhc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 * (1.0 - 0.4 * x2);
  }
  return std::tanh(x) / x;
}

/// cosh(x) - 1 without cancellation.
inline double cosh_m1(double x) {
  const double s = std::sinh(0.5 * x);
  return 2.0 * s * s;
}

/// beta * sinh|beta| / |beta|.
inline std::complex<double> phase_sinh(std::complex<double> beta) {
  return beta * sinhc(std::abs(beta));
}

/// beta / |beta| * tanh(t |beta|).
inline std::complex<double> phase_tanh(std::complex<double> beta, double t) {
  return beta * t * tanhc(t * std::abs(beta));
}

/// beta^2 / |beta|^2 (zero at beta = 0; every use multiplies it by a factor
/// that vanishes there).
inline std::complex<double> phase_squared(std::complex<double> beta) {
  const double r2 = std::norm(beta);
  if (r2 == 0.0) return {0.0, 0.0};
  return beta * beta / r2;
}

} // namespace fockgeom::detail
