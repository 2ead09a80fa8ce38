#include "fockgeom/overlaps.hpp"

#include <cmath>

#include "fockgeom/su11.hpp"

namespace fockgeom {

Complex coherent_overlap(Complex alpha, Complex alpha_prime) {
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(alpha_prime) +
                  std::conj(alpha) * alpha_prime);
}

Complex squeezed_overlap(Complex beta, Complex beta_prime) {
  require_guard_range(0.0, beta, "squeezed_overlap");
  require_guard_range(0.0, beta_prime, "squeezed_overlap");
  return 1.0 / std::sqrt(compose_product(beta, beta_prime).d);
}

namespace detail {

OverlapResult cs_overlap_unchecked(Complex alpha, Complex beta, Complex alpha_prime,
                                   Complex beta_prime) {
  const SL2Matrix m = compose_product(beta, beta_prime);
  if (std::abs(m.d) <= 1e-14) throw DecompositionSingular("cs_overlap: |d| too small");

  const Complex ab = std::conj(alpha);
  OverlapResult r;
  r.coherent_factor = coherent_overlap(alpha, alpha_prime);
  r.squeezed_factor = 1.0 / std::sqrt(m.d);
  // Taken literally as conj(b)/d. For these products c = conj(b) exactly.
  r.exponent_correction = (m.b / m.d) * ab * ab * 0.5 -
                          (std::conj(m.b) / m.d) * alpha_prime * alpha_prime * 0.5 +
                          (1.0 / m.d - 1.0) * ab * alpha_prime;
  r.value = r.coherent_factor * r.squeezed_factor * std::exp(r.exponent_correction);
  return r;
}

} // namespace detail

OverlapResult cs_overlap(Complex alpha, Complex beta, Complex alpha_prime, Complex beta_prime) {
  require_guard_range(alpha, beta, "cs_overlap");
  require_guard_range(alpha_prime, beta_prime, "cs_overlap");
  return detail::cs_overlap_unchecked(alpha, beta, alpha_prime, beta_prime);
}

Complex number_kernel(Complex alpha, Complex alpha_prime, Complex d) {
  if (std::abs(d) <= 1e-14) throw DecompositionSingular("number_kernel: |d| too small");
  return coherent_overlap(alpha, alpha_prime) *
         std::exp(std::conj(alpha) * alpha_prime * (1.0 / d - 1.0));
}

Complex fock_cs_overlap(Complex alpha, Complex beta, Complex alpha_prime, Complex beta_prime,
                        const OperatorSet& ops, const TailGuard& guard) {
  return inner_product(cs_state(alpha, beta, ops, guard),
                       cs_state(alpha_prime, beta_prime, ops, guard));
}

} // namespace fockgeom
