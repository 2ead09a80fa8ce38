#include "fockgeom/uncertainty.hpp"

#include <cmath>

#include "special_functions.hpp"

namespace fockgeom {

VariancePair variances_closed(Complex beta, double hbar, double omega) {
  if (!(hbar > 0.0) || !(omega > 0.0)) throw InvalidArgument("hbar and omega must be positive");
  const double ch = std::cosh(std::abs(beta));
  const Complex s = detail::phase_sinh(beta);
  VariancePair v;
  v.hbar = hbar;
  v.omega = omega;
  // (ch + s)(ch + conj(s)) = |ch + s|^2 since ch is real.
  v.var_q = hbar / (2.0 * omega) * std::norm(ch + s);
  v.var_p = hbar * omega / 2.0 * std::norm(ch - s);
  return v;
}

double uncertainty_product(Complex beta, double hbar) {
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  const double k2 = detail::sinhc(2.0 * std::abs(beta));
  // -(beta - conj(beta))^2 = 4 (Im beta)^2
  const double im = beta.imag();
  return 0.25 * hbar * hbar * (1.0 + 4.0 * im * im * k2 * k2);
}

bool is_minimal_uncertainty(Complex beta, double tol) {
  return std::abs(beta.imag()) * detail::sinhc(2.0 * std::abs(beta)) <= tol;
}

VariancePair numeric_variances(const FockState& state, const OperatorSet& ops,
                               const TailGuard& guard) {
  check_tail(state, guard, "numeric_variances");
  const double mean_q = expectation(state, ops.q_op).real();
  const double mean_p = expectation(state, ops.p_op).real();
  // <q^2> = ||q chi||^2 for Hermitian q.
  const CVector q_chi = ops.q_op * state.coeffs();
  const CVector p_chi = ops.p_op * state.coeffs();
  VariancePair v;
  v.hbar = ops.hbar;
  v.omega = ops.omega;
  v.var_q = q_chi.squaredNorm() - mean_q * mean_q;
  v.var_p = p_chi.squaredNorm() - mean_p * mean_p;
  return v;
}

} // namespace fockgeom
