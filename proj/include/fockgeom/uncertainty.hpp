#pragma once

#include "fockgeom/fock_core.hpp"

namespace fockgeom {

/// Position/momentum variances. var_q is in units of hbar/omega, var_p in hbar*omega.
struct VariancePair {
  double var_q = 0.0;
  double var_p = 0.0;
  double hbar = 1.0;
  double omega = 1.0;

  double product() const { return var_q * var_p; }
};

/// Closed-form variances on |alpha, beta> (independent of alpha):
/// var_q = hbar/(2 omega) |cosh|b| + b sinh|b|/|b||^2,
/// var_p = hbar omega/2  |cosh|b| - b sinh|b|/|b||^2.
VariancePair variances_closed(Complex beta, double hbar = 1.0, double omega = 1.0);

/// (hbar/2)^2 {1 - (beta - conj(beta))^2 (sinh 2|beta| / 2|beta|)^2}.
double uncertainty_product(Complex beta, double hbar = 1.0);

/// True iff |Im beta| sinh(2|beta|)/(2|beta|) <= tol, the exact condition for
/// the product above to sit at (hbar/2)^2.
bool is_minimal_uncertainty(Complex beta, double tol);

/// <q^2> - <q>^2 and <p^2> - <p>^2 from the truncated matrices.
VariancePair numeric_variances(const FockState& state, const OperatorSet& ops,
                               const TailGuard& guard = {});

} // namespace fockgeom
