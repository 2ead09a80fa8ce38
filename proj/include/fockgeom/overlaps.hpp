#pragma once

#include "fockgeom/fock_core.hpp"

namespace fockgeom {

/// <alpha, beta | alpha', beta'> split into its factors:
/// value = coherent_factor * squeezed_factor * exp(exponent_correction), with
/// exponent_correction = (b/d) conj(alpha)^2/2 - (conj(b)/d) alpha'^2/2 + (1/d - 1) conj(alpha) alpha'.
struct OverlapResult {
  Complex value;
  Complex coherent_factor;
  Complex squeezed_factor;
  Complex exponent_correction;
};

/// <alpha|alpha'> = exp(-|alpha|^2/2 - |alpha'|^2/2 + conj(alpha) alpha').
Complex coherent_overlap(Complex alpha, Complex alpha_prime);

/// <beta|beta'> = 1/sqrt(d), principal root. Guard: |beta|, |beta'| <= 1.
Complex squeezed_overlap(Complex beta, Complex beta_prime);

/// Closed-form inner product of two coherent-squeezed states.
/// Guard: |alpha|, |alpha'| <= 2 and |beta|, |beta'| <= 1.
OverlapResult cs_overlap(Complex alpha, Complex beta, Complex alpha_prime, Complex beta_prime);

/// <alpha| exp(-Log(d) N) |alpha'> = <alpha|alpha'> exp(conj(alpha) alpha' (1/d - 1)).
Complex number_kernel(Complex alpha, Complex alpha_prime, Complex d);

/// Brute-force <alpha,beta|alpha',beta'> as a dot product of truncated states.
Complex fock_cs_overlap(Complex alpha, Complex beta, Complex alpha_prime, Complex beta_prime,
                        const OperatorSet& ops, const TailGuard& guard = {});

namespace detail {
/// cs_overlap without the guard-range check; used for finite differences that
/// step slightly past the boundary.
OverlapResult cs_overlap_unchecked(Complex alpha, Complex beta, Complex alpha_prime,
                                   Complex beta_prime);
} // namespace detail

} // namespace fockgeom
