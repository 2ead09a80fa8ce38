#pragma once

// Truncated single-mode Fock space: ladder/su(1,1)/quadrature matrices,
// dense matrix exponentials, and the brute-force state oracle every closed
// form in this library is checked against.

#include <complex>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

#include "fockgeom/errors.hpp"

namespace fockgeom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Validated parameter region: |alpha| <= 2, |beta| <= 1.
inline constexpr double kAlphaGuard = 2.0;
inline constexpr double kBetaGuard = 1.0;

/// Throws GuardRangeViolation unless |alpha| <= 2 and |beta| <= 1.
void require_guard_range(Complex alpha, Complex beta, const char* where);

/// Tail check applied to every oracle state: the amplitude that reaches the
/// top `margin` levels of the working space must stay below `tail_tol`.
struct TailGuard {
  int margin = 16;
  double tail_tol = 1e-12;
};

/// Dimension control for oracle runs. Work starts at target_dim + margin and
/// target_dim is doubled (up to max_dim) whenever a TailGuard trips.
struct TruncationPolicy {
  int target_dim = 64;
  int margin = 16;
  double tail_tol = 1e-12;
  int max_dim = 512;

  TailGuard guard() const { return {margin, tail_tol}; }
  void validate() const;
};

/// Truncated element of the Fock space: coefficient c_n of |n>, n < dim.
class FockState {
public:
  explicit FockState(CVector coeffs);

  static FockState basis(int dim, int n);
  static FockState vacuum(int dim) { return basis(dim, 0); }

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const CVector& coeffs() const { return coeffs_; }
  Complex operator[](int n) const { return coeffs_(n); }
  double squared_norm() const { return coeffs_.squaredNorm(); }

private:
  CVector coeffs_;
};

/// Ladder, su(1,1) and quadrature matrices at a fixed truncation.
///
/// a carries sqrt(1), sqrt(2), ... on the superdiagonal; n_op = a_dag * a;
/// k_plus = a_dag^2 / 2, k_minus = a^2 / 2, k3 = (n_op + 1/2) / 2;
/// q_op = sqrt(hbar / 2 omega) (a_dag + a), p_op = i sqrt(omega hbar / 2) (a_dag - a).
struct OperatorSet {
  int dim = 0;
  double hbar = 1.0;
  double omega = 1.0;
  CMatrix a, a_dag, n_op, k_plus, k_minus, k3, q_op, p_op;
};

OperatorSet build_operators(int dim, double hbar = 1.0, double omega = 1.0);

/// exp(m) for a finite square matrix (scaling and squaring, Pade 13).
CMatrix matrix_exponential(const CMatrix& m);

/// exp(generator) * vectors without forming the exponential: Taylor steps on
/// a sparse copy of the generator, scaled so each step has 1-norm <= 2.
/// Meant for the banded ladder generators, where it is far cheaper than
/// matrix_exponential at large dimension.
CMatrix exponential_action(const CMatrix& generator, const CMatrix& vectors);

/// Displacement generator alpha a_dag - conj(alpha) a.
CMatrix displacement_generator(Complex alpha, const OperatorSet& ops);
/// Squeeze generator beta K+ - conj(beta) K-.
CMatrix squeeze_generator(Complex beta, const OperatorSet& ops);

/// Truncated exp(alpha a_dag - conj(alpha) a)|0>.
FockState coherent_state(Complex alpha, const OperatorSet& ops, const TailGuard& guard = {});

/// Truncated exp(beta K+ - conj(beta) K-) exp(alpha a_dag - conj(alpha) a)|0>.
FockState cs_state(Complex alpha, Complex beta, const OperatorSet& ops,
                   const TailGuard& guard = {});

/// <chi|M|chi>.
Complex expectation(const FockState& state, const CMatrix& op);

/// <lhs|rhs> (conjugate-linear in lhs).
Complex inner_product(const FockState& lhs, const FockState& rhs);

/// Sum of |c_n|^2 over n >= k.
double tail_mass(const FockState& state, int k);

/// Throws TruncationOverflow when tail_mass(state, dim - margin) > tail_tol.
void check_tail(const FockState& state, const TailGuard& guard, const char* what);

/// ||[a, a_dag] - I|| on the leading (dim-1) block (rounding level only).
double commutator_defect(const OperatorSet& ops);

/// Largest defect of [K3,K+]=K+, [K3,K-]=-K-, [K+,K-]=-2K3 on the leading (dim-2) block.
double su11_relation_defect(const OperatorSet& ops);

/// Spectral norm of a complex matrix.
double spectral_norm(const CMatrix& m);

/// Runs fn(ops) at target_dim + margin, doubling target_dim on
/// TruncationOverflow until it would exceed max_dim; the last overflow is
/// rethrown.
template <class Fn>
auto with_truncation(const TruncationPolicy& policy, double hbar, double omega, Fn&& fn)
    -> std::invoke_result_t<Fn&, const OperatorSet&> {
  policy.validate();
  for (int target = policy.target_dim;; target *= 2) {
    const OperatorSet ops = build_operators(target + policy.margin, hbar, omega);
    try {
      return fn(ops);
    } catch (const TruncationOverflow&) {
      if (target * 2 > policy.max_dim) throw;
    }
  }
}

} // namespace fockgeom
