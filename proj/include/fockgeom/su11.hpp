#pragma once

// Two-dimensional model of su(1,1): k+ = [[0,1],[0,0]], k- = [[0,0],[-1,0]],
// k3 = diag(1/2, -1/2). Group elements are handled in closed form and the
// Fock-space disentangling identity
//
//   e^{-(beta K+ - conj(beta) K-)} e^{beta' K+ - conj(beta') K-}
//       = e^{(b/d) K+} e^{-2 log(d) K3} e^{-(c/d) K-}
//
// is checked against truncated dense exponentials.

#include <Eigen/Dense>

#include "fockgeom/fock_core.hpp"

namespace fockgeom {

using Matrix2c = Eigen::Matrix2cd;

Matrix2c k_plus_2x2();
Matrix2c k_minus_2x2();
Matrix2c k3_2x2();

/// 2x2 complex matrix [[a, b], [c, d]]; constructed elements have ad - bc = 1.
struct SL2Matrix {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  Complex c{0.0, 0.0};
  Complex d{1.0, 0.0};

  static SL2Matrix identity() { return {}; }
  static SL2Matrix from_matrix(const Matrix2c& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

  Complex determinant() const { return a * d - b * c; }
  Matrix2c matrix() const {
    Matrix2c m;
    m << a, b, c, d;
    return m;
  }

  friend SL2Matrix operator*(const SL2Matrix& x, const SL2Matrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
};

/// Exponents of the normal-ordered product e^{plus K+} e^{log_scale K3} e^{minus K-}.
struct DisentangledTriple {
  Complex plus_coeff;  ///< b/d
  Complex log_scale;   ///< -2 Log d, principal branch
  Complex minus_coeff; ///< -c/d
};

/// exp(gamma k+ - conj(gamma) k-) = [[cosh|g|, g sinh|g|/|g|], [conj(g) sinh|g|/|g|, cosh|g|]].
SL2Matrix sl2_exponential(Complex gamma);

/// sl2_exponential(-beta) * sl2_exponential(beta_prime), entry by entry in closed form.
SL2Matrix compose_product(Complex beta, Complex beta_prime);

/// Gauss factorization [[1,b/d],[0,1]] diag(1/d, d) [[1,0],[c/d,1]].
/// Throws DecompositionSingular when |d| <= 1e-14.
DisentangledTriple gauss_decompose(const SL2Matrix& m);

/// Multiplies the three 2x2 factors of a triple back together.
SL2Matrix reconstruct(const DisentangledTriple& triple);

/// e^{plus K+} e^{log_scale K3} e^{minus K-} as a truncated Fock-space matrix.
CMatrix normal_ordered_operator(const DisentangledTriple& triple, const OperatorSet& ops);

struct DisentangleOptions {
  int probe_levels = 16;
  TailGuard guard{};
};

struct DisentangleCheck {
  DisentangledTriple triple;
  double residual = 0.0; ///< spectral norm of LHS - RHS on the probed block
  int probe_levels = 0;
  int dim = 0;
};

/// Closed-form triple for (beta, beta') plus the operator-level residual at
/// ops.dim, measured on the leading `probe_levels` number states.
///
/// Above a few dozen levels the normal-ordered factors have entries that grow
/// like |b/d|^k sqrt((n+2k)!/n!), so cancellation, not truncation, limits the
/// comparison; the low block is where the identity is numerically testable.
/// Truncation is certified by tail checks on the intermediate states
/// e^{B'}|j> and e^{-B}e^{B'}|j>, j < probe_levels.
DisentangleCheck disentangle_product(Complex beta, Complex beta_prime, const OperatorSet& ops,
                                     const DisentangleOptions& options = {});

struct FGH {
  Complex f, g, h;
};

/// t -> (f(t), g(t), h(t)) with f = b(t)/d(t), g = -2 Log d(t), h = c(t)/d(t)
/// for the one-parameter product F(t) = e^{-tB} e^{tB'}.
class FGHCurve {
public:
  FGHCurve(Complex beta, Complex beta_prime) : beta_(beta), beta_prime_(beta_prime) {}

  Complex beta() const { return beta_; }
  Complex beta_prime() const { return beta_prime_; }

  FGH operator()(double t) const;

  /// F(t) = exp(-t(beta k+ - conj(beta) k-)) exp(t(beta' k+ - conj(beta') k-)).
  Matrix2c product(double t) const;
  /// F'(t) F(t)^{-1} in closed form.
  Matrix2c product_log_derivative(double t) const;
  /// G(t) = e^{f k+} e^{g k3} e^{-h k-}. The minus sign matches the Gauss
  /// factor [[1,0],[c/d,1]] = e^{-(c/d) k-}.
  Matrix2c factorized(double t) const;

private:
  Complex beta_;
  Complex beta_prime_;
};

FGHCurve fgh_curve(Complex beta, Complex beta_prime);

/// || G'(t) G(t)^{-1} - F'(t) F(t)^{-1} ||, with G' from central differences.
double fgh_ode_residual(const FGHCurve& curve, double t, double step = 1e-5);

/// Largest jump of g(t) = -2 Log d(t) between neighbouring samples on [0, 1];
/// a 2*pi*i branch jump shows up as a value near 4*pi.
double log_scale_max_jump(const FGHCurve& curve, int samples = 200);

} // namespace fockgeom
