#include "fockgeom/su11.hpp"

#include <cmath>
#include <sstream>

#include "special_functions.hpp"

namespace fockgeom {

using detail::phase_sinh;
using detail::phase_tanh;

Matrix2c k_plus_2x2() {
  Matrix2c m;
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

Matrix2c k_minus_2x2() {
  Matrix2c m;
  m << 0.0, 0.0, -1.0, 0.0;
  return m;
}

Matrix2c k3_2x2() {
  Matrix2c m;
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}

SL2Matrix sl2_exponential(Complex gamma) {
  const double ch = std::cosh(std::abs(gamma));
  const Complex off = phase_sinh(gamma);
  return {ch, off, std::conj(off), ch};
}

SL2Matrix compose_product(Complex beta, Complex beta_prime) {
  const double ch = std::cosh(std::abs(beta));
  const double chp = std::cosh(std::abs(beta_prime));
  const Complex s = phase_sinh(beta);        // beta/|beta| sinh|beta|
  const Complex sp = phase_sinh(beta_prime); // beta'/|beta'| sinh|beta'|
  SL2Matrix m;
  m.a = ch * chp - s * std::conj(sp);
  m.b = sp * ch - s * chp;
  m.c = std::conj(sp) * ch - std::conj(s) * chp;
  m.d = ch * chp - std::conj(s) * sp;
  return m;
}

DisentangledTriple gauss_decompose(const SL2Matrix& m) {
  if (std::abs(m.d) <= 1e-14) {
    std::ostringstream msg;
    msg << "gauss_decompose: |d| = " << std::abs(m.d) << " is too small to factor";
    throw DecompositionSingular(msg.str());
  }
  return {m.b / m.d, -2.0 * std::log(m.d), -m.c / m.d};
}

SL2Matrix reconstruct(const DisentangledTriple& triple) {
  const SL2Matrix upper{1.0, triple.plus_coeff, 0.0, 1.0};
  const SL2Matrix diag{std::exp(0.5 * triple.log_scale), 0.0, 0.0, std::exp(-0.5 * triple.log_scale)};
  // e^{x k-} = I + x k- = [[1, 0], [-x, 1]]
  const SL2Matrix lower{1.0, 0.0, -triple.minus_coeff, 1.0};
  return upper * diag * lower;
}

CMatrix normal_ordered_operator(const DisentangledTriple& triple, const OperatorSet& ops) {
  return matrix_exponential(triple.plus_coeff * ops.k_plus) *
         matrix_exponential(triple.log_scale * ops.k3) *
         matrix_exponential(triple.minus_coeff * ops.k_minus);
}

namespace {

void check_columns(const CMatrix& columns, const TailGuard& guard, const char* what) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) check_tail(FockState(columns.col(j)), guard, what);
}

} // namespace

DisentangleCheck disentangle_product(Complex beta, Complex beta_prime, const OperatorSet& ops,
                                     const DisentangleOptions& options) {
  const int probe = options.probe_levels;
  if (probe < 1) throw InvalidArgument("disentangle_product: probe_levels must be >= 1");
  if (ops.dim < probe + options.guard.margin)
    throw TruncationOverflow("disentangle_product: dim " + std::to_string(ops.dim) +
                             " cannot hold the probed block plus margin");

  DisentangleCheck out;
  out.triple = gauss_decompose(compose_product(beta, beta_prime));
  out.probe_levels = probe;
  out.dim = ops.dim;

  const CMatrix probes = CMatrix::Identity(ops.dim, probe);
  const CMatrix inner = exponential_action(squeeze_generator(beta_prime, ops), probes);
  check_columns(inner, options.guard, "disentangle_product (inner factor)");
  const CMatrix lhs = exponential_action(-squeeze_generator(beta, ops), inner);
  check_columns(lhs, options.guard, "disentangle_product (product)");

  // K+ only raises and K- only lowers, so the leading block of the
  // normal-ordered product is the product of the leading blocks, and those
  // are exact at any truncation that contains them.
  const OperatorSet low = build_operators(std::max(probe, 2), ops.hbar, ops.omega);
  const CMatrix rhs = normal_ordered_operator(out.triple, low);
  out.residual = spectral_norm(lhs.topRows(probe) - rhs.topLeftCorner(probe, probe));
  return out;
}

FGH FGHCurve::operator()(double t) const {
  const Complex u = phase_tanh(beta_, t);        // beta/|beta| tanh(t|beta|)
  const Complex up = phase_tanh(beta_prime_, t); // beta'/|beta'| tanh(t|beta'|)
  const Complex den = 1.0 - std::conj(u) * up;
  const double ch = std::cosh(t * std::abs(beta_));
  const double chp = std::cosh(t * std::abs(beta_prime_));
  const Complex d = ch * chp - std::conj(phase_sinh(t * beta_)) * phase_sinh(t * beta_prime_);
  return {(up - u) / den, -2.0 * std::log(d), (std::conj(up) - std::conj(u)) / den};
}

Matrix2c FGHCurve::product(double t) const {
  return sl2_exponential(-t * beta_).matrix() * sl2_exponential(t * beta_prime_).matrix();
}

Matrix2c FGHCurve::product_log_derivative(double t) const {
  auto generator = [](Complex g) {
    Matrix2c m;
    m << 0.0, g, std::conj(g), 0.0;
    return m;
  };
  const Matrix2c left = sl2_exponential(-t * beta_).matrix();
  const Matrix2c left_inv = sl2_exponential(t * beta_).matrix();
  return -generator(beta_) + left * generator(beta_prime_) * left_inv;
}

Matrix2c FGHCurve::factorized(double t) const {
  const FGH v = (*this)(t);
  Matrix2c upper, diag, lower;
  upper << 1.0, v.f, 0.0, 1.0;
  diag << std::exp(0.5 * v.g), 0.0, 0.0, std::exp(-0.5 * v.g);
  lower << 1.0, 0.0, v.h, 1.0;
  return upper * diag * lower;
}

FGHCurve fgh_curve(Complex beta, Complex beta_prime) { return FGHCurve(beta, beta_prime); }

double fgh_ode_residual(const FGHCurve& curve, double t, double step) {
  const Matrix2c dg = (curve.factorized(t + step) - curve.factorized(t - step)) / (2.0 * step);
  const Matrix2c lhs = dg * curve.factorized(t).inverse();
  return (lhs - curve.product_log_derivative(t)).norm();
}

double log_scale_max_jump(const FGHCurve& curve, int samples) {
  double worst = 0.0;
  Complex prev = curve(0.0).g;
  for (int k = 1; k <= samples; ++k) {
    const Complex cur = curve(static_cast<double>(k) / samples).g;
    worst = std::max(worst, std::abs(cur - prev));
    prev = cur;
  }
  return worst;
}

} // namespace fockgeom
