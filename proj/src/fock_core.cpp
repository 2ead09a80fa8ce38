#include "fockgeom/fock_core.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

namespace fockgeom {

void require_guard_range(Complex alpha, Complex beta, const char* where) {
  if (!(std::abs(alpha) <= kAlphaGuard) || !(std::abs(beta) <= kBetaGuard)) {
    std::ostringstream msg;
    msg << where << ": parameters outside the guard range |alpha| <= " << kAlphaGuard
        << ", |beta| <= " << kBetaGuard << " (|alpha| = " << std::abs(alpha)
        << ", |beta| = " << std::abs(beta) << ")";
    throw GuardRangeViolation(msg.str());
  }
}

void TruncationPolicy::validate() const {
  if (target_dim < 2) throw InvalidDimension("truncation target_dim must be >= 2");
  if (margin < 0) throw InvalidArgument("truncation margin must be >= 0");
  if (!(tail_tol > 0.0)) throw InvalidArgument("truncation tail_tol must be > 0");
  if (max_dim < target_dim) throw InvalidDimension("truncation max_dim must be >= target_dim");
}

FockState::FockState(CVector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 1) throw InvalidDimension("FockState needs at least one level");
}

FockState FockState::basis(int dim, int n) {
  if (dim < 1) throw InvalidDimension("FockState dimension must be >= 1");
  if (n < 0 || n >= dim) throw IndexOutOfRange("basis level outside the truncated space");
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return FockState(std::move(v));
}

OperatorSet build_operators(int dim, double hbar, double omega) {
  if (dim < 2) throw InvalidDimension("operator dimension must be >= 2, got " + std::to_string(dim));
  if (!(hbar > 0.0) || !(omega > 0.0)) throw InvalidArgument("hbar and omega must be positive");

  OperatorSet ops;
  ops.dim = dim;
  ops.hbar = hbar;
  ops.omega = omega;
  ops.a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.a_dag = ops.a.adjoint();
  ops.n_op = ops.a_dag * ops.a;
  ops.k_plus = 0.5 * ops.a_dag * ops.a_dag;
  ops.k_minus = 0.5 * ops.a * ops.a;
  ops.k3 = 0.5 * (ops.n_op + 0.5 * CMatrix::Identity(dim, dim));
  ops.q_op = std::sqrt(hbar / (2.0 * omega)) * (ops.a_dag + ops.a);
  ops.p_op = Complex(0.0, std::sqrt(omega * hbar / 2.0)) * (ops.a_dag - ops.a);
  return ops;
}

CMatrix matrix_exponential(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidMatrix("matrix_exponential needs a square matrix");
  if (!m.allFinite()) throw InvalidMatrix("matrix_exponential input has non-finite entries");
  if (m.size() == 0) return m;
  return m.exp();
}

CMatrix exponential_action(const CMatrix& generator, const CMatrix& vectors) {
  if (generator.rows() != generator.cols())
    throw InvalidMatrix("exponential_action needs a square generator");
  if (vectors.rows() != generator.rows())
    throw DimensionMismatch("exponential_action: generator and vectors differ in dimension");
  if (!generator.allFinite() || !vectors.allFinite())
    throw InvalidMatrix("exponential_action input has non-finite entries");

  const Eigen::SparseMatrix<Complex> a = generator.sparseView(0.0, 0.0);
  const double norm1 = generator.cwiseAbs().colwise().sum().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 / 2.0)));
  const Eigen::SparseMatrix<Complex> step = a / static_cast<double>(steps);

  CMatrix f = vectors;
  for (int s = 0; s < steps; ++s) {
    CMatrix term = f;
    CMatrix sum = f;
    for (int k = 1; k <= 60; ++k) {
      term = (step * term) / static_cast<double>(k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * std::max(1.0, sum.cwiseAbs().maxCoeff())) break;
    }
    f = std::move(sum);
  }
  return f;
}

CMatrix displacement_generator(Complex alpha, const OperatorSet& ops) {
  return alpha * ops.a_dag - std::conj(alpha) * ops.a;
}

CMatrix squeeze_generator(Complex beta, const OperatorSet& ops) {
  return beta * ops.k_plus - std::conj(beta) * ops.k_minus;
}

FockState coherent_state(Complex alpha, const OperatorSet& ops, const TailGuard& guard) {
  FockState state(exponential_action(displacement_generator(alpha, ops),
                                     FockState::vacuum(ops.dim).coeffs()));
  check_tail(state, guard, "coherent_state");
  return state;
}

FockState cs_state(Complex alpha, Complex beta, const OperatorSet& ops, const TailGuard& guard) {
  const FockState displaced = coherent_state(alpha, ops, guard);
  FockState state(exponential_action(squeeze_generator(beta, ops), displaced.coeffs()));
  check_tail(state, guard, "cs_state");
  return state;
}

Complex expectation(const FockState& state, const CMatrix& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim())
    throw DimensionMismatch("expectation: operator is " + std::to_string(op.rows()) + "x" +
                            std::to_string(op.cols()) + ", state has dim " +
                            std::to_string(state.dim()));
  if (std::abs(state.squared_norm() - 1.0) > 1e-6)
    throw InvalidArgument("expectation: state is not normalized within 1e-6");
  return state.coeffs().dot(op * state.coeffs());
}

Complex inner_product(const FockState& lhs, const FockState& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("inner_product: state dimensions differ");
  return lhs.coeffs().dot(rhs.coeffs());
}

double tail_mass(const FockState& state, int k) {
  if (k < 0 || k >= state.dim())
    throw IndexOutOfRange("tail_mass: level " + std::to_string(k) + " outside [0, " +
                          std::to_string(state.dim()) + ")");
  return state.coeffs().tail(state.dim() - k).squaredNorm();
}

void check_tail(const FockState& state, const TailGuard& guard, const char* what) {
  const int start = state.dim() - guard.margin;
  if (start <= 0)
    throw TruncationOverflow(std::string(what) + ": dimension " + std::to_string(state.dim()) +
                             " leaves no room for a " + std::to_string(guard.margin) +
                             "-level margin");
  const double tail = tail_mass(state, start);
  if (tail > guard.tail_tol) {
    std::ostringstream msg;
    msg << what << ": tail mass " << tail << " above levels >= " << start << " exceeds "
        << guard.tail_tol << " at dim " << state.dim();
    throw TruncationOverflow(msg.str());
  }
}

double commutator_defect(const OperatorSet& ops) {
  const int m = ops.dim - 1;
  const CMatrix comm = ops.a * ops.a_dag - ops.a_dag * ops.a;
  return (comm.topLeftCorner(m, m) - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
}

double su11_relation_defect(const OperatorSet& ops) {
  const int m = ops.dim - 2;
  if (m < 1) return 0.0;
  auto comm = [](const CMatrix& x, const CMatrix& y) -> CMatrix { return x * y - y * x; };
  const CMatrix r1 = comm(ops.k3, ops.k_plus) - ops.k_plus;
  const CMatrix r2 = comm(ops.k3, ops.k_minus) + ops.k_minus;
  const CMatrix r3 = comm(ops.k_plus, ops.k_minus) + 2.0 * ops.k3;
  double worst = 0.0;
  for (const CMatrix* r : {&r1, &r2, &r3})
    worst = std::max(worst, r->topLeftCorner(m, m).cwiseAbs().maxCoeff());
  return worst;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

} // namespace fockgeom
