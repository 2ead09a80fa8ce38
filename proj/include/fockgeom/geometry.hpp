#pragma once

// Metrics induced by dl^2 = 1 - |<phi|phi + dphi>|^2 on the coherent,
// squeezed, and coherent-squeezed families, in real coordinates
// (alpha_1, alpha_2, beta_1, beta_2) with alpha = alpha_1 + i alpha_2 and
// beta = beta_1 + i beta_2.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fockgeom/fock_core.hpp"

namespace fockgeom {

/// K_m = sinh(m|beta|)/(m|beta|) for m = 1, 2, 4, and the auxiliary
/// combinations X, Y, Z, F, G of the coherent-squeezed metric.
struct MetricCoefficients {
  double k1 = 1.0, k2 = 1.0, k4 = 1.0;
  Complex x, y, z;
  double f_coef = 0.0, g_coef = 0.0;
};

MetricCoefficients metric_coefficients(Complex beta);

/// Real symmetric matrix of order 2, 3 or 4.
class MetricTensor {
public:
  explicit MetricTensor(Eigen::MatrixXd entries);

  int order() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Ascending eigenvalues (self-adjoint solver).
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()(0); }
  /// Smallest eigenvalue above 1e-12 times max(1, largest |eigenvalue|).
  bool is_positive_definite() const;

  /// Principal submatrix over the given coordinate indices.
  MetricTensor restricted(const std::vector<int>& indices) const;

private:
  Eigen::MatrixXd entries_;
};

/// dl^2 = d alpha d conj(alpha): the 2x2 identity.
MetricTensor coherent_metric();

/// Squeezed-state metric in (beta_1, beta_2); determinant K^2/4 with
/// K = sinh(2|beta|)/(2|beta|).
MetricTensor squeezed_metric(Complex beta);

/// Closed-form 4x4 coherent-squeezed metric (unit alpha block, entries
/// g13 ... g44 built from K1, K2, X, Y, Z, F, G).
///
/// Caveat: the alpha-dependent part of the beta-beta block is not the metric
/// of the states themselves. finite_difference_metric shows the gap; at
/// beta -> 0 this g33 is 1/2 + 2|alpha|^2 where the states give 1/2 + |alpha|^2.
MetricTensor cs_metric(Complex alpha, Complex beta);

/// Closed-form 3x3 metric on the real-beta surface (alpha_1, alpha_2, beta).
MetricTensor cs_metric_real_beta(Complex alpha);

double metric_determinant(const MetricTensor& g);

/// Order-4 determinant through the alpha/beta block split:
/// |E| |B - A^t E^{-1} A| (E = I for the closed forms).
double block_determinant(const MetricTensor& g);

/// Polarized central finite differences of dl^2 with one Richardson step
/// (step and step/2). Overlaps come from the closed-form inner product.
MetricTensor finite_difference_metric(Complex alpha, Complex beta, double step);

/// Same scheme with overlaps taken as dot products of truncated states.
MetricTensor finite_difference_metric(Complex alpha, Complex beta, double step,
                                      const OperatorSet& ops, const TailGuard& guard = {});

// --- determinant sweep -----------------------------------------------------

struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double value(int i) const;
  bool pinned() const { return count == 1; }
};

struct SweepSpec {
  AxisRange alpha_re, alpha_im, beta_re, beta_im;
  int dim = 128;
  double hbar = 1.0;
  double omega = 1.0;

  static constexpr std::size_t kMaxPoints = 10'000'000;

  std::size_t total_points() const;
  void validate() const;
};

enum class MetricSource {
  closed_form,       ///< cs_metric
  finite_difference, ///< finite_difference_metric over closed-form overlaps
  fock,              ///< finite_difference_metric over truncated states at spec.dim
};

enum class SweepStatus { ok, not_positive_definite, error };

const char* to_string(SweepStatus status);

struct SweepRow {
  std::size_t index = 0;
  Complex alpha, beta;
  double det = 0.0;
  double min_eig = 0.0;
  SweepStatus status = SweepStatus::ok;
  std::string message; ///< set when status == error
};

struct SweepOptions {
  int threads = 1; ///< <= 0 means hardware concurrency
  MetricSource source = MetricSource::closed_form;
  double fd_step = 1e-3;
};

/// Determinant and smallest eigenvalue at every grid point.
///
/// Axes with count == 1 are held fixed, so the swept family is the
/// submanifold spanned by the remaining coordinates and det/min_eig refer to
/// the principal submatrix of the 4x4 tensor over them (all four when every
/// axis is pinned). Rows are ordered by grid index with alpha_re slowest and
/// beta_im fastest; each point is computed independently, so the output does
/// not depend on the thread count.
std::vector<SweepRow> determinant_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Coordinates (0 = alpha_1 ... 3 = beta_2) that a sweep varies.
std::vector<int> swept_coordinates(const SweepSpec& spec);

} // namespace fockgeom
