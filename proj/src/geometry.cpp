#include "fockgeom/geometry.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "fockgeom/overlaps.hpp"
#include "special_functions.hpp"

namespace fockgeom {

namespace {

constexpr double kSeriesRadius = 1e-4;
constexpr double kImagTolerance = 1e-10;

// X/beta^2, Y/|beta|^2, Z/conj(beta)^2, F/|beta|^2, G/|beta|^2. Every
// numerator vanishes to the order of its denominator; below kSeriesRadius
// the Taylor series (through relative order |beta|^2) is used.
struct ReducedCoefficients {
  Complex x, y, z;
  double f = 0.0, g = 0.0;
};

// Numerators with the constant parts cancelled by hand:
// cosh(m r) = 1 + cosh_m1, K_m = 1 + sinhc_m1.
MetricCoefficients raw_coefficients(Complex beta) {
  const double r = std::abs(beta);
  const Complex bb = std::conj(beta);
  const double c2 = detail::cosh_m1(2.0 * r);
  const double c4 = detail::cosh_m1(4.0 * r);
  const double k2m = detail::sinhc_m1(2.0 * r);
  const double k4m = detail::sinhc_m1(4.0 * r);

  MetricCoefficients m;
  m.k1 = detail::sinhc(r);
  m.k2 = detail::sinhc(2.0 * r);
  m.k4 = detail::sinhc(4.0 * r);
  m.x = -2.0 * beta * c2 + 2.0 * (beta + 2.0 * bb) * k2m - (beta + bb) * k4m;
  m.y = -2.0 * bb * k2m + (beta + bb) * k4m;
  m.z = 2.0 * beta * c2 - 2.0 * beta * k2m - (beta + bb) * k4m;
  m.f_coef = 4.0 * r * r + 2.0 * c2 - c4;
  m.g_coef = 4.0 * r * r - 2.0 * c2 + c4;
  return m;
}

ReducedCoefficients reduced_coefficients(Complex beta) {
  const double r2 = std::norm(beta);
  const Complex bb = std::conj(beta);
  ReducedCoefficients q;
  if (std::sqrt(r2) < kSeriesRadius) {
    q.x = -16.0 / 3.0 * bb - 16.0 / 5.0 * r2 * bb - 8.0 / 5.0 * bb * bb * bb;
    q.y = 8.0 / 3.0 * beta + 4.0 / 3.0 * bb + 32.0 / 15.0 * r2 * beta + 28.0 / 15.0 * r2 * bb;
    q.z = -8.0 / 3.0 * beta - 32.0 / 15.0 * r2 * beta - 16.0 / 15.0 * beta * beta * beta;
    q.f = -28.0 / 3.0 * r2 - 248.0 / 45.0 * r2 * r2;
    q.g = 8.0 - q.f;
    return q;
  }
  const MetricCoefficients m = raw_coefficients(beta);
  q.x = m.x / (beta * beta);
  q.y = m.y / r2;
  q.z = m.z / (bb * bb);
  q.f = m.f_coef / r2;
  q.g = m.g_coef / r2;
  return q;
}

double checked_real(Complex v, const char* entry) {
  if (!(std::abs(v.imag()) <= kImagTolerance * std::max(1.0, std::abs(v.real())))) {
    std::ostringstream msg;
    msg << "cs_metric: entry " << entry << " has imaginary part " << v.imag();
    throw ConsistencyError(msg.str());
  }
  return v.real();
}

void require_step(double step) {
  if (!(step >= 1e-4 && step <= 1e-2))
    throw InvalidArgument("finite_difference_metric: step must lie in [1e-4, 1e-2]");
}

// 1 - |<phi(u)|phi(u + delta)>|^2 evaluated through `overlap(delta)`.
template <class Overlap>
MetricTensor polarized_metric(double step, Overlap&& overlap) {
  auto q = [&](const std::array<double, 4>& delta) {
    std::array<double, 4> minus{};
    for (int k = 0; k < 4; ++k) minus[k] = -delta[k];
    const double fwd = 1.0 - std::norm(overlap(delta));
    const double bwd = 1.0 - std::norm(overlap(minus));
    return 0.5 * (fwd + bwd);
  };
  auto estimate = [&](double eps) {
    Eigen::Matrix4d g;
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        std::array<double, 4> plus{}, diff{};
        plus[i] += eps;
        plus[j] += eps;
        diff[i] += eps;
        diff[j] -= eps;
        const double qd = (i == j) ? 0.0 : q(diff);
        g(i, j) = g(j, i) = (q(plus) - qd) / (4.0 * eps * eps);
      }
    }
    return g;
  };
  const Eigen::Matrix4d coarse = estimate(step);
  const Eigen::Matrix4d fine = estimate(0.5 * step);
  return MetricTensor((4.0 * fine - coarse) / 3.0);
}

} // namespace

MetricCoefficients metric_coefficients(Complex beta) {
  if (std::abs(beta) < kSeriesRadius) {
    // Numerators are O(|beta|^3) (X, Y, Z) and O(|beta|^4) (F); keep the
    // leading series terms so the identities remain exact at tiny beta.
    const ReducedCoefficients q = reduced_coefficients(beta);
    const double r2 = std::norm(beta);
    MetricCoefficients m;
    m.k1 = detail::sinhc(std::abs(beta));
    m.k2 = detail::sinhc(2.0 * std::abs(beta));
    m.k4 = detail::sinhc(4.0 * std::abs(beta));
    m.x = q.x * beta * beta;
    m.y = q.y * r2;
    m.z = q.z * std::conj(beta) * std::conj(beta);
    m.f_coef = q.f * r2;
    m.g_coef = 8.0 * r2 - m.f_coef;
    return m;
  }
  return raw_coefficients(beta);
}

MetricTensor::MetricTensor(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  const auto n = entries_.rows();
  if (n != entries_.cols() || n < 1 || n > 4)
    throw InvalidMatrix("MetricTensor: expected a square matrix of order 1..4");
  if (!entries_.allFinite()) throw InvalidMatrix("MetricTensor: non-finite entry");
  // Symmetrize explicitly so g_ij == g_ji holds bit for bit.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) entries_(j, i) = entries_(i, j);
}

Eigen::VectorXd MetricTensor::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool MetricTensor::is_positive_definite() const {
  const Eigen::VectorXd ev = eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev(0) > 1e-12 * scale;
}

MetricTensor MetricTensor::restricted(const std::vector<int>& indices) const {
  const int n = static_cast<int>(indices.size());
  if (n < 1) throw InvalidArgument("MetricTensor::restricted: empty index set");
  Eigen::MatrixXd sub(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = indices[i], b = indices[j];
      if (a < 0 || a >= order() || b < 0 || b >= order())
        throw IndexOutOfRange("MetricTensor::restricted: index out of range");
      sub(i, j) = entries_(a, b);
    }
  }
  return MetricTensor(sub);
}

MetricTensor coherent_metric() { return MetricTensor(Eigen::Matrix2d::Identity()); }

MetricTensor squeezed_metric(Complex beta) {
  const double k = detail::sinhc(2.0 * std::abs(beta));
  const double one_minus_k2 = -detail::sinhc_m1(2.0 * std::abs(beta)) * (1.0 + k);
  const Complex e2 = detail::phase_squared(beta); // cos 2theta + i sin 2theta
  Eigen::Matrix2d g;
  g(0, 0) = 0.25 * ((1.0 + k * k) + e2.real() * one_minus_k2);
  g(1, 1) = 0.25 * ((1.0 + k * k) - e2.real() * one_minus_k2);
  g(0, 1) = 0.25 * e2.imag() * one_minus_k2;
  g(1, 0) = g(0, 1);
  return MetricTensor(g);
}

MetricTensor cs_metric(Complex alpha, Complex beta) {
  require_guard_range(alpha, beta, "cs_metric");
  const Complex ab = std::conj(alpha);
  const double a2 = std::norm(alpha);
  const double r = std::abs(beta);
  const Complex bb = std::conj(beta);
  const double k1 = detail::sinhc(r);
  const double k2 = detail::sinhc(2.0 * r);
  const double k2m = detail::sinhc_m1(2.0 * r);
  const double one_minus_k2sq = -k2m * (2.0 + k2m);
  const ReducedCoefficients c = reduced_coefficients(beta);

  // Unit phases beta^2/|beta|^2 and its conjugate; both only ever multiply
  // quantities that vanish at beta = 0.
  const Complex e2 = detail::phase_squared(beta);
  const Complex e2b = std::conj(e2);

  // (conj(Y) a^2 + G |a|^2 + Y conj(a)^2)/|beta|^2 and the two companions
  // with beta^2 and conj(beta)^2 in the denominator.
  const Complex p = std::conj(c.y) * alpha * alpha + c.g * a2 + c.y * ab * ab;
  const Complex qb = std::conj(c.z) * alpha * alpha + c.f * e2b * a2 + c.x * ab * ab;
  const Complex qbb = std::conj(c.x) * alpha * alpha + c.f * e2 * a2 + c.z * ab * ab;

  const Complex s_plus = e2 + e2b;
  const Complex s_minus = e2 - e2b;
  const Complex i(0.0, 1.0);

  const Complex g33 = (2.0 * (1.0 + k2 * k2) + s_plus * one_minus_k2sq + 2.0 * p + qb + qbb) / 8.0;
  const Complex g44 = (2.0 * (1.0 + k2 * k2) - s_plus * one_minus_k2sq + 2.0 * p - qb - qbb) / 8.0;
  const Complex g34 = i / 8.0 * (-s_minus * one_minus_k2sq + qb - qbb);

  const Complex w_plus = alpha * e2b + ab * e2;
  const Complex w_minus = alpha * e2b - ab * e2;
  const double one_minus_k2 = -k2m;
  const double k1sq = k1 * k1;

  const Complex g13 = 0.25 * (w_plus * one_minus_k2 + (alpha + ab) * (1.0 + k2) -
                              (alpha - ab) * (beta - bb) * k1sq);
  const Complex g24 = 0.25 * (-w_plus * one_minus_k2 + (alpha + ab) * (1.0 + k2) +
                              (alpha + ab) * (beta + bb) * k1sq);
  const Complex g14 = i / 4.0 * (w_minus * one_minus_k2 - (alpha - ab) * (1.0 + k2) +
                                 (alpha - ab) * (beta + bb) * k1sq);
  const Complex g23 = i / 4.0 * (w_minus * one_minus_k2 + (alpha - ab) * (1.0 + k2) +
                                 (alpha + ab) * (beta - bb) * k1sq);

  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g(0, 2) = checked_real(g13, "g13");
  g(0, 3) = checked_real(g14, "g14");
  g(1, 2) = checked_real(g23, "g23");
  g(1, 3) = checked_real(g24, "g24");
  g(2, 2) = checked_real(g33, "g33");
  g(2, 3) = checked_real(g34, "g34");
  g(3, 3) = checked_real(g44, "g44");
  return MetricTensor(g);
}

MetricTensor cs_metric_real_beta(Complex alpha) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  // (alpha + conj alpha)/2 = alpha_1, i(alpha - conj alpha)/2 = -alpha_2.
  g(0, 2) = alpha.real();
  g(1, 2) = -alpha.imag();
  g(2, 2) = 0.5 * (1.0 + 4.0 * std::norm(alpha));
  return MetricTensor(g);
}

double metric_determinant(const MetricTensor& g) { return g.entries().determinant(); }

double block_determinant(const MetricTensor& g) {
  if (g.order() != 4) throw InvalidArgument("block_determinant: order-4 tensor required");
  const Eigen::Matrix2d e = g.entries().topLeftCorner<2, 2>();
  const Eigen::Matrix2d a = g.entries().topRightCorner<2, 2>();
  const Eigen::Matrix2d b = g.entries().bottomRightCorner<2, 2>();
  const Eigen::Matrix2d schur = b - a.transpose() * e.inverse() * a;
  return e.determinant() * schur.determinant();
}

MetricTensor finite_difference_metric(Complex alpha, Complex beta, double step) {
  require_guard_range(alpha, beta, "finite_difference_metric");
  require_step(step);
  return polarized_metric(step, [&](const std::array<double, 4>& d) {
    const Complex a2 = alpha + Complex(d[0], d[1]);
    const Complex b2 = beta + Complex(d[2], d[3]);
    return detail::cs_overlap_unchecked(alpha, beta, a2, b2).value;
  });
}

MetricTensor finite_difference_metric(Complex alpha, Complex beta, double step,
                                      const OperatorSet& ops, const TailGuard& guard) {
  require_guard_range(alpha, beta, "finite_difference_metric");
  require_step(step);
  const FockState ref = cs_state(alpha, beta, ops, guard);
  return polarized_metric(step, [&](const std::array<double, 4>& d) {
    const Complex a2 = alpha + Complex(d[0], d[1]);
    const Complex b2 = beta + Complex(d[2], d[3]);
    return inner_product(ref, cs_state(a2, b2, ops, guard));
  });
}

// --- sweep -------------------------------------------------------------------

double AxisRange::value(int i) const {
  if (count == 1 || i == 0) return min;
  if (i == count - 1) return max;
  const double n1 = static_cast<double>(count - 1);
  return (min * (n1 - i) + max * i) / n1;
}

std::size_t SweepSpec::total_points() const {
  std::size_t total = 1;
  for (const AxisRange* ax : {&alpha_re, &alpha_im, &beta_re, &beta_im}) {
    if (ax->count < 1) return 0;
    total *= static_cast<std::size_t>(ax->count);
    if (total > kMaxPoints) return total;
  }
  return total;
}

void SweepSpec::validate() const {
  const std::array<std::pair<const char*, const AxisRange*>, 4> axes{{
      {"alpha_re", &alpha_re}, {"alpha_im", &alpha_im}, {"beta_re", &beta_re}, {"beta_im", &beta_im}}};
  for (const auto& [name, ax] : axes) {
    if (!std::isfinite(ax->min) || !std::isfinite(ax->max))
      throw InvalidArgument(std::string("sweep: non-finite bound on ") + name);
    if (ax->min > ax->max) throw InvalidArgument(std::string("sweep: min > max on ") + name);
    if (ax->count < 1) throw InvalidArgument(std::string("sweep: count < 1 on ") + name);
  }
  if (total_points() > kMaxPoints) throw InvalidArgument("sweep: more than 1e7 grid points");
  if (dim < 1) throw InvalidDimension("sweep: dim must be positive");
  if (!(hbar > 0.0) || !(omega > 0.0)) throw InvalidArgument("sweep: hbar and omega must be positive");

  // The modulus is convex, so the farthest grid point is a corner.
  auto far = [](const AxisRange& ax) { return std::max(std::abs(ax.min), std::abs(ax.max)); };
  require_guard_range(Complex(far(alpha_re), far(alpha_im)), Complex(far(beta_re), far(beta_im)),
                      "sweep grid");
}

const char* to_string(SweepStatus status) {
  switch (status) {
  case SweepStatus::ok: return "ok";
  case SweepStatus::not_positive_definite: return "not_pd";
  case SweepStatus::error: return "error";
  }
  return "error";
}

std::vector<int> swept_coordinates(const SweepSpec& spec) {
  std::vector<int> idx;
  const std::array<const AxisRange*, 4> axes{&spec.alpha_re, &spec.alpha_im, &spec.beta_re,
                                             &spec.beta_im};
  for (int k = 0; k < 4; ++k)
    if (!axes[k]->pinned()) idx.push_back(k);
  if (idx.empty()) idx = {0, 1, 2, 3};
  return idx;
}

std::vector<SweepRow> determinant_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  if (options.source != MetricSource::closed_form) require_step(options.fd_step);

  const std::size_t total = spec.total_points();
  const std::vector<int> coords = swept_coordinates(spec);
  std::vector<SweepRow> rows(total);

  OperatorSet ops;
  if (options.source == MetricSource::fock) ops = build_operators(spec.dim, spec.hbar, spec.omega);

  const std::size_t n1 = spec.alpha_im.count, n2 = spec.beta_re.count, n3 = spec.beta_im.count;

  auto evaluate = [&](std::size_t index) {
    SweepRow& row = rows[index];
    row.index = index;
    std::size_t rest = index;
    const int i3 = static_cast<int>(rest % n3);
    rest /= n3;
    const int i2 = static_cast<int>(rest % n2);
    rest /= n2;
    const int i1 = static_cast<int>(rest % n1);
    const int i0 = static_cast<int>(rest / n1);
    row.alpha = Complex(spec.alpha_re.value(i0), spec.alpha_im.value(i1));
    row.beta = Complex(spec.beta_re.value(i2), spec.beta_im.value(i3));
    try {
      MetricTensor full = [&] {
        switch (options.source) {
        case MetricSource::finite_difference:
          return finite_difference_metric(row.alpha, row.beta, options.fd_step);
        case MetricSource::fock:
          return finite_difference_metric(row.alpha, row.beta, options.fd_step, ops);
        default:
          return cs_metric(row.alpha, row.beta);
        }
      }();
      const MetricTensor g = full.restricted(coords);
      row.det = metric_determinant(g);
      row.min_eig = g.min_eigenvalue();
      row.status = g.is_positive_definite() ? SweepStatus::ok : SweepStatus::not_positive_definite;
    } catch (const std::exception& e) {
      row.det = std::numeric_limits<double>::quiet_NaN();
      row.min_eig = std::numeric_limits<double>::quiet_NaN();
      row.status = SweepStatus::error;
      row.message = e.what();
    }
  };

  std::size_t threads = options.threads > 0 ? static_cast<std::size_t>(options.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(total, 1));

  if (threads <= 1) {
    for (std::size_t k = 0; k < total; ++k) evaluate(k);
    return rows;
  }

  // Each worker claims chunks of indices and writes only its own rows.
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(kChunk);
      if (start >= total) return;
      const std::size_t stop = std::min(total, start + kChunk);
      for (std::size_t k = start; k < stop; ++k) evaluate(k);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

} // namespace fockgeom
