#include "fockgeom/holonomy.hpp"

#include <cmath>
#include <sstream>

namespace fockgeom {

namespace {

using Coords = std::array<double, 4>;

Coords coords_of(Complex alpha, Complex beta) {
  return {alpha.real(), alpha.imag(), beta.real(), beta.imag()};
}

Eigen::MatrixX2cd frame_at(const Coords& x, const OperatorSet& ops, const TailGuard& guard) {
  return qubit_frame(Complex(x[0], x[1]), Complex(x[2], x[3]), ops, guard);
}

Coords shifted(const Coords& x, const Coords& dir, double h) {
  Coords y;
  for (int k = 0; k < 4; ++k) y[k] = x[k] + h * dir[k];
  return y;
}

// frame^dag d(frame)/ds along the (unnormalized) direction `dir`.
Matrix2c directional_connection(const Coords& x, const Coords& dir, double h,
                                const Eigen::MatrixX2cd& center, const OperatorSet& ops,
                                const TailGuard& guard) {
  const Eigen::MatrixX2cd fwd = frame_at(shifted(x, dir, h), ops, guard);
  const Eigen::MatrixX2cd bwd = frame_at(shifted(x, dir, -h), ops, guard);
  return center.adjoint() * (fwd - bwd) / (2.0 * h);
}

void require_connection_step(double step, const char* where) {
  if (!(step >= 1e-6 && step <= 1e-3)) {
    std::ostringstream msg;
    msg << where << ": step must lie in [1e-6, 1e-3]";
    throw InvalidArgument(msg.str());
  }
}

constexpr std::array<std::array<int, 2>, 6> kPlanes{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

} // namespace

CMatrix cs_operator(Complex alpha, Complex beta, const OperatorSet& ops, const TailGuard& guard) {
  require_guard_range(alpha, beta, "cs_operator");
  const CMatrix o = matrix_exponential(squeeze_generator(beta, ops)) *
                    matrix_exponential(displacement_generator(alpha, ops));
  check_tail(FockState(o.col(0)), guard, "cs_operator column 0");
  check_tail(FockState(o.col(1)), guard, "cs_operator column 1");
  return o;
}

CMatrix kerr_hamiltonian(const OperatorSet& ops) {
  CMatrix h = CMatrix::Zero(ops.dim, ops.dim);
  for (int n = 0; n < ops.dim; ++n) h(n, n) = ops.hbar * ops.omega * n * (n - 1.0);
  return h;
}

CMatrix hamiltonian_family(Complex alpha, Complex beta, const OperatorSet& ops,
                           const TailGuard& guard) {
  const CMatrix o = cs_operator(alpha, beta, ops, guard);
  return o * kerr_hamiltonian(ops) * o.adjoint();
}

Eigen::MatrixX2cd qubit_frame(Complex alpha, Complex beta, const OperatorSet& ops,
                              const TailGuard& guard) {
  // Only two columns are needed, so both exponentials act on |0>, |1> directly.
  const CMatrix u01 =
      exponential_action(displacement_generator(alpha, ops), CMatrix::Identity(ops.dim, 2));
  Eigen::MatrixX2cd f = exponential_action(squeeze_generator(beta, ops), u01);
  check_tail(FockState(f.col(0)), guard, "qubit_frame column 0");
  check_tail(FockState(f.col(1)), guard, "qubit_frame column 1");
  return f;
}

double ConnectionSample::anti_hermitian_defect() const {
  double worst = 0.0;
  for (const auto& a : components) worst = std::max(worst, spectral_norm(a + a.adjoint()));
  return worst;
}

Matrix2c ConnectionSample::contract(const std::array<double, 4>& du) const {
  Matrix2c s = Matrix2c::Zero();
  for (int k = 0; k < 4; ++k) s += components[k] * du[k];
  return s;
}

ConnectionSample connection_at(Complex alpha, Complex beta, double step, const OperatorSet& ops,
                               const TailGuard& guard) {
  require_guard_range(alpha, beta, "connection_at");
  require_connection_step(step, "connection_at");
  const Coords x = coords_of(alpha, beta);
  const Eigen::MatrixX2cd center = frame_at(x, ops, guard);
  ConnectionSample s;
  for (int u = 0; u < 4; ++u) {
    Coords e{};
    e[u] = 1.0;
    s.components[u] = directional_connection(x, e, step, center, ops, guard);
  }
  return s;
}

Matrix2c CurvatureSample::component(int u, int v) const {
  if (u < 0 || u > 3 || v < 0 || v > 3) throw IndexOutOfRange("CurvatureSample: index out of range");
  if (u == v) return Matrix2c::Zero();
  for (std::size_t k = 0; k < kPlanes.size(); ++k) {
    if (kPlanes[k][0] == u && kPlanes[k][1] == v) return planes[k];
    if (kPlanes[k][0] == v && kPlanes[k][1] == u) return -planes[k];
  }
  return Matrix2c::Zero();
}

CurvatureSample curvature_at(Complex alpha, Complex beta, double step, const OperatorSet& ops,
                             const TailGuard& guard) {
  require_guard_range(alpha, beta, "curvature_at");
  require_connection_step(step, "curvature_at");
  // The inner connection step is kept well below the outer one.
  const double inner = std::max(1e-6, 0.1 * step);
  const Coords x = coords_of(alpha, beta);
  auto conn = [&](const Coords& y) {
    return connection_at(Complex(y[0], y[1]), Complex(y[2], y[3]), inner, ops, guard);
  };

  const ConnectionSample a0 = conn(x);
  std::array<ConnectionSample, 4> plus, minus;
  for (int u = 0; u < 4; ++u) {
    Coords e{};
    e[u] = 1.0;
    plus[u] = conn(shifted(x, e, step));
    minus[u] = conn(shifted(x, e, -step));
  }

  CurvatureSample f;
  for (std::size_t k = 0; k < kPlanes.size(); ++k) {
    const int u = kPlanes[k][0], v = kPlanes[k][1];
    const Matrix2c du_av = (plus[u].components[v] - minus[u].components[v]) / (2.0 * step);
    const Matrix2c dv_au = (plus[v].components[u] - minus[v].components[u]) / (2.0 * step);
    const Matrix2c& au = a0.components[u];
    const Matrix2c& av = a0.components[v];
    f.planes[k] = du_av - dv_au + (au * av - av * au);
  }
  return f;
}

LoopPath::LoopPath(std::vector<LoopPoint> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
  if (samples_.size() < 3) throw InvalidArgument("LoopPath: at least 3 samples required");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const Coords x = coords_of(samples_[k].alpha, samples_[k].beta);
    for (double c : x)
      if (!std::isfinite(c)) throw InvalidArgument("LoopPath: non-finite sample");
    if (k == 0) continue;
    const Coords p = coords_of(samples_[k - 1].alpha, samples_[k - 1].beta);
    for (int i = 0; i < 4; ++i) {
      if (std::abs(x[i] - p[i]) > kMaxStep) {
        std::ostringstream msg;
        msg << "LoopPath: step " << k << " moves coordinate " << i << " by "
            << std::abs(x[i] - p[i]) << " (> " << kMaxStep << ")";
        throw InvalidArgument(msg.str());
      }
    }
  }
  if (closed_) {
    const LoopPoint& a = samples_.front();
    const LoopPoint& b = samples_.back();
    if (std::abs(a.alpha - b.alpha) > kClosureTolerance ||
        std::abs(a.beta - b.beta) > kClosureTolerance)
      throw InvalidArgument("LoopPath: closed path must end at its first sample");
  }
}

LoopPath LoopPath::circle(const LoopPoint& center, int u, int v, double radius, int steps) {
  if (u < 0 || u > 3 || v < 0 || v > 3 || u == v)
    throw InvalidArgument("LoopPath::circle: need two distinct coordinates in 0..3");
  if (steps < 2 || !(radius >= 0.0)) throw InvalidArgument("LoopPath::circle: bad radius or steps");
  const Coords c = coords_of(center.alpha, center.beta);
  std::vector<LoopPoint> pts;
  pts.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    // The last sample repeats the first exactly.
    const double t = (k == steps) ? 0.0 : 2.0 * M_PI * k / steps;
    Coords x = c;
    x[u] += radius * std::cos(t);
    x[v] += radius * std::sin(t);
    pts.push_back({Complex(x[0], x[1]), Complex(x[2], x[3])});
  }
  return LoopPath(std::move(pts), true);
}

LoopPath LoopPath::reversed() const {
  return LoopPath(std::vector<LoopPoint>(samples_.rbegin(), samples_.rend()), closed_);
}

LoopPath LoopPath::then(const LoopPath& next) const {
  const LoopPoint& end = samples_.back();
  const LoopPoint& start = next.samples_.front();
  if (std::abs(end.alpha - start.alpha) > kClosureTolerance ||
      std::abs(end.beta - start.beta) > kClosureTolerance)
    throw InvalidArgument("LoopPath::then: paths do not join");
  std::vector<LoopPoint> pts = samples_;
  pts.insert(pts.end(), next.samples_.begin() + 1, next.samples_.end());
  return LoopPath(std::move(pts), closed_ && next.closed_);
}

HolonomyResult holonomy(const LoopPath& path, const OperatorSet& ops, const TailGuard& guard,
                        double step) {
  if (!path.closed()) throw InvalidArgument("holonomy: path is not closed");
  require_connection_step(step, "holonomy");
  for (const LoopPoint& p : path.samples()) require_guard_range(p.alpha, p.beta, "holonomy");

  HolonomyResult r;
  r.gate = Matrix2c::Identity();
  const auto& s = path.samples();
  for (std::size_t k = 1; k < s.size(); ++k) {
    const Coords x0 = coords_of(s[k - 1].alpha, s[k - 1].beta);
    const Coords x1 = coords_of(s[k].alpha, s[k].beta);
    Coords du, mid;
    double len2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      du[i] = x1[i] - x0[i];
      mid[i] = 0.5 * (x0[i] + x1[i]);
      len2 += du[i] * du[i];
    }
    ++r.steps;
    if (len2 == 0.0) continue; // exp(0) = I
    const double len = std::sqrt(len2);
    Coords dir;
    for (int i = 0; i < 4; ++i) dir[i] = du[i] / len;
    const Eigen::MatrixX2cd center = frame_at(mid, ops, guard);
    const Matrix2c a_du = directional_connection(mid, dir, step, center, ops, guard) * len;
    r.gate = r.gate * matrix_exponential(a_du);
  }
  r.unitarity_defect = spectral_norm(r.gate.adjoint() * r.gate - Matrix2c::Identity());
  return r;
}

} // namespace fockgeom
