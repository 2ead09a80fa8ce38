#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "fockgeom/cli.hpp"
#include "fockgeom/geometry.hpp"
#include "fockgeom/holonomy.hpp"
#include "fockgeom/overlaps.hpp"
#include "fockgeom/su11.hpp"
#include "fockgeom/uncertainty.hpp"

namespace fockgeom::cli {

namespace {

Complex random_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * M_PI * u(rng);
  return std::polar(r, t);
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Runs `measure` and turns it into a table row; library errors become a
// failed row with the message attached.
ReportRow check(const std::string& quantity, double tolerance,
                const std::function<double(std::string&)>& measure) {
  ReportRow row;
  row.quantity = quantity;
  row.tolerance = tolerance;
  try {
    row.value = measure(row.detail);
    row.passed = std::isfinite(row.value) && row.value <= tolerance;
  } catch (const std::exception& e) {
    row.value = std::numeric_limits<double>::quiet_NaN();
    row.passed = false;
    row.detail = e.what();
  }
  return row;
}

} // namespace

std::vector<ReportRow> run_verify(const VerifyOptions& options) {
  if (options.dim < 32) throw InvalidDimension("verify: --dim must be at least 32");
  std::mt19937_64 rng(options.seed);
  TruncationPolicy policy;
  policy.target_dim = options.dim - policy.margin;
  policy.max_dim = std::max(1024, 8 * options.dim); // composed squeezes reach |beta| = 1.6

  std::vector<ReportRow> rows;

  rows.push_back(check("su(1,1) commutation relations", 1e-9, [&](std::string& detail) {
    const OperatorSet ops = build_operators(options.dim);
    detail = "dim " + std::to_string(options.dim);
    return std::max(su11_relation_defect(ops), commutator_defect(ops));
  }));

  rows.push_back(check("disentangling residual", 1e-8, [&](std::string& detail) {
    double worst = 0.0;
    int dim_used = 0;
    for (int k = 0; k < 5; ++k) {
      const Complex b = random_disk(rng, 0.8), bp = random_disk(rng, 0.8);
      const DisentangleCheck c = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
        return disentangle_product(b, bp, ops);
      });
      worst = std::max(worst, c.residual);
      dim_used = std::max(dim_used, c.dim);
    }
    detail = "5 pairs, |beta| <= 0.8, largest dim " + std::to_string(dim_used);
    return worst;
  }));

  rows.push_back(check("overlap closed form vs Fock oracle (relative)", 1e-6, [&](std::string& detail) {
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Complex a = random_disk(rng, 1.5), b = random_disk(rng, 0.6);
      const Complex ap = random_disk(rng, 1.5), bp = random_disk(rng, 0.6);
      const Complex closed = cs_overlap(a, b, ap, bp).value;
      const Complex oracle = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
        return fock_cs_overlap(a, b, ap, bp, ops);
      });
      worst = std::max(worst, std::abs(closed - oracle) / std::max(std::abs(oracle), 1e-300));
    }
    detail = "5 tuples";
    return worst;
  }));

  rows.push_back(check("uncertainty product vs closed form", 1e-6, [&](std::string& detail) {
    double worst = 0.0;
    double min_excess = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 5; ++k) {
      const Complex a = random_disk(rng, 1.0), b = random_disk(rng, 0.7);
      const VariancePair v = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
        return numeric_variances(cs_state(a, b, ops, policy.guard()), ops, policy.guard());
      });
      worst = std::max(worst, std::abs(v.product() - uncertainty_product(b)));
      min_excess = std::min(min_excess, v.product() - 0.25);
    }
    std::ostringstream d;
    d << "smallest dq^2 dp^2 - 1/4 = " << min_excess;
    detail = d.str();
    // The bound itself is part of the check.
    return min_excess < -1e-9 ? std::numeric_limits<double>::infinity() : worst;
  }));

  rows.push_back(check("metric identities X+2Y+Z=0, F+G=8|beta|^2", 1e-10, [&](std::string& detail) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Complex b = random_disk(rng, 1.0);
      const MetricCoefficients m = metric_coefficients(b);
      worst = std::max(worst, std::abs(m.x + 2.0 * m.y + m.z));
      worst = std::max(worst, std::abs(m.f_coef + m.g_coef - 8.0 * std::norm(b)));
    }
    detail = "1000 beta, |beta| <= 1";
    return worst;
  }));

  rows.push_back(check("4x4 tensor on real beta vs 3x3 tensor", 1e-10, [&](std::string& detail) {
    double worst = 0.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const Complex a = random_disk(rng, 2.0);
      const Complex b(u(rng), 0.0);
      const MetricTensor g4 = cs_metric(a, b);
      worst = std::max(worst, max_abs_diff(g4.restricted({0, 1, 2}).entries(),
                                           cs_metric_real_beta(a).entries()));
    }
    detail = "50 points";
    return worst;
  }));

  rows.push_back(check("4x4 tensor vs finite-difference metric", 1e-4, [&](std::string& detail) {
    double worst = 0.0;
    Complex worst_a, worst_b;
    for (int k = 0; k < 10; ++k) {
      const Complex a = random_disk(rng, 2.0), b = random_disk(rng, 1.0);
      const double d = max_abs_diff(cs_metric(a, b).entries(),
                                    finite_difference_metric(a, b, 1e-3).entries());
      if (d > worst) {
        worst = d;
        worst_a = a;
        worst_b = b;
      }
    }
    detail = "10 points; worst at alpha=" + format_complex(worst_a) + " beta=" + format_complex(worst_b);
    return worst;
  }));

  rows.push_back(check("connection anti-Hermiticity", 1e-6, [&](std::string& detail) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Complex a = random_disk(rng, 1.0), b = random_disk(rng, 0.5);
      const double d = with_truncation(policy, 1.0, 1.0, [&](const OperatorSet& ops) {
        return connection_at(a, b, kDefaultConnectionStep, ops).anti_hermitian_defect();
      });
      worst = std::max(worst, d);
    }
    detail = "3 points";
    return worst;
  }));

  rows.push_back(check("holonomy unitarity (circle r=0.2, 400 steps)", 1e-6, [&](std::string& detail) {
    // Small alpha keeps the frame in the low levels; the tail guard certifies it.
    TruncationPolicy small = policy;
    small.target_dim = 32;
    const LoopPath loop = LoopPath::circle({0.0, 0.0}, 0, 1, 0.2, 400);
    const HolonomyResult h = with_truncation(small, 1.0, 1.0, [&](const OperatorSet& ops) {
      return holonomy(loop, ops, small.guard());
    });
    detail = std::to_string(h.steps) + " segments";
    return h.unitarity_defect;
  }));

  return rows;
}

} // namespace fockgeom::cli
