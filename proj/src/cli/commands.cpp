#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fockgeom/cli.hpp"
#include "fockgeom/overlaps.hpp"
#include "fockgeom/uncertainty.hpp"

namespace fockgeom::cli {

namespace {

using nlohmann::json;

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json real_matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json complex_matrix_json(const Matrix2c& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back({complex_json(m(i, 0)), complex_json(m(i, 1))});
  return rows;
}

void print_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %16.12g", m(i, j) + 0.0); // no "-0"
      os << buf;
    }
    os << '\n';
  }
}

// Parses a complex option, mapping CLI input problems onto validation errors.
struct ComplexOption {
  std::string text = "0";
  Complex value() const { return parse_complex(text); }
};

TruncationPolicy policy_for_dim(int dim) {
  TruncationPolicy p;
  if (dim < p.margin + 2) throw InvalidDimension("--dim must be at least " + std::to_string(p.margin + 2));
  p.target_dim = dim - p.margin;
  p.max_dim = std::max(p.max_dim, 4 * dim);
  return p;
}

int resolve_threads(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FOCKGEOM_THREADS"); env && *env) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(env, &used);
      if (used == std::string(env).size()) return n;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("FOCKGEOM_THREADS is not an integer: '") + env + "'");
  }
  return 0;
}

struct Settings {
  bool json = false;
  std::string out_path;

  // overlap / variances / metric
  ComplexOption alpha, beta, alpha2, beta2;
  bool oracle = false;
  int dim = 192;
  double hbar = 1.0, omega = 1.0;
  bool full = false;
  bool fd = false;
  double step = 1e-3;

  // det-sweep
  std::string spec_path;
  std::optional<int> threads;
  std::string source = "closed";

  // holonomy
  std::string loop_path;

  // verify
  std::uint64_t seed = 0;
};

int cmd_overlap(const Settings& s, std::ostream& os) {
  const Complex a = s.alpha.value(), b = s.beta.value();
  const Complex ap = s.alpha2.value(), bp = s.beta2.value();
  const OverlapResult r = cs_overlap(a, b, ap, bp);
  std::optional<Complex> oracle;
  if (s.oracle)
    oracle = with_truncation(policy_for_dim(s.dim), 1.0, 1.0, [&](const OperatorSet& ops) {
      return fock_cs_overlap(a, b, ap, bp, ops);
    });
  if (s.json) {
    json j{{"value", complex_json(r.value)},
           {"abs", std::abs(r.value)},
           {"coherent_factor", complex_json(r.coherent_factor)},
           {"squeezed_factor", complex_json(r.squeezed_factor)},
           {"exponent_correction", complex_json(r.exponent_correction)}};
    if (oracle) {
      j["fock_oracle"] = complex_json(*oracle);
      j["relative_error"] = std::abs(r.value - *oracle) / std::abs(*oracle);
    }
    os << j.dump(2) << '\n';
    return 0;
  }
  os << "overlap             " << format_complex(r.value) << '\n'
     << "|overlap|           " << format_double(std::abs(r.value)) << '\n'
     << "coherent factor     " << format_complex(r.coherent_factor) << '\n'
     << "squeezed factor     " << format_complex(r.squeezed_factor) << '\n'
     << "exponent correction " << format_complex(r.exponent_correction) << '\n';
  if (oracle) {
    os << "Fock oracle         " << format_complex(*oracle) << '\n'
       << "relative error      " << format_double(std::abs(r.value - *oracle) / std::abs(*oracle)) << '\n';
  }
  return 0;
}

int cmd_variances(const Settings& s, std::ostream& os) {
  const Complex a = s.alpha.value(), b = s.beta.value();
  require_guard_range(a, b, "variances");
  const VariancePair v = variances_closed(b, s.hbar, s.omega);
  const double bound = 0.25 * s.hbar * s.hbar;
  const bool minimal = is_minimal_uncertainty(b, 1e-12);
  std::optional<VariancePair> num;
  if (s.oracle) {
    const TruncationPolicy p = policy_for_dim(s.dim);
    num = with_truncation(p, s.hbar, s.omega, [&](const OperatorSet& ops) {
      return numeric_variances(cs_state(a, b, ops, p.guard()), ops, p.guard());
    });
  }
  if (s.json) {
    json j{{"var_q", v.var_q}, {"var_p", v.var_p}, {"product", v.product()},
           {"closed_form_product", uncertainty_product(b, s.hbar)},
           {"lower_bound", bound}, {"minimal", minimal}};
    if (num) j["fock_oracle"] = {{"var_q", num->var_q}, {"var_p", num->var_p}, {"product", num->product()}};
    os << j.dump(2) << '\n';
    return 0;
  }
  os << "var_q        " << format_double(v.var_q) << '\n'
     << "var_p        " << format_double(v.var_p) << '\n'
     << "product      " << format_double(v.product()) << '\n'
     << "(hbar/2)^2   " << format_double(bound) << '\n'
     << "minimal      " << (minimal ? "yes" : "no") << '\n';
  if (num) {
    os << "Fock var_q   " << format_double(num->var_q) << '\n'
       << "Fock var_p   " << format_double(num->var_p) << '\n'
       << "Fock product " << format_double(num->product()) << '\n';
  }
  return 0;
}

int cmd_metric(const Settings& s, std::ostream& os) {
  const Complex a = s.alpha.value(), b = s.beta.value();
  require_guard_range(a, b, "metric");
  const bool real_beta = b.imag() == 0.0 && !s.full;

  std::vector<int> coords{0, 1, 2, 3};
  std::optional<MetricTensor> g;
  if (real_beta) {
    g = cs_metric_real_beta(a);
    coords = {0, 1, 2};
  } else {
    g = cs_metric(a, b);
  }
  const double det = metric_determinant(*g);
  std::optional<MetricTensor> fd;
  if (s.fd) fd = finite_difference_metric(a, b, s.step).restricted(coords);

  static const char* names[] = {"alpha_1", "alpha_2", "beta_1", "beta_2"};
  if (s.json) {
    json names_json = json::array();
    for (int c : coords) names_json.push_back(names[c]);
    json j{{"coordinates", names_json},
           {"tensor", real_matrix_json(g->entries())},
           {"det", det},
           {"min_eig", g->min_eigenvalue()}};
    if (g->order() == 4) j["block_det"] = block_determinant(*g);
    if (fd) {
      j["finite_difference"] = real_matrix_json(fd->entries());
      j["max_abs_difference"] = (g->entries() - fd->entries()).cwiseAbs().maxCoeff();
    }
    os << j.dump(2) << '\n';
    return 0;
  }
  os << "coordinates:";
  for (int c : coords) os << ' ' << names[c];
  os << '\n' << "tensor:\n";
  print_matrix(os, g->entries());
  os << "det: " << short_num(det) << '\n';
  if (g->order() == 4) os << "block det: " << short_num(block_determinant(*g)) << '\n';
  os << "min_eig: " << short_num(g->min_eigenvalue()) << '\n';
  if (fd) {
    os << "finite-difference tensor (step " << short_num(s.step) << "):\n";
    print_matrix(os, fd->entries());
    os << "finite-difference det: " << short_num(metric_determinant(*fd)) << '\n'
       << "max |closed - finite difference|: "
       << short_num((g->entries() - fd->entries()).cwiseAbs().maxCoeff()) << '\n';
  }
  return 0;
}

int cmd_det_sweep(const Settings& s, std::ostream& os, std::ostream& err) {
  const SweepSpec spec = load_sweep_spec(s.spec_path);
  SweepOptions opt;
  opt.threads = resolve_threads(s.threads);
  if (s.source == "closed") opt.source = MetricSource::closed_form;
  else if (s.source == "fd") opt.source = MetricSource::finite_difference;
  else if (s.source == "fock") opt.source = MetricSource::fock;
  else throw InvalidArgument("--source must be closed, fd or fock");
  opt.fd_step = s.step;

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SweepRow> rows = determinant_sweep(spec, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_sweep_csv(os, rows);

  std::size_t not_pd = 0, errors = 0;
  for (const SweepRow& r : rows) {
    if (r.status == SweepStatus::not_positive_definite) ++not_pd;
    if (r.status == SweepStatus::error) ++errors;
  }
  err << "det-sweep: " << rows.size() << " points, " << not_pd << " not positive-definite, "
      << errors << " errors, " << short_num(secs) << " s\n";
  for (const SweepRow& r : rows)
    if (r.status == SweepStatus::error) {
      err << "  first error at row " << r.index << ": " << r.message << '\n';
      break;
    }
  return errors > 0 ? 2 : 0;
}

int cmd_holonomy(const Settings& s, std::ostream& os) {
  const LoopPath loop = load_loop(s.loop_path);
  const TruncationPolicy p = policy_for_dim(s.dim);
  int dim_used = 0;
  const HolonomyResult h = with_truncation(p, 1.0, 1.0, [&](const OperatorSet& ops) {
    dim_used = ops.dim;
    return holonomy(loop, ops, p.guard());
  });
  if (s.json) {
    json j{{"gate", complex_matrix_json(h.gate)},
           {"unitarity_defect", h.unitarity_defect},
           {"steps", h.steps},
           {"dim", dim_used}};
    os << j.dump(2) << '\n';
    return 0;
  }
  os << "gate:\n";
  for (int i = 0; i < 2; ++i)
    os << "  " << format_complex(h.gate(i, 0)) << "  " << format_complex(h.gate(i, 1)) << '\n';
  os << "unitarity defect: " << format_double(h.unitarity_defect) << '\n'
     << "steps: " << h.steps << '\n'
     << "dim: " << dim_used << '\n';
  return 0;
}

int cmd_verify(const Settings& s, std::ostream& os) {
  VerifyOptions v;
  v.dim = s.dim;
  v.seed = s.seed;
  const std::vector<ReportRow> rows = run_verify(v);
  bool all = true;
  for (const ReportRow& r : rows) all = all && r.passed;
  if (s.json) {
    json j = json::array();
    for (const ReportRow& r : rows)
      j.push_back({{"quantity", r.quantity}, {"value", r.value}, {"tolerance", r.tolerance},
                   {"status", r.passed ? "pass" : "fail"}, {"detail", r.detail}});
    os << json{{"checks", j}, {"all_passed", all}}.dump(2) << '\n';
  } else {
    for (const ReportRow& r : rows) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-4s  %-48s %12.3e  (tol %.0e)", r.passed ? "PASS" : "FAIL",
                    r.quantity.c_str(), r.value, r.tolerance);
      os << buf;
      if (!r.detail.empty()) os << "  " << r.detail;
      os << '\n';
    }
    os << (all ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all ? 0 : 2;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent-squeezed state geometry toolkit", "fockgeom"};
  app.require_subcommand(1);
  Settings s;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", s.json, "Emit JSON");
    sub->add_option("--out", s.out_path, "Write results to this file instead of stdout");
  };
  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--alpha", s.alpha.text, "Displacement, RE+IMi")->capture_default_str();
    sub->add_option("--beta", s.beta.text, "Squeezing, RE+IMi")->capture_default_str();
  };

  CLI::App* overlap = app.add_subcommand("overlap", "Inner product <alpha,beta|alpha',beta'>");
  add_point(overlap);
  overlap->add_option("--alpha2", s.alpha2.text, "Second displacement")->capture_default_str();
  overlap->add_option("--beta2", s.beta2.text, "Second squeezing")->capture_default_str();
  overlap->add_flag("--oracle", s.oracle, "Compare with truncated Fock states");
  overlap->add_option("--dim", s.dim, "Oracle working dimension")->capture_default_str();
  add_common(overlap);

  CLI::App* variances = app.add_subcommand("variances", "Quadrature variances");
  add_point(variances);
  variances->add_option("--hbar", s.hbar)->capture_default_str();
  variances->add_option("--omega", s.omega)->capture_default_str();
  variances->add_flag("--oracle", s.oracle, "Also evaluate on truncated Fock states");
  variances->add_option("--dim", s.dim, "Oracle working dimension")->capture_default_str();
  add_common(variances);

  CLI::App* metric = app.add_subcommand("metric", "Induced metric tensor and determinant");
  add_point(metric);
  metric->add_flag("--full", s.full, "Always print the 4x4 tensor");
  metric->add_flag("--fd", s.fd, "Also print the finite-difference estimate");
  metric->add_option("--step", s.step, "Finite-difference step")->capture_default_str();
  add_common(metric);

  CLI::App* sweep = app.add_subcommand("det-sweep", "Determinant sweep over a parameter grid");
  sweep->add_option("--spec", s.spec_path, "Sweep specification file")->required();
  sweep->add_option("--threads", s.threads, "Worker threads (default: FOCKGEOM_THREADS, then all cores)");
  sweep->add_option("--source", s.source, "closed, fd or fock")->capture_default_str();
  sweep->add_option("--step", s.step, "Finite-difference step for fd/fock")->capture_default_str();
  sweep->add_option("--out", s.out_path, "CSV output file (default stdout)");

  CLI::App* hol = app.add_subcommand("holonomy", "Holonomy gate of a closed loop");
  hol->add_option("--loop", s.loop_path, "Loop file")->required();
  hol->add_option("--dim", s.dim, "Starting working dimension (default 64)");
  add_common(hol);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--dim", s.dim, "Oracle working dimension (default 128)");
  verify->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  add_common(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    CLI::App* sub = nullptr;
    for (CLI::App* c : app.get_subcommands()) sub = c;
    err << (sub ? sub->help() : app.help());
    return 1;
  }

  // --dim defaults differ per command: oracle overlaps start at 192, the
  // invariant suite at 128, and loops (which rebuild the frame at every
  // segment) at 64; the tail guards raise any of them on demand.
  if (verify->parsed() && verify->count("--dim") == 0) s.dim = 128;
  if (hol->parsed() && hol->count("--dim") == 0) s.dim = 64;

  std::ostringstream buffer;
  int code = 0;
  try {
    if (overlap->parsed()) code = cmd_overlap(s, buffer);
    else if (variances->parsed()) code = cmd_variances(s, buffer);
    else if (metric->parsed()) code = cmd_metric(s, buffer);
    else if (sweep->parsed()) code = cmd_det_sweep(s, buffer, err);
    else if (hol->parsed()) code = cmd_holonomy(s, buffer);
    else if (verify->parsed()) code = cmd_verify(s, buffer);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical_guard_failure(e) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (s.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(s.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << s.out_path << "'\n";
      return 1;
    }
    f << buffer.str();
    if (!f) {
      err << "error: write to '" << s.out_path << "' failed\n";
      return 1;
    }
  }
  return code;
}

int run_command(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_command(args, std::cout, std::cerr);
}

} // namespace fockgeom::cli
