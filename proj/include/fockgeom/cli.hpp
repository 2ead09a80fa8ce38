#pragma once

// Command-line harness: argument and file parsing, CSV emission, the
// invariant suite behind `verify`, and the subcommand dispatcher.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fockgeom/fock_core.hpp"
#include "fockgeom/geometry.hpp"
#include "fockgeom/holonomy.hpp"

namespace fockgeom::cli {

/// "RE+IMi", "RE-IMi", "RE", "IMi" with no spaces (e.g. 0.5-0.3i, 2i, -1e-3+4i).
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

/// %.17g; round-trips every double.
std::string format_double(double x);

/// Loop file: one sample `a_re a_im b_re b_im` per line, '#' comments and
/// blank lines ignored. The path must return to its first sample.
LoopPath parse_loop(std::string_view content, const std::string& source);
LoopPath load_loop(const std::string& path);

/// Sweep spec as `key: value` lines (axes take `min max count`) or, when
/// the first non-blank character is '{', as a JSON object with the same keys
/// (axes as {"min":..,"max":..,"count":..} or [min, max, count]).
SweepSpec parse_sweep_spec(std::string_view content, const std::string& source);
SweepSpec load_sweep_spec(const std::string& path);

inline constexpr const char* kSweepCsvHeader = "a_re,a_im,b_re,b_im,det,min_eig,status";
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// One line of the `verify` table.
struct ReportRow {
  std::string quantity;
  double value = 0.0;     ///< worst observed defect
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int dim = 128;
  std::uint64_t seed = 0;
};

std::vector<ReportRow> run_verify(const VerifyOptions& options);

/// Exit codes: 0 success, 1 validation error or usage, 2 numerical guard
/// failure (including a failed verify check).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

} // namespace fockgeom::cli
