#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fockgeom/cli.hpp"

namespace fockgeom::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits into lines and strips '#' comments; keeps 1-based line numbers.
std::vector<std::pair<int, std::string>> content_lines(std::string_view content) {
  std::vector<std::pair<int, std::string>> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.emplace_back(number, std::string(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

bool read_number(std::istringstream& in, double& x) {
  std::string tok;
  if (!(in >> tok)) return false;
  try {
    std::size_t used = 0;
    x = std::stod(tok, &used);
    return used == tok.size() && std::isfinite(x);
  } catch (const std::exception&) {
    return false;
  }
}

AxisRange axis_from_json(const nlohmann::json& j, const std::string& source, int line,
                         const std::string& key) {
  AxisRange ax;
  try {
    if (j.is_array()) {
      if (j.size() != 3) throw ParseError(source, line, key + ": expected [min, max, count]");
      ax.min = j.at(0).get<double>();
      ax.max = j.at(1).get<double>();
      ax.count = j.at(2).get<int>();
    } else if (j.is_object()) {
      for (const auto& [k, v] : j.items())
        if (k != "min" && k != "max" && k != "count")
          throw ParseError(source, line, key + ": unknown field '" + k + "'");
      ax.min = j.at("min").get<double>();
      ax.max = j.at("max").get<double>();
      ax.count = j.at("count").get<int>();
    } else if (j.is_number()) {
      ax.min = ax.max = j.get<double>();
      ax.count = 1;
    } else {
      throw ParseError(source, line, key + ": expected an object, array or number");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, line, key + ": " + e.what());
  }
  return ax;
}

int line_of_offset(std::string_view content, std::size_t offset) {
  offset = std::min(offset, content.size());
  int line = 1;
  for (std::size_t k = 0; k < offset; ++k)
    if (content[k] == '\n') ++line;
  return line;
}

SweepSpec parse_sweep_json(std::string_view content, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, line_of_offset(content, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!j.is_object()) throw ParseError(source, 1, "sweep spec must be a JSON object");
  SweepSpec spec;
  for (const auto& [key, value] : j.items()) {
    // nlohmann does not keep positions; report the line where the key appears.
    const auto where = content.find("\"" + key + "\"");
    const int line = where == std::string_view::npos ? 1 : line_of_offset(content, where);
    try {
      if (key == "alpha_re") spec.alpha_re = axis_from_json(value, source, line, key);
      else if (key == "alpha_im") spec.alpha_im = axis_from_json(value, source, line, key);
      else if (key == "beta_re") spec.beta_re = axis_from_json(value, source, line, key);
      else if (key == "beta_im") spec.beta_im = axis_from_json(value, source, line, key);
      else if (key == "dim") spec.dim = value.get<int>();
      else if (key == "hbar") spec.hbar = value.get<double>();
      else if (key == "omega") spec.omega = value.get<double>();
      else throw ParseError(source, line, "unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line, key + ": " + e.what());
    }
  }
  return spec;
}

} // namespace

LoopPath parse_loop(std::string_view content, const std::string& source) {
  std::vector<LoopPoint> samples;
  std::vector<int> numbers;
  for (const auto& [number, text] : content_lines(content)) {
    std::istringstream in(text);
    std::array<double, 4> x{};
    for (double& v : x)
      if (!read_number(in, v))
        throw ParseError(source, number, "expected four numbers 'a_re a_im b_re b_im'");
    std::string extra;
    if (in >> extra) throw ParseError(source, number, "unexpected trailing text '" + extra + "'");
    if (!samples.empty()) {
      const LoopPoint& p = samples.back();
      const std::array<double, 4> q{p.alpha.real(), p.alpha.imag(), p.beta.real(), p.beta.imag()};
      for (int i = 0; i < 4; ++i) {
        if (std::abs(x[i] - q[i]) > LoopPath::kMaxStep) {
          std::ostringstream msg;
          msg << "step from the previous sample is " << std::abs(x[i] - q[i])
              << " in coordinate " << i << " (limit " << LoopPath::kMaxStep << ")";
          throw ParseError(source, number, msg.str());
        }
      }
    }
    samples.push_back({Complex(x[0], x[1]), Complex(x[2], x[3])});
    numbers.push_back(number);
  }
  if (samples.size() < 3)
    throw ParseError(source, numbers.empty() ? 1 : numbers.back(), "a loop needs at least 3 samples");
  const LoopPoint& a = samples.front();
  const LoopPoint& b = samples.back();
  if (std::abs(a.alpha - b.alpha) > LoopPath::kClosureTolerance ||
      std::abs(a.beta - b.beta) > LoopPath::kClosureTolerance)
    throw ParseError(source, numbers.back(), "open loop: last sample differs from the first");
  return LoopPath(std::move(samples), true);
}

LoopPath load_loop(const std::string& path) { return parse_loop(read_file(path), path); }

SweepSpec parse_sweep_spec(std::string_view content, const std::string& source) {
  const std::string_view body = trim(content);
  if (!body.empty() && body.front() == '{') return parse_sweep_json(content, source);

  SweepSpec spec;
  for (const auto& [number, text] : content_lines(content)) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError(source, number, "expected 'key: value'");
    const std::string key(trim(std::string_view(text).substr(0, colon)));
    std::istringstream in(text.substr(colon + 1));
    auto number_or_fail = [&, number = number] {
      double v = 0.0;
      if (!read_number(in, v)) throw ParseError(source, number, key + ": expected a number");
      return v;
    };
    auto integer_or_fail = [&, number = number] {
      const double v = number_or_fail();
      if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ParseError(source, number, key + ": expected an integer");
      return static_cast<int>(v);
    };
    if (key == "alpha_re" || key == "alpha_im" || key == "beta_re" || key == "beta_im") {
      AxisRange ax;
      ax.min = number_or_fail();
      ax.max = number_or_fail();
      ax.count = integer_or_fail();
      if (key == "alpha_re") spec.alpha_re = ax;
      else if (key == "alpha_im") spec.alpha_im = ax;
      else if (key == "beta_re") spec.beta_re = ax;
      else spec.beta_im = ax;
    } else if (key == "dim") {
      spec.dim = integer_or_fail();
    } else if (key == "hbar") {
      spec.hbar = number_or_fail();
    } else if (key == "omega") {
      spec.omega = number_or_fail();
    } else {
      throw ParseError(source, number, "unknown key '" + key + "'");
    }
    std::string extra;
    if (in >> extra) throw ParseError(source, number, "unexpected trailing text '" + extra + "'");
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  return parse_sweep_spec(read_file(path), path);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_double(r.alpha.real()) << ',' << format_double(r.alpha.imag()) << ','
        << format_double(r.beta.real()) << ',' << format_double(r.beta.imag()) << ','
        << format_double(r.det) << ',' << format_double(r.min_eig) << ',' << to_string(r.status)
        << '\n';
  }
}

} // namespace fockgeom::cli
