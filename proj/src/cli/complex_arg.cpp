#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "fockgeom/cli.hpp"

namespace fockgeom::cli {

namespace {

// Parses a full double from s; false on leftovers.
bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first; // from_chars rejects a leading '+'
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

} // namespace

Complex parse_complex(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Complex {
    throw InvalidArgument("cannot parse complex number '" + original +
                          "' (expected RE+IMi, e.g. 0.5-0.3i)");
  };
  if (text.empty()) return fail();
  for (char ch : text)
    if (std::isspace(static_cast<unsigned char>(ch))) return fail();

  double re = 0.0, im = 0.0;
  if (text.back() != 'i') {
    if (!parse_double(text, re) || !std::isfinite(re)) return fail();
    return {re, 0.0};
  }
  text.remove_suffix(1);
  // Split at the last sign that is not at the start and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string_view re_part = split == std::string_view::npos ? std::string_view{} : text.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? text : text.substr(split);
  if (!re_part.empty() && !parse_double(re_part, re)) return fail();
  if (im_part == "+" || im_part.empty()) im = 1.0;
  else if (im_part == "-") im = -1.0;
  else if (!parse_double(im_part, im)) return fail();
  if (!std::isfinite(re) || !std::isfinite(im)) return fail();
  return {re, im};
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  const std::string im = format_double(z.imag());
  if (im.front() != '-') s += '+';
  return s + im + "i";
}

} // namespace fockgeom::cli
