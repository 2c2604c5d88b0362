#include "cli_util.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "gps/io.hpp"

namespace gps::cli {

namespace {

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<double> parse_ratio_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw ConfigError("ratio range must be 'a:step:b', got '" + text + "'");
  }
  const double a = parse_double(parts[0]);
  const double step = parse_double(parts[1]);
  const double b = parse_double(parts[2]);
  if (!(step > 0.0)) throw ConfigError("ratio range step must be positive");
  if (a > b) throw ConfigError("empty ratio range '" + text + "'");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double raw = a + k * step;
    const double snapped = std::round(raw * 1e12) / 1e12;
    if (snapped > b + step * 1e-9) break;
    out.push_back(snapped);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (!part.empty()) out.push_back(parse_double(part));
  }
  if (out.empty()) throw ConfigError("empty list: '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    const int i = static_cast<int>(std::llround(v));
    if (static_cast<double>(i) != v) {
      throw ConfigError("expected integers: '" + text + "'");
    }
    out.push_back(i);
  }
  return out;
}

std::vector<solvers::Algorithm> parse_algorithms(const std::string& text) {
  std::vector<solvers::Algorithm> out;
  for (const auto& part : split(text, ',')) {
    if (!part.empty()) out.push_back(solvers::algorithm_from_name(part));
  }
  if (out.empty()) throw ConfigError("no algorithms given");
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += io::format_double(v[i]);
  }
  return s;
}

}  // namespace gps::cli
