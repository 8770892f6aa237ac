#include "wsspec/param_io.hpp"

#include "wsspec/report_io.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace wsspec {

namespace {

constexpr std::array<std::string_view, 10> kKeys = {
    "variant", "V0R", "V0I", "alpha", "alphaI",
    "R0",      "q",   "C",   "hbar",  "mass"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

double parse_double(std::string_view token, std::string_view what) {
  token = trim(token);
  double value = 0.0;
  const auto *begin = token.data();
  const auto *end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (token.empty() || ec != std::errc{} || ptr != end)
    throw std::invalid_argument("invalid number for " + std::string(what) +
                                ": '" + std::string(token) + "'");
  return value;
}

KeyValueMap parse_key_values(std::string_view text) {
  KeyValueMap kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#')
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": empty key");
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument("duplicate key '" + key + "'");
  }
  return kv;
}

bool is_potential_key(std::string_view key) {
  for (auto k : kKeys)
    if (k == key)
      return true;
  return false;
}

ParameterSet apply_potential_keys(const KeyValueMap &kv, ParameterSet base) {
  auto &p = base.potential;
  for (const auto &[key, value] : kv) {
    if (key == "variant") {
      p.variant = parse_variant(value);
      base.has_variant = true;
    } else if (key == "V0R") {
      p.V0R = parse_double(value, key);
    } else if (key == "V0I") {
      p.V0I = parse_double(value, key);
    } else if (key == "alpha") {
      p.alpha = parse_double(value, key);
    } else if (key == "alphaI") {
      p.alphaI = parse_double(value, key);
    } else if (key == "R0") {
      p.R0 = parse_double(value, key);
    } else if (key == "q") {
      p.q_override = parse_double(value, key);
    } else if (key == "C") {
      p.C_override = parse_double(value, key);
    } else if (key == "hbar") {
      base.units.hbar = parse_double(value, key);
    } else if (key == "mass") {
      base.units.mass = parse_double(value, key);
    }
  }
  return base;
}

ParameterSet parse_parameter_set(std::string_view text) {
  const auto kv = parse_key_values(text);
  for (const auto &entry : kv)
    if (!is_potential_key(entry.first))
      throw std::invalid_argument("unknown key '" + entry.first + "'");
  return apply_potential_keys(kv);
}

std::string serialize_parameter_set(const ParameterSet &params) {
  const auto &p = params.potential;
  std::ostringstream out;
  out << "variant=" << to_string(p.variant) << '\n'
      << "V0R=" << format_number(p.V0R) << '\n'
      << "V0I=" << format_number(p.V0I) << '\n'
      << "alpha=" << format_number(p.alpha) << '\n'
      << "alphaI=" << format_number(p.alphaI) << '\n'
      << "R0=" << format_number(p.R0) << '\n';
  if (p.q_override)
    out << "q=" << format_number(*p.q_override) << '\n';
  if (p.C_override)
    out << "C=" << format_number(*p.C_override) << '\n';
  out << "hbar=" << format_number(params.units.hbar) << '\n'
      << "mass=" << format_number(params.units.mass) << '\n';
  return out.str();
}

} // namespace wsspec
