#ifndef WSSPEC_CLI_EXPR_HPP
#define WSSPEC_CLI_EXPR_HPP

#include <complex>
#include <string_view>
#include <vector>

namespace wsspec::cli {

/// a + b * eps.
struct Affine {
  std::complex<double> constant{};
  std::complex<double> slope{};

  bool uses_placeholder() const { return slope != std::complex<double>(0.0); }
  std::complex<double> at(std::complex<double> eps) const {
    return constant + slope * eps;
  }
};

/// Parses numbers, `i`, the placeholder `eps`, + - * / and parentheses.
/// Products of two eps-dependent factors and division by one are rejected.
/// Throws std::invalid_argument on malformed input.
Affine parse_affine(std::string_view text);

/// Comma-separated list of affine expressions.
std::vector<Affine> parse_affine_list(std::string_view text);

/// parse_affine without the placeholder.
std::complex<double> parse_complex(std::string_view text);

} // namespace wsspec::cli

#endif
