#include "wsspec/potential.hpp"

#include "wsspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsspec {

namespace {

constexpr double kPoleGuard = 1e-300;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

std::string_view to_string(Variant v) {
  switch (v) {
  case Variant::Hermitian:
    return "hermitian";
  case Variant::PTSymmetric:
    return "pt";
  case Variant::NonPTComplex:
    return "nonpt";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "hermitian" || text == "Hermitian")
    return Variant::Hermitian;
  if (text == "pt" || text == "PTSymmetric" || text == "pt-symmetric")
    return Variant::PTSymmetric;
  if (text == "nonpt" || text == "NonPTComplex" || text == "non-pt")
    return Variant::NonPTComplex;
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

void UnitsConfig::validate() const {
  if (!finite_positive(hbar))
    throw std::invalid_argument("hbar must be finite and > 0");
  if (!finite_positive(mass))
    throw std::invalid_argument("mass must be finite and > 0");
}

double PotentialSpec::steepness() const {
  return variant == Variant::PTSymmetric ? alphaI : alpha;
}

double PotentialSpec::q() const {
  if (q_override)
    return *q_override;
  if (variant == Variant::PTSymmetric)
    return 1.0;
  return std::exp(-2.0 * alpha * R0);
}

double PotentialSpec::C() const {
  if (C_override)
    return *C_override;
  return 2.0 * steepness() * V0R * q();
}

void PotentialSpec::validate() const {
  if (!std::isfinite(V0R) || !std::isfinite(V0I))
    throw std::invalid_argument("V0R and V0I must be finite");
  if (!finite_positive(steepness()))
    throw std::invalid_argument(variant == Variant::PTSymmetric
                                    ? "alphaI must be finite and > 0"
                                    : "alpha must be finite and > 0");
  if (!std::isfinite(R0) || R0 < 0.0)
    throw std::invalid_argument("R0 must be finite and >= 0");
  if (!finite_positive(q()))
    throw std::invalid_argument("q must be finite and > 0");
  if (!std::isfinite(C()))
    throw std::invalid_argument("C must be finite");
  if (variant != Variant::NonPTComplex && V0I != 0.0)
    throw std::invalid_argument(
        "V0I must be 0 unless the variant is nonpt");
}

SpectralAux spectral_aux(int n, double gamma, double q) {
  const cplx root_minus = std::sqrt(cplx(1.0 - 4.0 * gamma / q, 0.0));
  const cplx root_plus = std::sqrt(cplx(1.0 + 4.0 * gamma / q, 0.0));
  SpectralAux aux;
  aux.nu = 1.0 + root_minus;
  aux.b = aux.nu + 2.0 * n;
  aux.mu = aux.nu / 2.0;
  aux.kappa = 1.0 + root_plus;
  return aux;
}

cplx evaluate_potential(const PotentialSpec &spec, double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("potential evaluated at non-finite x");
  const double q = spec.q();
  const double C = spec.C();
  const cplx V0 = spec.depth();

  // w = e^{2 alpha x} (unit-modulus for PT), z = q w.
  cplx w;
  if (spec.variant == Variant::PTSymmetric) {
    const double theta = 2.0 * spec.alphaI * x;
    w = cplx(std::cos(theta), std::sin(theta));
  } else {
    w = cplx(std::exp(2.0 * spec.alpha * x), 0.0);
  }
  const cplx z = q * w;
  const cplx den = 1.0 + z;
  if (std::isfinite(z.real()) && std::abs(den) < kPoleGuard)
    throw PoleProximityError("potential pole proximity at x = " +
                             std::to_string(x));

  // For |z| > 1 use w/(1+z)^2 = 1/(q (z + 2 + 1/z)), which stays finite
  // when e^{2 alpha x} overflows.
  cplx well, surface;
  if (std::abs(z) > 1.0) {
    well = std::isinf(z.real()) ? cplx(0.0) : V0 / den;
    surface = std::isinf(z.real()) ? cplx(0.0)
                                   : C / (q * (z + 2.0 + 1.0 / z));
  } else {
    well = V0 / den;
    surface = C * w / (den * den);
  }
  return -well - surface;
}

cplx evaluate_pt_expanded(const PotentialSpec &spec, double x) {
  if (spec.variant != Variant::PTSymmetric)
    throw std::invalid_argument("expanded form exists only for the PT variant");
  const double q = spec.q();
  const double C = spec.C();
  const double V0 = spec.V0R;
  const double c = std::cos(2.0 * spec.alphaI * x);
  const double s = std::sin(2.0 * spec.alphaI * x);
  const double den = 1.0 + q * q + 2.0 * q * c;
  if (std::abs(den) < kPoleGuard)
    throw PoleProximityError("potential pole proximity at x = " +
                             std::to_string(x));
  const cplx well = V0 * cplx(1.0 + q * c, -q * s) / den;
  const cplx surface =
      C * cplx(2.0 * q + (1.0 + q * q) * c, -(q * q - 1.0) * s) / (den * den);
  return -well - surface;
}

double pole_clearance(const PotentialSpec &spec, double x) {
  const double q = spec.q();
  if (spec.variant == Variant::PTSymmetric) {
    const double theta = 2.0 * spec.alphaI * x;
    return std::abs(1.0 + q * cplx(std::cos(theta), std::sin(theta)));
  }
  return 1.0 + q * std::exp(2.0 * spec.alpha * x);
}

double pt_symmetry_defect(const PotentialSpec &spec,
                          std::span<const double> grid) {
  if (grid.empty())
    throw std::invalid_argument("pt_symmetry_defect: empty grid");
  double defect = 0.0;
  for (double x : grid) {
    const cplx diff =
        std::conj(evaluate_potential(spec, -x)) - evaluate_potential(spec, x);
    defect = std::max(defect, std::abs(diff));
  }
  return defect;
}

std::vector<double> symmetric_grid(double half_width, std::size_t points) {
  if (points == 0)
    return {};
  if (points == 1)
    return {0.0};
  std::vector<double> grid(points);
  const double h = 2.0 * half_width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    // Mirror so grid[i] == -grid[points - 1 - i] exactly.
    const std::size_t j = points - 1 - i;
    grid[i] = i <= j ? -half_width + h * static_cast<double>(i)
                     : -grid[j];
  }
  return grid;
}

double energy_scale(const PotentialSpec &spec, const UnitsConfig &units) {
  const double a = spec.steepness();
  return 2.0 * units.hbar * units.hbar * a * a / units.mass;
}

DimensionlessParams to_dimensionless(const PotentialSpec &spec,
                                     const UnitsConfig &units, cplx energy) {
  const double scale = energy_scale(spec, units);
  DimensionlessParams p;
  p.epsilon = -energy / scale;
  p.beta = spec.V0R / scale;
  p.gamma = spec.C() / scale;
  p.delta = spec.V0I / scale;
  p.q = spec.q();
  return p;
}

cplx from_dimensionless(cplx epsilon, const PotentialSpec &spec,
                        const UnitsConfig &units) {
  return -energy_scale(spec, units) * epsilon;
}

} // namespace wsspec
