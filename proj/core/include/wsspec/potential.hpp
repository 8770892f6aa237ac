#ifndef WSSPEC_POTENTIAL_HPP
#define WSSPEC_POTENTIAL_HPP

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wsspec {

using cplx = std::complex<double>;

/// Which continuation of the generalized Woods-Saxon well is in use.
///  - Hermitian:    real V0, real steepness alpha.
///  - PTSymmetric:  alpha -> i*alphaI, V0 real.
///  - NonPTComplex: V0 -> V0R + i*V0I, alpha real.
enum class Variant { Hermitian, PTSymmetric, NonPTComplex };

std::string_view to_string(Variant v);
/// Accepts hermitian|pt|nonpt as well as the enumerator names.
Variant parse_variant(std::string_view text);

struct UnitsConfig {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const;
  bool operator==(const UnitsConfig &) const = default;
};

/// Physical parameters of
///   V(x) = -V0 / (1 + q e^{2 alpha x}) - C e^{2 alpha x} / (1 + q e^{2 alpha x})^2
/// q and C are derived unless explicitly overridden:
///   q = exp(-2 alpha R0)             (Hermitian, NonPTComplex; PT: 1)
///   C = 2 alpha V0R q                (alpha -> alphaI for PT)
struct PotentialSpec {
  Variant variant = Variant::Hermitian;
  double V0R = 1.0;
  double V0I = 0.0;
  double alpha = 0.5;
  double alphaI = 0.5;
  double R0 = 0.0;
  std::optional<double> q_override;
  std::optional<double> C_override;

  double q() const;
  double C() const;
  /// alpha for the real-exponent variants, alphaI for PT.
  double steepness() const;
  cplx depth() const { return {V0R, V0I}; }

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;

  bool operator==(const PotentialSpec &) const = default;
};

struct DimensionlessParams {
  cplx epsilon{0.0, 0.0};
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double q = 1.0;
};

/// Level-dependent auxiliaries; principal square roots throughout.
struct SpectralAux {
  cplx b;     // 1 + 2n + sqrt(1 - 4 gamma/q)
  cplx nu;    // 1 + sqrt(1 - 4 gamma/q)
  cplx mu;    // nu / 2
  cplx kappa; // 1 + sqrt(1 + 4 gamma/q)
};

SpectralAux spectral_aux(int n, double gamma, double q);

/// Complex potential value at x. Real for the Hermitian variant.
/// Throws PoleProximityError when |1 + q e^{2 alpha x}| < 1e-300.
cplx evaluate_potential(const PotentialSpec &spec, double x);

/// The PT potential written out in real trigonometric form. Only valid for
/// the PTSymmetric variant; used to cross-check evaluate_potential.
cplx evaluate_pt_expanded(const PotentialSpec &spec, double x);

/// |1 + q e^{2 alpha x}| (alpha -> i alphaI for PT): distance from the pole.
double pole_clearance(const PotentialSpec &spec, double x);

/// max |conj(V(-x)) - V(x)| over the grid.
double pt_symmetry_defect(const PotentialSpec &spec,
                          std::span<const double> grid);

/// Uniform grid on [-half_width, half_width].
std::vector<double> symmetric_grid(double half_width, std::size_t points);

DimensionlessParams to_dimensionless(const PotentialSpec &spec,
                                     const UnitsConfig &units, cplx energy);
cplx from_dimensionless(cplx epsilon, const PotentialSpec &spec,
                        const UnitsConfig &units);

/// 2 hbar^2 alpha^2 / m, the factor linking E and epsilon (E = -scale * eps).
double energy_scale(const PotentialSpec &spec, const UnitsConfig &units);

} // namespace wsspec

#endif
