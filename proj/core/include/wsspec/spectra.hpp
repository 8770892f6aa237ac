#ifndef WSSPEC_SPECTRA_HPP
#define WSSPEC_SPECTRA_HPP

#include "wsspec/nu_engine.hpp"
#include "wsspec/potential.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsspec {

inline constexpr int kMaxLevelIndex = 64;

enum class AdmissibilityReason {
  EpsilonPositive,
  EpsilonNonpositive,
  PaperInequalityPass,
  PaperInequalityFail,
  ComplexSpectrum
};

std::string_view to_string(AdmissibilityReason r);

struct EnergyLevel {
  int n = 0;
  cplx epsilon;
  cplx energy;
  bool admissible = false;
  AdmissibilityReason reason = AdmissibilityReason::EpsilonNonpositive;
  /// Set when the radical under b' has a negative argument.
  bool degenerate_radical = false;
};

/// Per-level view of the printed level conditions; nullopt where the
/// printed condition is not a real comparison.
struct LevelDiagnostics {
  std::optional<bool> paper_bound_pass;      // PT: n < sqrt(beta) - ...
  std::optional<bool> paper_inequality_pass; // PT: (b/4)^2+(beta/b)^2 < beta/2
                                             // non-PT: n > 8(d^2-b^2)^{1/4}-k/2
  std::vector<cplx> branch_residuals;        // lambda - lambda_n, all branches
  std::optional<cplx> reference_epsilon;     // NU-consistent eps (non-PT)
};

struct SpectrumReport {
  Variant variant = Variant::PTSymmetric;
  std::vector<EnergyLevel> levels;
  std::vector<LevelDiagnostics> diagnostics;
  /// sqrt(beta) - sqrt(1/4 - gamma/q) - 1/2; NaN when not real.
  double paper_level_bound = 0.0;
  /// beta > 0 and b real: (b/4)^2 + (beta/b)^2 >= beta/2 for every n.
  bool empty_by_amgm = false;
  /// The printed level bound admits some n whose epsilon is not positive.
  bool paper_bound_inconsistent = false;

  double min_branch_residual(std::size_t level) const;
};

/// epsilon_n = beta/2 - b^2/16 - (beta/b)^2, b = 1 + 2n + sqrt(1 - 4 gamma/q).
/// Throws Error when b == 0.
cplx pt_epsilon(int n, double beta, double gamma, double q);

EnergyLevel pt_energy(int n, const PotentialSpec &spec,
                      const UnitsConfig &units);

/// The printed closed-form PT energy whose radical reads
/// sqrt(1 - 2 m C / (q hbar^2)); kept only for comparison with pt_energy.
cplx pt_energy_literal(int n, const PotentialSpec &spec,
                       const UnitsConfig &units);

SpectrumReport pt_level_report(const PotentialSpec &spec,
                               const UnitsConfig &units, int n_max);

/// Printed non-PT energy, evaluated in physical units (a = 1/(2 alpha)).
EnergyLevel nonpt_energy(int n, const PotentialSpec &spec,
                         const UnitsConfig &units);

/// The same printed formula in dimensionless form:
///   b^2/16 + (beta^2 - delta^2)/b^2 + i (beta delta / b^2 + delta/2),
/// b = 2n + kappa.
cplx nonpt_epsilon_printed(int n, const DimensionlessParams &params);

/// The epsilon that closes the NU quantization condition of the non-PT
/// problem: w/2 + b^2/16 + w^2/b^2 with w = beta + i delta, b = 2n + kappa.
cplx nonpt_epsilon_nu(int n, const DimensionlessParams &params);

struct NonPTAdmissibility {
  enum class Verdict { Pass, Fail, Indeterminate };
  Verdict verdict = Verdict::Indeterminate;
  double threshold = 0.0; // 8 (delta^2 - beta^2)^{1/4} - kappa/2
  std::string diagnostic;
};

NonPTAdmissibility nonpt_admissibility(int n,
                                       const DimensionlessParams &params);

/// Printed levels for the Hermitian and NonPTComplex variants, with branch
/// residuals and the NU-consistent epsilon attached per level.
SpectrumReport nonpt_level_report(const PotentialSpec &spec,
                                  const UnitsConfig &units, int n_max);

/// Dispatches on spec.variant.
SpectrumReport level_report(const PotentialSpec &spec,
                            const UnitsConfig &units, int n_max);

enum class SpectralCase { PT, NonPT };

/// sigma = s(1 - qs), tau~ = 1 - qs and the variant's sigma~ at params.epsilon.
NUProblem woods_saxon_problem(SpectralCase which,
                              const DimensionlessParams &params);

/// epsilon -> woods_saxon_problem with the other parameters frozen.
ProblemFamily woods_saxon_family(SpectralCase which,
                                 DimensionlessParams params);

/// lambda(eps) - lambda_n(eps) on every branch at params.epsilon.
std::vector<cplx> crosscheck_quantization(SpectralCase which, int n,
                                          const DimensionlessParams &params);

double min_abs(const std::vector<cplx> &values);

} // namespace wsspec

#endif
