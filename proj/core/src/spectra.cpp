#include "wsspec/spectra.hpp"

#include "wsspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wsspec {

namespace {

void check_level(int n) {
  if (n < 0 || n > kMaxLevelIndex)
    throw std::invalid_argument("level index must be in [0, 64]");
}

void require_variant(const PotentialSpec &spec, bool ok, const char *what) {
  spec.validate();
  if (!ok)
    throw std::invalid_argument(what);
}

} // namespace

std::string_view to_string(AdmissibilityReason r) {
  switch (r) {
  case AdmissibilityReason::EpsilonPositive:
    return "epsilon_positive";
  case AdmissibilityReason::EpsilonNonpositive:
    return "epsilon_nonpositive";
  case AdmissibilityReason::PaperInequalityPass:
    return "paper_inequality_pass";
  case AdmissibilityReason::PaperInequalityFail:
    return "paper_inequality_fail";
  case AdmissibilityReason::ComplexSpectrum:
    return "complex_spectrum";
  }
  return "unknown";
}

double min_abs(const std::vector<cplx> &values) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &v : values)
    best = std::min(best, std::abs(v));
  return best;
}

double SpectrumReport::min_branch_residual(std::size_t level) const {
  return min_abs(diagnostics.at(level).branch_residuals);
}

cplx pt_epsilon(int n, double beta, double gamma, double q) {
  check_level(n);
  if (!(q > 0.0))
    throw std::invalid_argument("pt_epsilon: q must be > 0");
  const cplx b = spectral_aux(n, gamma, q).b;
  if (b == cplx(0.0))
    throw Error("pt_epsilon: singular configuration b = 0");
  const cplx ratio = beta / b;
  return beta / 2.0 - b * b / 16.0 - ratio * ratio;
}

EnergyLevel pt_energy(int n, const PotentialSpec &spec,
                      const UnitsConfig &units) {
  require_variant(spec, spec.variant == Variant::PTSymmetric,
                  "pt_energy requires the PT variant");
  units.validate();
  const auto dp = to_dimensionless(spec, units, 0.0);
  EnergyLevel level;
  level.n = n;
  level.epsilon = pt_epsilon(n, dp.beta, dp.gamma, dp.q);
  level.energy = from_dimensionless(level.epsilon, spec, units);
  level.degenerate_radical = 1.0 - 4.0 * dp.gamma / dp.q < 0.0;
  if (level.epsilon.imag() != 0.0) {
    level.reason = AdmissibilityReason::ComplexSpectrum;
    level.admissible = false;
  } else {
    level.admissible = level.epsilon.real() > 0.0;
    level.reason = level.admissible ? AdmissibilityReason::EpsilonPositive
                                    : AdmissibilityReason::EpsilonNonpositive;
  }
  return level;
}

cplx pt_energy_literal(int n, const PotentialSpec &spec,
                       const UnitsConfig &units) {
  require_variant(spec, spec.variant == Variant::PTSymmetric,
                  "pt_energy_literal requires the PT variant");
  check_level(n);
  const double hb2 = units.hbar * units.hbar;
  const double m = units.mass;
  const double aI = spec.alphaI;
  const double V0 = spec.V0R;
  const cplx radical =
      std::sqrt(cplx(1.0 - 2.0 * m * spec.C() / (spec.q() * hb2), 0.0));
  const cplx b = 1.0 + 2.0 * n + radical;
  const cplx first = (aI / 4.0) * (aI / 4.0) * b * b;
  const cplx second_root = (m * V0 / (2.0 * hb2 * aI)) / b;
  return (2.0 * hb2 / m) *
         (first + second_root * second_root - m * V0 / (4.0 * hb2));
}

SpectrumReport pt_level_report(const PotentialSpec &spec,
                               const UnitsConfig &units, int n_max) {
  require_variant(spec, spec.variant == Variant::PTSymmetric,
                  "pt_level_report requires the PT variant");
  check_level(n_max);
  const auto dp0 = to_dimensionless(spec, units, 0.0);
  const double beta = dp0.beta;
  const double inner = 0.25 - dp0.gamma / dp0.q;

  SpectrumReport report;
  report.variant = Variant::PTSymmetric;
  report.paper_level_bound =
      (beta >= 0.0 && inner >= 0.0)
          ? std::sqrt(beta) - std::sqrt(inner) - 0.5
          : std::numeric_limits<double>::quiet_NaN();
  const bool b_real = 1.0 - 4.0 * dp0.gamma / dp0.q >= 0.0;
  report.empty_by_amgm = beta > 0.0 && b_real;

  for (int n = 0; n <= n_max; ++n) {
    EnergyLevel level = pt_energy(n, spec, units);
    LevelDiagnostics diag;
    if (!std::isnan(report.paper_level_bound))
      diag.paper_bound_pass = n < report.paper_level_bound;
    const cplx b = spectral_aux(n, dp0.gamma, dp0.q).b;
    if (b_real) {
      const double br = b.real();
      diag.paper_inequality_pass =
          (br / 4.0) * (br / 4.0) + (beta / br) * (beta / br) < beta / 2.0;
    }
    DimensionlessParams dp = dp0;
    dp.epsilon = level.epsilon;
    diag.branch_residuals = crosscheck_quantization(SpectralCase::PT, n, dp);
    if (diag.paper_bound_pass.value_or(false) && !level.admissible)
      report.paper_bound_inconsistent = true;
    report.levels.push_back(level);
    report.diagnostics.push_back(std::move(diag));
  }
  return report;
}

EnergyLevel nonpt_energy(int n, const PotentialSpec &spec,
                         const UnitsConfig &units) {
  require_variant(spec, spec.variant != Variant::PTSymmetric,
                  "nonpt_energy requires the Hermitian or non-PT variant");
  units.validate();
  check_level(n);
  const double hb2 = units.hbar * units.hbar;
  const double m = units.mass;
  const double a = 1.0 / (2.0 * spec.alpha);
  const double C = spec.C();
  const double q = spec.q();
  const double V0R = spec.V0R;
  const double V0I = spec.V0I;

  const double radicand = 1.0 + 8.0 * m * C * a * a / (hb2 * q);
  const cplx bp = std::sqrt(cplx(radicand, 0.0)) + (1.0 + 2.0 * n);
  const cplx bp2 = bp * bp;
  const double g = m * a * a / hb2;
  const double prefactor = hb2 / (2.0 * m * a * a);
  const cplx real_part = bp2 / 16.0 + 4.0 * g * g * (V0R * V0R - V0I * V0I) / bp2;
  const cplx imag_part = 4.0 * g * g * V0R * V0I / bp2 + m * V0I * a * a / hb2;

  EnergyLevel level;
  level.n = n;
  level.energy = -prefactor * real_part - cplx(0.0, 1.0) * prefactor * imag_part;
  level.epsilon = -level.energy / energy_scale(spec, units);
  level.degenerate_radical = radicand < 0.0;
  if (V0I != 0.0) {
    level.reason = AdmissibilityReason::ComplexSpectrum;
    const auto dp = to_dimensionless(spec, units, level.energy);
    level.admissible =
        nonpt_admissibility(n, dp).verdict == NonPTAdmissibility::Verdict::Pass;
  } else if (level.epsilon.imag() != 0.0) {
    level.reason = AdmissibilityReason::ComplexSpectrum;
    level.admissible = false;
  } else {
    level.admissible = level.epsilon.real() > 0.0;
    level.reason = level.admissible ? AdmissibilityReason::EpsilonPositive
                                    : AdmissibilityReason::EpsilonNonpositive;
  }
  return level;
}

cplx nonpt_epsilon_printed(int n, const DimensionlessParams &params) {
  check_level(n);
  const cplx b = 2.0 * n + spectral_aux(n, params.gamma, params.q).kappa;
  const cplx b2 = b * b;
  const double beta = params.beta;
  const double delta = params.delta;
  return b2 / 16.0 + (beta * beta - delta * delta) / b2 +
         cplx(0.0, 1.0) * (beta * delta / b2 + delta / 2.0);
}

cplx nonpt_epsilon_nu(int n, const DimensionlessParams &params) {
  check_level(n);
  const cplx b = 2.0 * n + spectral_aux(n, params.gamma, params.q).kappa;
  if (b == cplx(0.0))
    throw Error("nonpt_epsilon_nu: singular configuration b = 0");
  const cplx w(params.beta, params.delta);
  const cplx ratio = w / b;
  return w / 2.0 + b * b / 16.0 + ratio * ratio;
}

NonPTAdmissibility nonpt_admissibility(int n,
                                       const DimensionlessParams &params) {
  NonPTAdmissibility out;
  const double diff = params.delta * params.delta - params.beta * params.beta;
  const cplx kappa = spectral_aux(n, params.gamma, params.q).kappa;
  if (diff < 0.0) {
    out.verdict = NonPTAdmissibility::Verdict::Indeterminate;
    out.threshold = std::numeric_limits<double>::quiet_NaN();
    out.diagnostic = "fourth root of negative argument (delta^2 < beta^2)";
    return out;
  }
  if (kappa.imag() != 0.0) {
    out.verdict = NonPTAdmissibility::Verdict::Indeterminate;
    out.threshold = std::numeric_limits<double>::quiet_NaN();
    out.diagnostic = "kappa is complex (1 + 4 gamma/q < 0)";
    return out;
  }
  out.threshold = 8.0 * std::pow(diff, 0.25) - kappa.real() / 2.0;
  out.verdict = n > out.threshold ? NonPTAdmissibility::Verdict::Pass
                                  : NonPTAdmissibility::Verdict::Fail;
  return out;
}

SpectrumReport nonpt_level_report(const PotentialSpec &spec,
                                  const UnitsConfig &units, int n_max) {
  require_variant(spec, spec.variant != Variant::PTSymmetric,
                  "nonpt_level_report requires the Hermitian or non-PT variant");
  check_level(n_max);
  SpectrumReport report;
  report.variant = spec.variant;
  report.paper_level_bound = std::numeric_limits<double>::quiet_NaN();
  const auto dp0 = to_dimensionless(spec, units, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    EnergyLevel level = nonpt_energy(n, spec, units);
    LevelDiagnostics diag;
    const auto verdict = nonpt_admissibility(n, dp0);
    if (verdict.verdict != NonPTAdmissibility::Verdict::Indeterminate)
      diag.paper_inequality_pass =
          verdict.verdict == NonPTAdmissibility::Verdict::Pass;
    DimensionlessParams dp = dp0;
    dp.epsilon = level.epsilon;
    diag.branch_residuals = crosscheck_quantization(SpectralCase::NonPT, n, dp);
    diag.reference_epsilon = nonpt_epsilon_nu(n, dp0);
    report.levels.push_back(level);
    report.diagnostics.push_back(std::move(diag));
  }
  return report;
}

SpectrumReport level_report(const PotentialSpec &spec,
                            const UnitsConfig &units, int n_max) {
  if (spec.variant == Variant::PTSymmetric)
    return pt_level_report(spec, units, n_max);
  return nonpt_level_report(spec, units, n_max);
}

NUProblem woods_saxon_problem(SpectralCase which,
                              const DimensionlessParams &p) {
  const double q = p.q;
  const cplx eps = p.epsilon;
  NUProblem prob;
  prob.sigma = {0.0, 1.0, -q};
  prob.tau_tilde = {1.0, -q, 0.0};
  if (which == SpectralCase::PT) {
    prob.sigma_tilde = {eps - p.beta, -(2.0 * eps * q - p.beta * q - p.gamma),
                        eps * q * q};
  } else {
    const cplx w(p.beta, p.delta);
    prob.sigma_tilde = {w - eps, 2.0 * eps * q - w * q - p.gamma,
                        -eps * q * q};
  }
  return prob;
}

ProblemFamily woods_saxon_family(SpectralCase which,
                                 DimensionlessParams params) {
  return [which, params](cplx eps) {
    DimensionlessParams p = params;
    p.epsilon = eps;
    return woods_saxon_problem(which, p);
  };
}

std::vector<cplx> crosscheck_quantization(SpectralCase which, int n,
                                          const DimensionlessParams &params) {
  return branch_residuals(woods_saxon_problem(which, params), n);
}

} // namespace wsspec
