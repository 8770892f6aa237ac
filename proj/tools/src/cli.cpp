#include "wsspec/cli/cli.hpp"

#include "wsspec/cli/expr.hpp"
#include "wsspec/errors.hpp"
#include "wsspec/param_io.hpp"
#include "wsspec/report_io.hpp"
#include "wsspec/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

namespace wsspec::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kSweepLimit = 1e6;
// Compact and expanded forms are compared only this far from a pole.
constexpr double kPoleClearance = 0.1;

enum class Format { Text, Csv, Json };

struct Outcome {
  int code = kOk;
  std::string message;
  bool emit = true;
};

struct KeyFlag {
  const char *key;
  const char *flag;
  const char *help;
};

constexpr KeyFlag kGlobalKeys[] = {
    {"variant", "--variant", "hermitian | pt | nonpt"},
    {"V0R", "--V0R", "real well depth"},
    {"V0I", "--V0I", "imaginary well depth (nonpt)"},
    {"alpha", "--alpha", "steepness 1/(2a)"},
    {"alphaI", "--alphaI", "imaginary steepness (pt)"},
    {"R0", "--R0", "surface position"},
    {"q", "--q", "deformation (sweep: comma-separated list)"},
    {"C", "--C", "surface term strength"},
    {"hbar", "--hbar", "reduced Planck constant"},
    {"mass", "--mass", "particle mass"},
    {"format", "--format", "json | csv | text"},
    {"out", "--out", "output path"},
    {"tol_residual", "--tol-residual", "quantization residual tolerance"},
    {"seed", "--seed", "root-finder start (complex expression)"},
    {"n_max", "--n-max", "highest level index"},
    {"epsilon_override", "--epsilon-override",
     "use this epsilon instead of the closed form"},
};

struct CommandKeys {
  const char *command;
  std::vector<KeyFlag> keys;
};

const std::vector<CommandKeys> &command_keys() {
  static const std::vector<CommandKeys> table = {
      {"spectrum", {}},
      {"wavefunction",
       {{"n", "--n", "level index"},
        {"x_min", "--x-min", "window start"},
        {"x_max", "--x-max", "window end"},
        {"points", "--points", "sample count (>= 64)"}}},
      {"verify", {}},
      {"nu-solve",
       {{"sigma", "--sigma", "c0,c1,c2 of sigma"},
        {"tau", "--tau", "c0,c1 of tau~"},
        {"sigma_tilde", "--sigma-tilde", "c0,c1,c2 of sigma~"},
        {"n_min", "--n-min", "lowest level index"}}},
      {"sweep",
       {{"beta", "--beta", "lo:hi:count or value"},
        {"gamma", "--gamma", "lo:hi:count or value"},
        {"delta", "--delta", "lo:hi:count or value"}}},
      {"check-symmetry",
       {{"half_width", "--half-width", "grid half width"},
        {"sym_points", "--sym-points", "grid points"}}},
  };
  return table;
}

bool is_known_key(std::string_view key) {
  for (const auto &k : kGlobalKeys)
    if (key == k.key)
      return true;
  for (const auto &c : command_keys())
    for (const auto &k : c.keys)
      if (key == k.key)
        return true;
  return false;
}

class Settings {
public:
  explicit Settings(KeyValueMap kv) : kv_(std::move(kv)) {}

  bool has(std::string_view key) const { return kv_.find(key) != kv_.end(); }
  const std::string &raw(std::string_view key) const {
    return kv_.find(key)->second;
  }

  double real(std::string_view key, double fallback) const {
    return has(key) ? parse_double(raw(key), key) : fallback;
  }
  std::optional<double> real(std::string_view key) const {
    if (!has(key))
      return std::nullopt;
    return parse_double(raw(key), key);
  }
  int integer(std::string_view key, int fallback) const {
    if (!has(key))
      return fallback;
    const auto &s = raw(key);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw std::invalid_argument("invalid integer for " + std::string(key) +
                                  ": '" + s + "'");
    return value;
  }
  std::optional<cplx> complex(std::string_view key) const {
    if (!has(key))
      return std::nullopt;
    return parse_complex(raw(key));
  }

  Format format() const {
    if (!has("format"))
      return Format::Text;
    const auto &f = raw("format");
    if (f == "text")
      return Format::Text;
    if (f == "csv")
      return Format::Csv;
    if (f == "json")
      return Format::Json;
    throw std::invalid_argument("--format must be json, csv or text");
  }

  double tolerance() const {
    const double t = real("tol_residual", VerifierTolerances{}.quantization);
    if (!(t > 0.0))
      throw std::invalid_argument("--tol-residual must be > 0");
    return t;
  }

  int n_max(int fallback) const {
    const int n = integer("n_max", fallback);
    if (n < 0 || n > kMaxLevelIndex)
      throw std::invalid_argument("--n-max must be in [0, 64]");
    return n;
  }

  ParameterSet parameters(bool skip_q = false) const {
    KeyValueMap pk;
    for (const auto &[k, v] : kv_)
      if (is_potential_key(k) && !(skip_q && k == "q"))
        pk.emplace(k, v);
    auto ps = apply_potential_keys(pk);
    ps.potential.validate();
    ps.units.validate();
    return ps;
  }

  ParameterSet parameters_with_variant() const {
    auto ps = parameters();
    if (!ps.has_variant)
      throw std::invalid_argument("missing variant (--variant hermitian|pt|nonpt)");
    return ps;
  }

private:
  KeyValueMap kv_;
};

SpectralCase case_of(Variant v) {
  return v == Variant::PTSymmetric ? SpectralCase::PT : SpectralCase::NonPT;
}

std::string cplx_text(cplx z) {
  return format_number(z.real()) + (z.imag() < 0.0 ? "-" : "+") +
         format_number(std::abs(z.imag())) + "i";
}

ordered_json num(double x) {
  if (!std::isfinite(x))
    return nullptr;
  return x == 0.0 ? 0.0 : x;
}

// Closed-form epsilon whose closure is checked: the level's own for PT, the
// NU-consistent one otherwise.
cplx closure_epsilon(const SpectrumReport &r, std::size_t i) {
  if (r.variant == Variant::PTSymmetric)
    return r.levels[i].epsilon;
  return r.diagnostics[i].reference_epsilon.value_or(r.levels[i].epsilon);
}

void apply_override(SpectrumReport &r, cplx eps, const ParameterSet &ps) {
  const auto dp0 = to_dimensionless(ps.potential, ps.units, 0.0);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    auto &level = r.levels[i];
    level.epsilon = eps;
    level.energy = from_dimensionless(eps, ps.potential, ps.units);
    if (eps.imag() != 0.0) {
      level.admissible = false;
      level.reason = AdmissibilityReason::ComplexSpectrum;
    } else {
      level.admissible = eps.real() > 0.0;
      level.reason = level.admissible ? AdmissibilityReason::EpsilonPositive
                                      : AdmissibilityReason::EpsilonNonpositive;
    }
    DimensionlessParams dp = dp0;
    dp.epsilon = eps;
    r.diagnostics[i].branch_residuals =
        crosscheck_quantization(case_of(r.variant), level.n, dp);
    r.diagnostics[i].reference_epsilon.reset();
  }
}

Outcome cmd_spectrum(const Settings &s, std::ostream &body) {
  const auto ps = s.parameters_with_variant();
  const int n_max = s.n_max(3);
  auto report = level_report(ps.potential, ps.units, n_max);
  const auto dp0 = to_dimensionless(ps.potential, ps.units, 0.0);
  const auto override_eps = s.complex("epsilon_override");
  if (override_eps)
    apply_override(report, *override_eps, ps);
  const double tol = s.tolerance();
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    DimensionlessParams dp = dp0;
    dp.epsilon = override_eps ? *override_eps : closure_epsilon(report, i);
    const double res = min_abs(crosscheck_quantization(
        case_of(ps.potential.variant), report.levels[i].n, dp));
    if (!(res <= tol))
      return {kInternalConsistency,
              "quantization closure fails at n=" +
                  std::to_string(report.levels[i].n) +
                  " (min branch residual " + format_number(res) + ")",
              false};
  }
  switch (s.format()) {
  case Format::Csv:
    write_spectrum_csv(body, report);
    break;
  case Format::Json:
    write_spectrum_jsonl(body, report);
    break;
  case Format::Text:
    write_spectrum_text(body, report);
    break;
  }
  return {};
}

Window default_wavefunction_window(const PotentialSpec &spec) {
  if (spec.variant == Variant::PTSymmetric)
    return {0.0, std::numbers::pi / spec.alphaI};
  const double a = 1.0 / (2.0 * spec.alpha);
  return {spec.R0 - 10.0 * a, spec.R0 + 10.0 * a};
}

Outcome cmd_wavefunction(const Settings &s, std::ostream &body) {
  const auto ps = s.parameters_with_variant();
  const auto &spec = ps.potential;
  const int n = s.integer("n", 0);
  if (n < 0 || n > kMaxLevelIndex)
    throw std::invalid_argument("--n must be in [0, 64]");
  const int points = s.integer("points", 512);
  if (points < 64)
    throw std::invalid_argument("--points must be >= 64");
  Window w = default_wavefunction_window(spec);
  w.lo = s.real("x_min", w.lo);
  w.hi = s.real("x_max", w.hi);
  if (!(w.hi > w.lo))
    throw std::invalid_argument("--x-min must be below --x-max");

  const auto dp0 = to_dimensionless(spec, ps.units, 0.0);
  auto pair = consistent_eigenpair(case_of(spec.variant), dp0, n,
                                   s.complex("epsilon_override"));
  if (!(pair.min_residual <= s.tolerance()))
    return {kNoConsistentEigenvalue,
            "no consistent epsilon for n=" + std::to_string(n) +
                " (min branch residual " + format_number(pair.min_residual) +
                ")",
            false};
  const double k = spec.steepness();
  const auto psi = pair.psi;
  const Sampler sampler = [&](double x) {
    return psi(x_to_s(spec.variant, k, x));
  };
  pair.psi.scale = normalize(sampler, w, points);
  const auto samples =
      sample_wavefunction(pair.psi, spec.variant, k, w, points);
  if (s.format() == Format::Json)
    write_wavefunction_jsonl(body, samples);
  else
    write_wavefunction_csv(body, samples);
  return {};
}

struct Check {
  std::string name;
  int n = -1;
  bool assertable = true;
  bool passed = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::vector<cplx> residual_s_points(double q) {
  std::vector<cplx> pts;
  for (double r : {0.35, 0.8, 1.7})
    for (int k = 0; k < 8; ++k)
      pts.push_back(std::polar(r / q, 2.0 * std::numbers::pi * (k + 0.5) / 8.0));
  return pts;
}

void pair_checks(const ParameterSet &ps, int n, std::optional<cplx> eps,
                 double tol, std::vector<Check> &checks) {
  const auto &spec = ps.potential;
  const VerifierTolerances vt;
  const auto which = case_of(spec.variant);
  const auto dp0 = to_dimensionless(spec, ps.units, 0.0);
  const auto pair = consistent_eigenpair(which, dp0, n, eps);
  checks.push_back({"quantization closure", n, true, pair.min_residual <= tol,
                    pair.min_residual, tol,
                    "branch " + std::to_string(pair.branch_index) + " eps=" +
                        cplx_text(pair.epsilon)});
  DimensionlessParams dp = dp0;
  dp.epsilon = pair.epsilon;
  try {
    const auto pts = residual_s_points(dp.q);
    const double rs = ode_residual_s(which, dp, pair.psi, pts);
    checks.push_back({"s-domain residual", n, true, rs <= vt.s_residual, rs,
                      vt.s_residual, std::to_string(pts.size()) + " points"});
  } catch (const Error &e) {
    checks.push_back({"s-domain residual", n, true, false, NAN, vt.s_residual,
                      e.what()});
  }
  try {
    const Window w = residual_window(spec);
    const int npts =
        static_cast<int>(std::lround((w.hi - w.lo) / vt.x_step)) + 1;
    const Grid1D grid{w.lo, w.hi, npts};
    const double k = spec.steepness();
    const auto &psi = pair.psi;
    const auto res = ode_residual_x(
        spec, ps.units, from_dimensionless(pair.epsilon, spec, ps.units),
        [&](double x) { return psi(x_to_s(spec.variant, k, x)); }, grid);
    checks.push_back({"x-domain residual", n, true,
                      res.rel_residual_norm <= vt.x_residual,
                      res.rel_residual_norm, vt.x_residual,
                      "h=" + format_number(grid.spacing())});
  } catch (const Error &e) {
    checks.push_back({"x-domain residual", n, true, false, NAN, vt.x_residual,
                      e.what()});
  }
}

std::vector<double> symmetry_grid(const PotentialSpec &spec,
                                  std::optional<double> half_width,
                                  int points) {
  const double hw = half_width.value_or(
      spec.variant == Variant::PTSymmetric
          ? std::numbers::pi / spec.alphaI
          : 20.0 / (2.0 * spec.steepness()));
  if (!(hw > 0.0))
    throw std::invalid_argument("--half-width must be > 0");
  if (points < 3)
    throw std::invalid_argument("--sym-points must be >= 3");
  return symmetric_grid(hw, static_cast<std::size_t>(points));
}

double expanded_agreement(const PotentialSpec &spec,
                          std::span<const double> grid) {
  double worst = 0.0;
  for (double x : grid) {
    if (pole_clearance(spec, x) < kPoleClearance)
      continue;
    const cplx a = evaluate_potential(spec, x);
    const cplx b = evaluate_pt_expanded(spec, x);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return worst;
}

void symmetry_checks(const ParameterSet &ps, const std::vector<double> &grid,
                     std::vector<Check> &checks) {
  const auto &spec = ps.potential;
  const VerifierTolerances vt;
  const double defect = pt_symmetry_defect(spec, grid);
  if (spec.variant == Variant::PTSymmetric) {
    checks.push_back({"pt symmetry", -1, true, defect <= vt.pt_defect, defect,
                      vt.pt_defect, "max |conj V(-x) - V(x)|"});
    const double agree = expanded_agreement(spec, grid);
    checks.push_back({"pt expanded form", -1, true, agree <= vt.pt_defect,
                      agree, vt.pt_defect,
                      "relative to max(1, |V|), |1+qs| >= 0.1"});
  } else {
    checks.push_back({"pt symmetry", -1, false, defect <= vt.pt_defect, defect,
                      vt.pt_defect,
                      defect <= vt.pt_defect ? "symmetric on this grid"
                                             : "not PT-symmetric"});
  }
}

void write_checks(std::ostream &body, Format f, std::string_view schema,
                  const std::vector<Check> &checks,
                  const std::vector<std::string> &notes) {
  auto status = [](const Check &c) -> std::string {
    if (!c.assertable)
      return "info";
    return c.passed ? "pass" : "fail";
  };
  switch (f) {
  case Format::Csv:
    body << schema_header(schema) << '\n';
    body << "check,n,status,value,tolerance,detail\n";
    for (const auto &c : checks)
      body << c.name << ',' << (c.n >= 0 ? std::to_string(c.n) : "") << ','
           << status(c) << ',' << format_number(c.value) << ','
           << format_number(c.tolerance) << ",\"" << c.detail << "\"\n";
    for (const auto &note : notes)
      body << "# " << note << '\n';
    break;
  case Format::Json: {
    ordered_json head;
    head["schema"] = schema;
    head["version"] = kVersion;
    head["notes"] = notes;
    body << head.dump() << '\n';
    for (const auto &c : checks) {
      ordered_json rec;
      rec["check"] = c.name;
      if (c.n >= 0)
        rec["n"] = c.n;
      rec["status"] = status(c);
      rec["value"] = num(c.value);
      rec["tolerance"] = num(c.tolerance);
      rec["detail"] = c.detail;
      body << rec.dump() << '\n';
    }
    break;
  }
  case Format::Text:
    for (const auto &c : checks) {
      std::string s = status(c);
      std::transform(s.begin(), s.end(), s.begin(), ::toupper);
      body << std::left << std::setw(5) << s << ' ' << c.name;
      if (c.n >= 0)
        body << " n=" << c.n;
      body << " value=" << format_number(c.value)
           << " tol=" << format_number(c.tolerance) << " (" << c.detail
           << ")\n";
    }
    for (const auto &note : notes)
      body << "note: " << note << '\n';
    break;
  }
}

Outcome finish_checks(const std::vector<Check> &checks) {
  std::vector<std::string> failed;
  for (const auto &c : checks)
    if (c.assertable && !c.passed &&
        std::find(failed.begin(), failed.end(), c.name) == failed.end())
      failed.push_back(c.name);
  if (failed.empty())
    return {};
  std::string msg = "invariant failure:";
  for (const auto &f : failed)
    msg += " \"" + f + "\"";
  return {kInvariantFailure, msg, true};
}

Outcome cmd_verify(const Settings &s, std::ostream &body) {
  const auto ps = s.parameters_with_variant();
  const auto &spec = ps.potential;
  const int n_max = s.n_max(3);
  const double tol = s.tolerance();
  const auto eps = s.complex("epsilon_override");
  std::vector<Check> checks;
  std::vector<std::string> notes;

  for (int n = 0; n <= n_max; ++n)
    pair_checks(ps, n, eps, tol, checks);
  symmetry_checks(ps, symmetry_grid(spec, std::nullopt, 500), checks);

  const auto report = level_report(spec, ps.units, n_max);
  const auto dp0 = to_dimensionless(spec, ps.units, 0.0);
  if (spec.variant == Variant::PTSymmetric) {
    if (report.empty_by_amgm)
      notes.push_back("empty_by_amgm=true: the level-count inequality "
                      "(b/4)^2+(beta/b)^2<beta/2 has no solutions "
                      "(paper inconsistency: informational)");
    else if (1.0 - 4.0 * dp0.gamma / dp0.q < 0.0)
      notes.push_back("1-4gamma/q<0: b is complex, so the level-count "
                      "inequality is not a real comparison and "
                      "empty_by_amgm=false");
    if (report.paper_bound_inconsistent)
      notes.push_back("level bound sqrt(beta)-sqrt(1/4-gamma/q)-1/2 admits "
                      "levels with epsilon<=0 (paper inconsistency: "
                      "informational)");
    const cplx literal = pt_energy_literal(0, spec, ps.units);
    const cplx canonical = report.levels.front().energy;
    checks.push_back({"printed radical vs canonical energy", 0, false,
                      true, std::abs(literal - canonical), 0.0,
                      "E_literal=" + cplx_text(literal) +
                          " E=" + cplx_text(canonical)});
  } else {
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const cplx printed = report.levels[i].epsilon;
      const cplx nu = nonpt_epsilon_nu(report.levels[i].n, dp0);
      checks.push_back({"printed vs NU-consistent epsilon", report.levels[i].n,
                        false, true, std::abs(printed - nu), 0.0,
                        "printed=" + cplx_text(printed) +
                            " nu=" + cplx_text(nu) +
                            " (paper inconsistency: informational)"});
    }
  }

  std::ostringstream extra;
  if (spec.variant == Variant::Hermitian) {
    const VerifierTolerances vt;
    const int k = n_max + 1;
    const Grid1D grid = default_oracle_grid(spec, std::max(4001, 8 * k));
    const auto oracle = hermitian_oracle(spec, ps.units, grid, k);
    const auto t = fd_hamiltonian(
        [&](double x) { return evaluate_potential(spec, x).real(); }, ps.units,
        grid);
    const auto ql = ql_eigenvalues(t);
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst, std::abs(ql[i] - oracle.eigenvalues[i]));
    const double scale = t.gershgorin_scale();
    checks.push_back({"oracle self-check", -1, true,
                      worst <= vt.ql_agreement * scale, worst,
                      vt.ql_agreement * scale, "bisection vs QL"});
    const auto table = compare_report(report.levels, oracle, 1e-3);
    write_divergence_text(extra, table);
  }

  write_checks(body, s.format(), "verify", checks, notes);
  if (s.format() == Format::Text)
    body << extra.str();
  return finish_checks(checks);
}

Outcome cmd_check_symmetry(const Settings &s, std::ostream &body) {
  const auto ps = s.parameters_with_variant();
  std::vector<Check> checks;
  symmetry_checks(ps,
                  symmetry_grid(ps.potential, s.real("half_width"),
                                s.integer("sym_points", 500)),
                  checks);
  write_checks(body, s.format(), "symmetry", checks, {});
  return finish_checks(checks);
}

NUProblem problem_at(const std::array<std::vector<Affine>, 3> &coeffs,
                     cplx eps) {
  auto quad = [&](const std::vector<Affine> &c) {
    QuadPoly p;
    cplx *slots[] = {&p.c0, &p.c1, &p.c2};
    for (std::size_t i = 0; i < c.size(); ++i)
      *slots[i] = c[i].at(eps);
    return p;
  };
  return {quad(coeffs[0]), quad(coeffs[1]), quad(coeffs[2])};
}

Outcome cmd_nu_solve(const Settings &s, std::ostream &body) {
  std::array<std::vector<Affine>, 3> coeffs;
  const char *keys[] = {"sigma", "tau", "sigma_tilde"};
  int with_placeholder = 0;
  for (int i = 0; i < 3; ++i) {
    if (!s.has(keys[i]))
      throw std::invalid_argument(std::string("nu-solve needs --") +
                                  (i == 2 ? "sigma-tilde" : keys[i]));
    coeffs[i] = parse_affine_list(s.raw(keys[i]));
    if (coeffs[i].size() > 3)
      throw std::invalid_argument(std::string(keys[i]) +
                                  ": at most 3 coefficients");
    for (const auto &c : coeffs[i])
      with_placeholder += c.uses_placeholder() ? 1 : 0;
  }
  if (with_placeholder > 1)
    throw std::invalid_argument(
        "eps placeholder appears in more than one coefficient (ambiguous "
        "family)");
  const cplx seed = s.complex("seed").value_or(0.0);
  const int n_min = s.integer("n_min", 0);
  const int n_max = s.n_max(3);
  if (n_min < 0 || n_min > n_max)
    throw std::invalid_argument("--n-min must be in [0, n_max]");

  const auto at_seed = problem_at(coeffs, seed);
  at_seed.validate();
  const auto branches = resolve_branches(at_seed);

  struct Root {
    int n;
    std::optional<EigenSolution> sol;
    std::size_t branch = 0;
    std::string note;
  };
  std::vector<Root> roots;
  bool missing = false;
  if (with_placeholder == 1) {
    const ProblemFamily family = [&](cplx e) { return problem_at(coeffs, e); };
    for (int n = n_min; n <= n_max; ++n) {
      Root r{n, std::nullopt, 0, "no admissible branch converged"};
      for (std::size_t b = 0; b < branches.size(); ++b) {
        try {
          const auto sol = solve_eigenvalue(family, b, n, seed);
          const auto at = resolve_branches(family(sol.epsilon));
          if (b < at.size() && at[b].admissible) {
            r = {n, sol, b, ""};
            break;
          }
        } catch (const Error &) {
        } catch (const std::out_of_range &) {
        }
      }
      missing = missing || !r.sol;
      roots.push_back(r);
    }
  }

  const Format f = s.format();
  if (f == Format::Json) {
    ordered_json head;
    head["schema"] = "nu-solve";
    head["version"] = kVersion;
    head["seed_re"] = num(seed.real());
    head["seed_im"] = num(seed.imag());
    body << head.dump() << '\n';
  } else if (f == Format::Csv) {
    body << schema_header("nu-branches") << '\n'
         << "index,k_sign,pi_sign,k_re,k_im,pi0_re,pi0_im,pi1_re,pi1_im,"
            "tau1_re,tau1_im,lambda_re,lambda_im,admissible\n";
  } else {
    body << "branches at eps=" << cplx_text(seed) << ":\n";
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto &b = branches[i];
    if (f == Format::Json) {
      ordered_json rec;
      rec["kind"] = "branch";
      rec["index"] = i;
      rec["k_sign"] = b.k_sign;
      rec["pi_sign"] = b.pi_sign;
      rec["k"] = {num(b.k.real()), num(b.k.imag())};
      rec["pi"] = {num(b.pi.c0.real()), num(b.pi.c0.imag()),
                   num(b.pi.c1.real()), num(b.pi.c1.imag())};
      rec["tau_slope"] = {num(b.tau.c1.real()), num(b.tau.c1.imag())};
      rec["lambda"] = {num(b.lambda.real()), num(b.lambda.imag())};
      rec["admissible"] = b.admissible;
      body << rec.dump() << '\n';
    } else if (f == Format::Csv) {
      body << i << ',' << b.k_sign << ',' << b.pi_sign;
      for (cplx z : {b.k, b.pi.c0, b.pi.c1, b.tau.c1, b.lambda})
        body << ',' << format_number(z.real()) << ','
             << format_number(z.imag());
      body << ',' << (b.admissible ? "true" : "false") << '\n';
    } else {
      body << "  [" << i << "] k=" << cplx_text(b.k)
           << " pi=" << cplx_text(b.pi.c0) << " + (" << cplx_text(b.pi.c1)
           << ")s tau'=" << cplx_text(b.tau.c1)
           << " lambda=" << cplx_text(b.lambda)
           << (b.admissible ? " admissible" : " inadmissible") << '\n';
    }
  }
  if (with_placeholder == 0) {
    if (f == Format::Text)
      body << "no eps placeholder: branch report only\n";
    return {};
  }
  if (f == Format::Csv)
    body << schema_header("nu-eigen") << '\n'
         << "n,eps_re,eps_im,branch,residual,iterations\n";
  else if (f == Format::Text)
    body << "eigenvalues:\n";
  for (const auto &r : roots) {
    if (f == Format::Json) {
      ordered_json rec;
      rec["kind"] = "eigen";
      rec["n"] = r.n;
      if (r.sol) {
        rec["eps"] = {num(r.sol->epsilon.real()), num(r.sol->epsilon.imag())};
        rec["branch"] = r.branch;
        rec["residual"] = num(std::abs(r.sol->residual));
        rec["iterations"] = r.sol->iterations;
      } else {
        rec["note"] = r.note;
      }
      body << rec.dump() << '\n';
    } else if (f == Format::Csv) {
      if (r.sol)
        body << r.n << ',' << format_number(r.sol->epsilon.real()) << ','
             << format_number(r.sol->epsilon.imag()) << ',' << r.branch << ','
             << format_number(std::abs(r.sol->residual)) << ','
             << r.sol->iterations << '\n';
      else
        body << r.n << ",,,,,\n";
    } else {
      body << "  n=" << r.n << ' ';
      if (r.sol)
        body << "eps=" << cplx_text(r.sol->epsilon) << " branch=" << r.branch
             << " residual=" << format_number(std::abs(r.sol->residual))
             << " iterations=" << r.sol->iterations << '\n';
      else
        body << r.note << '\n';
    }
  }
  if (missing)
    return {kNoConsistentEigenvalue, "no admissible eigenvalue for some n",
            true};
  return {};
}

std::vector<double> parse_range(std::string_view text, std::string_view what) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto c = text.find(':');
    parts.push_back(text.substr(0, c));
    if (c == std::string_view::npos)
      break;
    text = text.substr(c + 1);
  }
  if (parts.size() == 1)
    return {parse_double(parts[0], what)};
  if (parts.size() != 3)
    throw std::invalid_argument(std::string(what) +
                                ": expected lo:hi:count or a value");
  const double lo = parse_double(parts[0], what);
  const double hi = parse_double(parts[1], what);
  const double count = parse_double(parts[2], what);
  if (!(count >= 1.0) || count != std::floor(count) || count > kSweepLimit)
    throw std::invalid_argument(std::string(what) + ": bad count");
  const auto m = static_cast<std::size_t>(count);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = m == 1 ? lo
                    : (i + 1 == m ? hi : lo + (hi - lo) * double(i) / double(m - 1));
  return out;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto c = text.find(',');
    out.push_back(parse_double(text.substr(0, c), what));
    if (c == std::string_view::npos)
      return out;
    text = text.substr(c + 1);
  }
}

Outcome cmd_sweep(const Settings &s, std::ostream &body) {
  auto ps = s.parameters(true);
  if (!ps.has_variant)
    ps.potential.variant = Variant::PTSymmetric;
  const auto base = ps.potential;
  const auto dp0 = to_dimensionless(base, ps.units, 0.0);
  const auto betas =
      s.has("beta") ? parse_range(s.raw("beta"), "beta")
                    : std::vector<double>{dp0.beta};
  const auto gammas =
      s.has("gamma") ? parse_range(s.raw("gamma"), "gamma")
                     : std::vector<double>{dp0.gamma};
  const auto deltas =
      s.has("delta") ? parse_range(s.raw("delta"), "delta")
                     : std::vector<double>{dp0.delta};
  const auto qs = s.has("q") ? parse_list(s.raw("q"), "q")
                             : std::vector<double>{dp0.q};
  const double total = double(betas.size()) * double(gammas.size()) *
                       double(deltas.size()) * double(qs.size());
  if (total > kSweepLimit)
    throw std::invalid_argument("sweep of " + format_number(total) +
                                " points exceeds the 1e6 guard");
  if (base.variant != Variant::NonPTComplex)
    for (double d : deltas)
      if (d != 0.0)
        throw std::invalid_argument("delta must be 0 unless variant=nonpt");
  const int n_max = s.n_max(3);
  const Format f = s.format();
  const double scale = energy_scale(base, ps.units);
  const auto points = static_cast<std::size_t>(total);

  std::vector<std::string> chunks(points);
  std::vector<std::string> errors(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < points; idx = next++) {
      std::size_t rest = idx;
      const std::size_t iq = rest % qs.size();
      rest /= qs.size();
      const std::size_t id = rest % deltas.size();
      rest /= deltas.size();
      const std::size_t ig = rest % gammas.size();
      const std::size_t ib = rest / gammas.size();
      try {
        PotentialSpec spec = base;
        spec.V0R = betas[ib] * scale;
        spec.V0I = deltas[id] * scale;
        spec.C_override = gammas[ig] * scale;
        spec.q_override = qs[iq];
        const auto report = level_report(spec, ps.units, n_max);
        std::ostringstream os;
        const std::vector<std::string> tags = {
            format_number(betas[ib]), format_number(gammas[ig]),
            format_number(deltas[id]), format_number(qs[iq])};
        for (const auto &level : report.levels) {
          if (f == Format::Json) {
            ordered_json rec;
            rec["beta"] = num(betas[ib]);
            rec["gamma"] = num(gammas[ig]);
            rec["delta"] = num(deltas[id]);
            rec["q"] = num(qs[iq]);
            rec["n"] = level.n;
            rec["eps_re"] = num(level.epsilon.real());
            rec["eps_im"] = num(level.epsilon.imag());
            rec["E_re"] = num(level.energy.real());
            rec["E_im"] = num(level.energy.imag());
            rec["admissible"] = level.admissible;
            rec["reason"] = to_string(level.reason);
            rec["empty_by_amgm"] = report.empty_by_amgm;
            os << rec.dump() << '\n';
          } else {
            auto fields = tags;
            const auto rest_fields = spectrum_fields(level);
            fields.insert(fields.end(), rest_fields.begin(), rest_fields.end());
            fields.push_back(report.empty_by_amgm ? "true" : "false");
            write_csv_row(os, fields);
          }
        }
        chunks[idx] = os.str();
      } catch (const std::exception &e) {
        errors[idx] = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto nthreads =
      static_cast<unsigned>(std::min<std::size_t>({hw, 8u, points}));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  for (std::size_t i = 0; i < points; ++i)
    if (!errors[i].empty())
      return {kInternalConsistency,
              "sweep point " + std::to_string(i) + ": " + errors[i], false};

  if (f == Format::Json) {
    ordered_json head;
    head["schema"] = "sweep";
    head["version"] = kVersion;
    head["variant"] = to_string(base.variant);
    body << head.dump() << '\n';
  } else {
    body << schema_header("sweep") << '\n';
    std::vector<std::string> cols = {"beta", "gamma", "delta", "q"};
    for (auto &c : spectrum_columns())
      cols.push_back(c);
    cols.push_back("empty_by_amgm");
    write_csv_row(body, cols);
  }
  for (const auto &c : chunks)
    body << c;
  return {};
}

KeyValueMap read_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  auto kv = parse_key_values(ss.str());
  for (const auto &entry : kv)
    if (!is_known_key(entry.first))
      throw std::invalid_argument("config: unknown key '" + entry.first + "'");
  return kv;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Generalized Woods-Saxon spectra by the Nikiforov-Uvarov method",
               "ws-spectra"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option *>> options;
  std::string config_path;
  app.add_option("--config", config_path, "key=value parameter file");
  for (const auto &k : kGlobalKeys)
    options.emplace_back(k.key, app.add_option(k.flag, values[k.key], k.help));

  std::map<std::string, CLI::App *> subs;
  const std::map<std::string, std::string> descriptions = {
      {"spectrum", "closed-form levels with admissibility diagnostics"},
      {"wavefunction", "sample a normalized eigenfunction on a grid"},
      {"verify", "run the invariant suite"},
      {"nu-solve", "resolve branches and solve a user NU problem"},
      {"sweep", "Cartesian sweep over beta, gamma, delta, q"},
      {"check-symmetry", "PT-symmetry defect of the potential"},
  };
  for (const auto &c : command_keys()) {
    auto *sub = app.add_subcommand(c.command, descriptions.at(c.command));
    for (const auto &k : c.keys)
      options.emplace_back(k.key,
                           sub->add_option(k.flag, values[k.key], k.help));
    subs[c.command] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    app.exit(e, out, err);
    return kUsage;
  }

  std::string command;
  for (const auto &[name, sub] : subs)
    if (sub->parsed())
      command = name;

  Outcome outcome;
  std::ostringstream body;
  std::string out_path;
  try {
    KeyValueMap kv;
    if (!config_path.empty())
      kv = read_config(config_path);
    for (const auto &[key, opt] : options)
      if (opt->count() > 0)
        kv[key] = values[key];
    const Settings settings(std::move(kv));
    settings.format();
    if (settings.has("out"))
      out_path = settings.raw("out");

    if (command == "spectrum")
      outcome = cmd_spectrum(settings, body);
    else if (command == "wavefunction")
      outcome = cmd_wavefunction(settings, body);
    else if (command == "verify")
      outcome = cmd_verify(settings, body);
    else if (command == "nu-solve")
      outcome = cmd_nu_solve(settings, body);
    else if (command == "sweep")
      outcome = cmd_sweep(settings, body);
    else
      outcome = cmd_check_symmetry(settings, body);
  } catch (const std::invalid_argument &e) {
    err << "ws-spectra: error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range &e) {
    err << "ws-spectra: error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    err << "ws-spectra: internal consistency error: " << e.what() << '\n';
    return kInternalConsistency;
  }

  if (!outcome.message.empty())
    err << "ws-spectra: " << outcome.message << '\n';
  if (outcome.emit) {
    if (out_path.empty()) {
      out << body.str();
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        err << "ws-spectra: error: cannot write '" << out_path << "'\n";
        return kUsage;
      }
      file << body.str();
    }
  }
  return outcome.code;
}

} // namespace wsspec::cli
