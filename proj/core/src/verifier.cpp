#include "wsspec/verifier.hpp"

#include "wsspec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wsspec {

void Grid1D::validate() const {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_hi > x_lo))
    throw std::invalid_argument("grid: need finite x_lo < x_hi");
  if (n_points < 16)
    throw std::invalid_argument("grid: need at least 16 points");
}

double Tridiagonal::gershgorin_scale() const {
  double scale = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double r = 0.0;
    if (i > 0)
      r += std::abs(off[i - 1]);
    if (i < off.size())
      r += std::abs(off[i]);
    scale = std::max(scale, std::abs(diag[i]) + r);
  }
  return scale;
}

namespace {

std::pair<double, double> gershgorin_bounds(const Tridiagonal &t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    double r = 0.0;
    if (i > 0)
      r += std::abs(t.off[i - 1]);
    if (i < t.off.size())
      r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

} // namespace

Tridiagonal fd_hamiltonian(const RealPotential &V, const UnitsConfig &units,
                           const Grid1D &grid) {
  grid.validate();
  units.validate();
  const double h = grid.spacing();
  const double kinetic = units.hbar * units.hbar / (2.0 * units.mass * h * h);
  const int n = grid.n_points - 2;
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(std::max(0, n - 1), -kinetic);
  for (int i = 0; i < n; ++i) {
    const double v = V(grid.x(i + 1));
    if (!std::isfinite(v))
      throw DomainError("potential not finite on the oracle grid");
    t.diag[i] = 2.0 * kinetic + v;
  }
  return t;
}

int sturm_count(const Tridiagonal &t, double shift) {
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = t.diag[i] - shift - (i == 0 ? 0.0 : e2 / d);
    if (d == 0.0)
      d = -tiny;
    if (d < 0.0)
      ++count;
  }
  return count;
}

std::vector<double> sturm_bisection_eigenvalues(const Tridiagonal &t,
                                                int count, double rel_tol) {
  if (count < 0 || static_cast<std::size_t>(count) > t.diag.size())
    throw std::invalid_argument("sturm_bisection: count out of range");
  const auto [glo, ghi] = gershgorin_bounds(t);
  std::vector<double> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    double lo = glo;
    double hi = ghi;
    // Invariant: count(lo) <= j < count(hi).
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi)
        break;
      if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)))
        break;
      if (sturm_count(t, mid) > j)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<double> ql_eigenvalues(const Tridiagonal &t) {
  const auto n = static_cast<Eigen::Index>(t.diag.size());
  Eigen::VectorXd d(n);
  Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i)
    d[i] = t.diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    e[i] = t.off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("tridiagonal QL did not converge", cplx(0.0), 0);
  std::vector<double> out(solver.eigenvalues().begin(),
                          solver.eigenvalues().end());
  std::sort(out.begin(), out.end());
  return out;
}

OracleResult hermitian_oracle(const RealPotential &V, const UnitsConfig &units,
                              const Grid1D &grid, int k_lowest) {
  grid.validate();
  if (k_lowest < 1)
    throw std::invalid_argument("hermitian_oracle: k_lowest must be >= 1");
  if (4 * k_lowest > grid.n_points)
    throw ResolutionError("grid too coarse: need k_lowest <= n_points/4");
  const auto t = fd_hamiltonian(V, units, grid);
  OracleResult r;
  r.grid = grid;
  r.eigenvalues = sturm_bisection_eigenvalues(t, k_lowest, 1e-12);
  return r;
}

OracleResult hermitian_oracle(const PotentialSpec &spec,
                              const UnitsConfig &units, const Grid1D &grid,
                              int k_lowest) {
  if (spec.variant != Variant::Hermitian)
    throw std::invalid_argument("hermitian_oracle: Hermitian variant only");
  spec.validate();
  return hermitian_oracle(
      [&spec](double x) { return evaluate_potential(spec, x).real(); }, units,
      grid, k_lowest);
}

Grid1D default_oracle_grid(const PotentialSpec &spec, int n_points) {
  const double a = 1.0 / (2.0 * spec.steepness());
  return {spec.R0 - 20.0 * a, spec.R0 + 20.0 * a, n_points};
}

ConvergenceResult convergence_study(const RealPotential &V,
                                    const UnitsConfig &units,
                                    std::span<const Grid1D> grids, int level) {
  if (grids.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 grids");
  if (level < 0)
    throw std::invalid_argument("convergence_study: level must be >= 0");
  ConvergenceResult r;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    grids[i].validate();
    const double h = grids[i].spacing();
    if (i > 0 && !(h < r.spacings.back()))
      throw std::invalid_argument(
          "convergence_study: spacings must strictly decrease");
    r.spacings.push_back(h);
    r.values.push_back(
        hermitian_oracle(V, units, grids[i], level + 1).eigenvalues[level]);
  }
  const std::size_t m = grids.size();
  const double h1 = r.spacings[m - 3], h2 = r.spacings[m - 2],
               h3 = r.spacings[m - 1];
  const double e1 = r.values[m - 3], e2 = r.values[m - 2],
               e3 = r.values[m - 1];
  const double d12 = e1 - e2, d23 = e2 - e3;
  if (d12 == 0.0 || d23 == 0.0 || (d12 > 0.0) != (d23 > 0.0))
    throw ConvergenceError("eigenvalue sequence is not monotone", e3,
                           static_cast<int>(m));
  const double target = std::log(d12 / d23);
  auto ratio = [&](double p) {
    return std::log((std::pow(h1, p) - std::pow(h2, p)) /
                    (std::pow(h2, p) - std::pow(h3, p)));
  };
  double plo = 1e-3, phi = 20.0;
  if ((ratio(plo) - target) * (ratio(phi) - target) > 0.0)
    throw ConvergenceError("observed order outside (0, 20]", e3,
                           static_cast<int>(m));
  for (int it = 0; it < 200 && phi - plo > 1e-14; ++it) {
    const double mid = 0.5 * (plo + phi);
    if ((ratio(plo) - target) * (ratio(mid) - target) <= 0.0)
      phi = mid;
    else
      plo = mid;
  }
  const double p = 0.5 * (plo + phi);
  const double C = d12 / (std::pow(h1, p) - std::pow(h2, p));
  r.limit = e3 - C * std::pow(h3, p);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double err = std::abs(r.values[i] - r.limit);
    r.errors.push_back(err);
    if (err <= 0.0)
      continue;
    const double lx = std::log(r.spacings[i]), ly = std::log(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++used;
  }
  if (used < 2)
    throw ConvergenceError("too few nonzero errors for a slope", r.limit, used);
  r.order = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  return r;
}

ConvergenceResult convergence_study(const PotentialSpec &spec,
                                    const UnitsConfig &units,
                                    std::span<const Grid1D> grids, int level) {
  if (spec.variant != Variant::Hermitian)
    throw std::invalid_argument("convergence_study: Hermitian variant only");
  return convergence_study(
      [&spec](double x) { return evaluate_potential(spec, x).real(); }, units,
      grids, level);
}

XResidual ode_residual_x(const ComplexPotential &V, const UnitsConfig &units,
                         cplx energy, const Sampler &psi, const Grid1D &grid) {
  grid.validate();
  units.validate();
  const double h = grid.spacing();
  const double k = 2.0 * units.mass / (units.hbar * units.hbar);
  std::vector<cplx> values(grid.n_points), pot(grid.n_points);
  double vmax = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    values[i] = psi(grid.x(i));
    pot[i] = V(grid.x(i));
  }
  for (int i = 2; i + 2 < grid.n_points; ++i)
    vmax = std::max(vmax, std::abs(pot[i]));
  XResidual r;
  double num = 0.0, den = 0.0;
  const double weight = k * (std::abs(energy) + vmax);
  for (int i = 2; i + 2 < grid.n_points; ++i) {
    const cplx d2 = (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] +
                     16.0 * values[i + 1] - values[i + 2]) /
                    (12.0 * h * h);
    const cplx res = d2 + k * (energy - pot[i]) * values[i];
    r.pointwise.push_back(res);
    num += std::norm(res);
    den += std::norm(weight * values[i]);
  }
  if (!std::isfinite(num) || !std::isfinite(den))
    throw DomainError("psi or V not finite on the residual grid");
  if (den < 1e-300)
    throw DegenerateParameterError("psi vanishes on the residual grid");
  r.rel_residual_norm = std::sqrt(num / den);
  return r;
}

XResidual ode_residual_x(const PotentialSpec &spec, const UnitsConfig &units,
                         cplx energy, const Sampler &psi, const Grid1D &grid) {
  spec.validate();
  return ode_residual_x(
      [&spec](double x) { return evaluate_potential(spec, x); }, units, energy,
      psi, grid);
}

namespace {

cplx q_coefficient(SpectralCase which, const DimensionlessParams &p, cplx s) {
  const cplx tail = 1.0 - p.q * s;
  if (which == SpectralCase::PT)
    return p.epsilon * tail * tail - p.beta * tail + p.gamma * s;
  return -p.epsilon * tail * tail + cplx(p.beta, p.delta) * tail - p.gamma * s;
}

void check_regular(const DimensionlessParams &p, cplx s) {
  if (std::abs(s) < 1e-12 || std::abs(1.0 - p.q * s) < 1e-12)
    throw DomainError("s-domain residual requested at a singular point");
}

} // namespace

cplx transformed_residual(SpectralCase which, const DimensionlessParams &p,
                          const FactorizedEigenfunction::Derivatives &d,
                          cplx s) {
  check_regular(p, s);
  const cplx tail = 1.0 - p.q * s;
  const cplx Q = q_coefficient(which, p, s) / (s * s * tail * tail);
  return d.second + d.first / s + Q * d.value;
}

double ode_residual_s(SpectralCase which, const DimensionlessParams &p,
                      const PsiDerivatives &psi,
                      std::span<const cplx> s_points) {
  if (s_points.empty())
    throw std::invalid_argument("ode_residual_s: no sample points");
  double worst = 0.0;
  for (const cplx s : s_points) {
    check_regular(p, s);
    const auto d = psi(s);
    const cplx tail = 1.0 - p.q * s;
    const cplx Q = q_coefficient(which, p, s) / (s * s * tail * tail);
    const cplx r = d.second + d.first / s + Q * d.value;
    const double scale =
        std::abs(d.second) + std::abs(d.first / s) + std::abs(Q * d.value);
    if (!std::isfinite(scale))
      throw DomainError("psi derivatives not finite");
    if (scale == 0.0)
      continue;
    worst = std::max(worst, std::abs(r) / scale);
  }
  return worst;
}

double ode_residual_s(SpectralCase which, const DimensionlessParams &p,
                      const FactorizedEigenfunction &psi,
                      std::span<const cplx> s_points) {
  return ode_residual_s(
      which, p, [&psi](cplx s) { return psi.derivatives(s); }, s_points);
}

ConsistentEigenpair consistent_eigenpair(SpectralCase which,
                                         const DimensionlessParams &params,
                                         int n, std::optional<cplx> epsilon) {
  if (n < 0 || n > kMaxLevelIndex)
    throw std::invalid_argument("consistent_eigenpair: n out of range");
  ConsistentEigenpair out;
  out.n = n;
  if (epsilon) {
    out.epsilon = *epsilon;
  } else if (which == SpectralCase::PT) {
    out.epsilon = pt_epsilon(n, params.beta, params.gamma, params.q);
  } else {
    out.epsilon = nonpt_epsilon_nu(n, params);
  }
  DimensionlessParams at = params;
  at.epsilon = out.epsilon;
  out.problem = woods_saxon_problem(which, at);
  const auto branches = resolve_branches(out.problem);
  out.residuals = branch_residuals(out.problem, n);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.residuals.size(); ++i) {
    const double a = std::abs(out.residuals[i]);
    if (a < best) {
      best = a;
      out.branch_index = i;
    }
  }
  out.min_residual = best;
  out.branch = branches.at(out.branch_index);
  out.psi = branch_eigenfunction(out.branch, out.problem, n);
  return out;
}

Window residual_window(const PotentialSpec &spec) {
  if (spec.variant == Variant::PTSymmetric) {
    const double period = std::numbers::pi / spec.alphaI;
    return {0.1 * period, 0.4 * period};
  }
  const double a = 1.0 / spec.alpha;
  return {-a, a};
}

DivergenceTable compare_report(std::span<const EnergyLevel> closed_form,
                               const OracleResult &oracle,
                               double matching_tolerance) {
  if (!(matching_tolerance >= 0.0))
    throw std::invalid_argument("compare_report: negative tolerance");
  DivergenceTable t;
  std::vector<bool> used(oracle.eigenvalues.size(), false);
  for (const auto &level : closed_form) {
    DivergenceRow row;
    row.n = level.n;
    row.closed_form = level.energy.real();
    std::size_t best = used.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (used[i])
        continue;
      const double d = std::abs(oracle.eigenvalues[i] - row.closed_form);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best < used.size()) {
      used[best] = true;
      row.oracle = oracle.eigenvalues[best];
      row.abs_deviation = best_dist;
      row.rel_deviation =
          best_dist / std::max(std::abs(row.closed_form),
                               std::numeric_limits<double>::min());
      row.within_tolerance = row.rel_deviation <= matching_tolerance;
    } else {
      row.abs_deviation = std::numeric_limits<double>::quiet_NaN();
      row.rel_deviation = std::numeric_limits<double>::quiet_NaN();
    }
    t.rows.push_back(row);
  }
  return t;
}

} // namespace wsspec
