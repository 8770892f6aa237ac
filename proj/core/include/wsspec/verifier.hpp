#ifndef WSSPEC_VERIFIER_HPP
#define WSSPEC_VERIFIER_HPP

#include "wsspec/eigenfunctions.hpp"
#include "wsspec/nu_engine.hpp"
#include "wsspec/potential.hpp"
#include "wsspec/spectra.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wsspec {

/// Every tolerance the checks use, in one place.
struct VerifierTolerances {
  double quantization = 1e-10; // min over branches |lambda - lambda_n|
  double s_residual = 1e-10;   // transformed-equation relative residual
  double x_residual = 1e-6;    // Schroedinger relative residual, h = 1e-3
  double pt_defect = 1e-12;
  double bisection = 1e-12; // relative bracket width
  double ql_agreement = 1e-10;
  double x_step = 1e-3;
};

/// Uniform grid including both Dirichlet wall points.
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_points = 16;

  double spacing() const { return (x_hi - x_lo) / (n_points - 1); }
  double x(int i) const {
    return i + 1 == n_points ? x_hi : x_lo + spacing() * i;
  }
  void validate() const;
};

enum class Boundary { Dirichlet };

struct OracleResult {
  std::vector<double> eigenvalues; // ascending
  Grid1D grid;
  Boundary boundary = Boundary::Dirichlet;
  std::optional<double> convergence_order;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off; // size diag.size() - 1

  double gershgorin_scale() const;
};

using RealPotential = std::function<double(double)>;
using ComplexPotential = std::function<cplx(double)>;

/// -(hbar^2/2m) D2 + V on the interior points of `grid`, 3-point stencil.
Tridiagonal fd_hamiltonian(const RealPotential &V, const UnitsConfig &units,
                           const Grid1D &grid);

/// Number of eigenvalues strictly below `shift` (LDL^T inertia).
int sturm_count(const Tridiagonal &t, double shift);

/// The `count` lowest eigenvalues by Sturm-sequence bisection.
std::vector<double> sturm_bisection_eigenvalues(const Tridiagonal &t,
                                                int count,
                                                double rel_tol = 1e-12);

/// All eigenvalues, ascending, by implicit QL/QR on the tridiagonal form.
std::vector<double> ql_eigenvalues(const Tridiagonal &t);

/// k lowest Dirichlet eigenvalues of the 1D Hamiltonian. Throws
/// ResolutionError when 4 k_lowest > n_points.
OracleResult hermitian_oracle(const RealPotential &V, const UnitsConfig &units,
                              const Grid1D &grid, int k_lowest);
OracleResult hermitian_oracle(const PotentialSpec &spec,
                              const UnitsConfig &units, const Grid1D &grid,
                              int k_lowest);

/// [R0 - 20a, R0 + 20a] with a = 1/(2 alpha).
Grid1D default_oracle_grid(const PotentialSpec &spec, int n_points);

struct ConvergenceResult {
  double order = 0.0;
  double limit = 0.0;
  std::vector<double> spacings;
  std::vector<double> values;
  std::vector<double> errors;
};

/// Observed order of the `level`-th (0-based) eigenvalue under refinement.
/// The limit is extrapolated from the three finest grids without assuming an
/// order; the order is the least-squares slope of log|E - limit| vs log h.
ConvergenceResult convergence_study(const RealPotential &V,
                                    const UnitsConfig &units,
                                    std::span<const Grid1D> grids, int level);
ConvergenceResult convergence_study(const PotentialSpec &spec,
                                    const UnitsConfig &units,
                                    std::span<const Grid1D> grids, int level);

struct XResidual {
  double rel_residual_norm = 0.0;
  std::vector<cplx> pointwise;
};

/// r(x) = psi'' + (2m/hbar^2)(E - V) psi with a 5-point psi''; two points
/// at each end are excluded.
XResidual ode_residual_x(const ComplexPotential &V, const UnitsConfig &units,
                         cplx energy, const Sampler &psi, const Grid1D &grid);
XResidual ode_residual_x(const PotentialSpec &spec, const UnitsConfig &units,
                         cplx energy, const Sampler &psi, const Grid1D &grid);

using PsiDerivatives =
    std::function<FactorizedEigenfunction::Derivatives(cplx s)>;

/// Raw residual of the transformed equation in s,
///   psi'' + psi'/s + Q(s) psi / (s^2 (1 - q s)^2),
/// with Q = eps(1-qs)^2 - beta(1-qs) + gamma s (PT) or
///      Q = -eps(1-qs)^2 + (beta + i delta)(1-qs) - gamma s (non-PT).
cplx transformed_residual(SpectralCase which, const DimensionlessParams &p,
                          const FactorizedEigenfunction::Derivatives &d,
                          cplx s);

/// Max over s_points of |residual| / (|psi''| + |psi'/s| + |Q psi/...|).
/// Throws DomainError at s = 0 or s = 1/q.
double ode_residual_s(SpectralCase which, const DimensionlessParams &p,
                      const PsiDerivatives &psi,
                      std::span<const cplx> s_points);
double ode_residual_s(SpectralCase which, const DimensionlessParams &p,
                      const FactorizedEigenfunction &psi,
                      std::span<const cplx> s_points);

/// A closed-form epsilon paired with the branch that closes its
/// quantization condition and the eigenfunction built from that branch.
struct ConsistentEigenpair {
  int n = 0;
  cplx epsilon;
  std::size_t branch_index = 0;
  NUProblem problem;
  NUBranch branch;
  FactorizedEigenfunction psi;
  std::vector<cplx> residuals;
  double min_residual = 0.0;
};

/// epsilon from pt_epsilon (PT) or nonpt_epsilon_nu (non-PT) unless
/// overridden; the branch is the one with the smallest residual.
ConsistentEigenpair consistent_eigenpair(SpectralCase which,
                                         const DimensionlessParams &params,
                                         int n,
                                         std::optional<cplx> epsilon = {});

/// Real-x window inside one principal strip: theta in [0.2 pi, 0.8 pi] for PT,
/// 2 alpha x in [-2, 2] otherwise.
Window residual_window(const PotentialSpec &spec);

struct DivergenceRow {
  int n = 0;
  double closed_form = 0.0;
  std::optional<double> oracle;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  bool within_tolerance = false;
};

struct DivergenceTable {
  std::string label =
      "diagnostic: closed-form levels are under test, not assumed correct";
  std::vector<DivergenceRow> rows;
};

/// Greedy nearest matching of closed-form energies (real parts) against
/// oracle eigenvalues; each oracle value is used at most once.
DivergenceTable compare_report(std::span<const EnergyLevel> closed_form,
                               const OracleResult &oracle,
                               double matching_tolerance);

} // namespace wsspec

#endif
