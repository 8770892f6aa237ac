#ifndef WSSPEC_EIGENFUNCTIONS_HPP
#define WSSPEC_EIGENFUNCTIONS_HPP

#include "wsspec/nu_engine.hpp"
#include "wsspec/potential.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace wsspec {

struct JacobiParams {
  int n = 0;
  cplx a{};
  cplx b{};
};

/// P_n^{(a,b)}(x) by the three-term recurrence. Complex a, b, x allowed.
/// Throws DegenerateParameterError if a recurrence denominator drops below
/// 1e-14 in magnitude; throws std::invalid_argument for n outside [0, 64].
cplx jacobi(const JacobiParams &p, cplx x);

/// d/dx P_n^{(a,b)} = (n + a + b + 1)/2 * P_{n-1}^{(a+1,b+1)}.
cplx jacobi_derivative(const JacobiParams &p, cplx x);
cplx jacobi_second_derivative(const JacobiParams &p, cplx x);

/// s = -e^{2 i alphaI x} (PT) or s = -e^{2 alpha x} (Hermitian, non-PT).
/// Points on the negative real axis always carry arg s = +pi; for PT the
/// phase is reduced so that x and x + pi/alphaI give the same s.
cplx x_to_s(Variant variant, double steepness, double x);

/// Principal-log inverse of x_to_s. Throws DomainError for s = 0.
cplx s_to_principal_x(Variant variant, double steepness, cplx s);

struct WavefunctionSample {
  double x = 0.0;
  cplx s{};
  cplx psi{};
};

/// psi(s) = scale * s^A (1 - q s)^B P_n^{(a,b)}(1 - 2 q s), principal powers.
struct FactorizedEigenfunction {
  double q = 1.0;
  cplx s_exponent{};    // A
  cplx tail_exponent{}; // B
  JacobiParams jacobi;
  cplx scale{1.0};

  struct Derivatives {
    cplx value, first, second;
  };

  /// Throws SingularPointError at s = 0 with Re A < 0 or at s = 1/q with
  /// Re B < 0.
  cplx operator()(cplx s) const;
  /// Exact psi, psi', psi'' in s.
  Derivatives derivatives(cplx s) const;
};

struct PsiOptions {
  /// Overrides the principal sqrt(beta - eps) (PT) or sqrt(eps - beta - i
  /// delta) (non-PT); used to pick the sign that closes the quantization
  /// condition.
  std::optional<cplx> root;
  cplx scale{1.0};
};

/// s^u (1 - qs)^{nu/2} P_n^{(2u, nu-1)}(1 - 2qs), u = sqrt(beta - eps).
FactorizedEigenfunction pt_eigenfunction(int n, const DimensionlessParams &p,
                                         PsiOptions options = {});
/// s^u (1 - qs)^{kappa/2} P_n^{(2u, kappa-1)}(1 - 2qs),
/// u = sqrt(eps - beta - i delta).
FactorizedEigenfunction nonpt_eigenfunction(int n,
                                            const DimensionlessParams &p,
                                            PsiOptions options = {});

WavefunctionSample psi_pt(int n, const DimensionlessParams &p, double alphaI,
                          double x, PsiOptions options = {});
WavefunctionSample psi_nonpt(int n, const DimensionlessParams &p, double alpha,
                             double x, PsiOptions options = {});

/// Eigenfunction assembled from a resolved branch: phi from pi/sigma, the
/// Jacobi parameters from the weight function. Requires sigma = s(1 - q s).
FactorizedEigenfunction branch_eigenfunction(const NUBranch &branch,
                                             const NUProblem &problem, int n);

struct Window {
  double lo = 0.0;
  double hi = 1.0;
};

using Sampler = std::function<cplx(double)>;

/// Scale B making the trapezoid integral of |B psi|^2 over the window equal
/// to one. Throws NormalizationError if the integral is below 1e-280.
double normalize(const Sampler &sampler, Window window, int points);

/// Uniform samples with the last point pinned to window.hi.
std::vector<WavefunctionSample>
sample_wavefunction(const FactorizedEigenfunction &f, Variant variant,
                    double steepness, Window window, int points);

} // namespace wsspec

#endif
