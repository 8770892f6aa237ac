#ifndef WSSPEC_NU_ENGINE_HPP
#define WSSPEC_NU_ENGINE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace wsspec {

using cplx = std::complex<double>;

/// c0 + c1 s + c2 s^2 with complex coefficients.
struct QuadPoly {
  cplx c0{}, c1{}, c2{};

  cplx operator()(cplx s) const { return c0 + s * (c1 + s * c2); }
  QuadPoly derivative() const { return {c1, 2.0 * c2, 0.0}; }
  /// Highest index with |c| > tol; -1 for the zero polynomial.
  int degree(double tol = 0.0) const;
  double scale() const;
  bool is_finite() const;

  friend QuadPoly operator+(const QuadPoly &a, const QuadPoly &b) {
    return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2};
  }
  friend QuadPoly operator-(const QuadPoly &a, const QuadPoly &b) {
    return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2};
  }
  friend QuadPoly operator*(cplx k, const QuadPoly &a) {
    return {k * a.c0, k * a.c1, k * a.c2};
  }
  bool operator==(const QuadPoly &) const = default;
};

/// Dense polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<cplx> coeffs;

  cplx operator()(cplx s) const;
  Polynomial derivative() const;
  int degree(double tol = 0.0) const;
};

/// psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0.
struct NUProblem {
  QuadPoly sigma;
  QuadPoly tau_tilde;
  QuadPoly sigma_tilde;

  /// Throws std::invalid_argument if sigma vanishes, tau~ has degree > 1,
  /// or any coefficient is non-finite.
  void validate() const;
};

/// One (k, pi) choice of the reduction psi = phi(s) y(s).
struct NUBranch {
  cplx k;
  QuadPoly pi;
  QuadPoly tau; // tau~ + 2 pi
  cplx lambda;  // k + pi'
  int k_sign = -1;
  int pi_sign = -1;
  bool admissible = false; // Re tau' < 0
};

/// The radicand ((sigma' - tau~)/2)^2 - sigma~ + k sigma, split as
/// base + k * slope.
struct Radicand {
  QuadPoly base;
  QuadPoly slope;

  QuadPoly at(cplx k) const { return base + k * slope; }
};

Radicand radicand(const NUProblem &p);

/// All k that make the radicand a perfect square, minus-root first.
/// Throws StructuralError when no finite k exists.
std::vector<cplx> k_candidates(const NUProblem &p);

/// pi = (sigma' - tau~)/2 -/+ sqrt(radicand); minus sign first.
/// Throws ConsistencyError if the radicand at k is not a perfect square.
std::array<QuadPoly, 2> pi_branches(const NUProblem &p, cplx k);

/// Every (k, pi) pair in deterministic order: k minus-root first, then pi
/// minus-sign first. Inadmissible branches are kept and flagged.
std::vector<NUBranch> resolve_branches(const NUProblem &p);

/// lambda_n = -n tau' - n(n-1) sigma'' / 2.
cplx lambda_n(const NUProblem &p, const NUBranch &branch, int n);

/// lambda - lambda_n on every branch of p.
std::vector<cplx> branch_residuals(const NUProblem &p, int n);

using ProblemFamily = std::function<NUProblem(cplx epsilon)>;

/// lambda(eps) - lambda_n(eps) on branch `branch_index` of family(eps).
/// Throws std::out_of_range for a missing branch.
cplx quantization_residual(const ProblemFamily &family,
                           std::size_t branch_index, int n, cplx epsilon);

struct SecantOptions {
  double tolerance = 1e-11;
  int max_iterations = 200;
};

struct EigenSolution {
  cplx epsilon;
  cplx residual;
  int iterations = 0;
};

/// Complex secant iteration on the quantization residual.
/// Throws ConvergenceError carrying the last iterate.
EigenSolution solve_eigenvalue(const ProblemFamily &family,
                               std::size_t branch_index, int n, cplx seed,
                               SecantOptions options = {});

enum class WeightKind {
  Gaussian,         // exp(g1 s + g2 s^2); sigma constant
  PowerExponential, // (s - r1)^A exp(g1 s); sigma linear
  TwoPower          // (s - r1)^A (1 - s/r2)^B; sigma with two distinct roots
};

/// Closed-form solution f of f'/f = numerator/sigma for the canonical sigma
/// families. All powers use the principal logarithm.
struct FactorizedWeight {
  WeightKind kind = WeightKind::TwoPower;
  cplx root1{}, root2{};
  cplx exponent1{}, exponent2{};
  cplx exp_linear{}, exp_quadratic{};

  cplx operator()(cplx s) const;
  cplx log_derivative(cplx s) const;
};

FactorizedWeight factorize_log_derivative(const QuadPoly &numerator,
                                          const QuadPoly &sigma);

/// rho with (sigma rho)' = tau rho. Throws UnsupportedSigmaError for sigma
/// with a double root.
FactorizedWeight weight_function(const NUBranch &branch, const NUProblem &p);

/// phi with phi'/phi = pi/sigma.
FactorizedWeight phi_factor(const NUBranch &branch, const NUProblem &p);

/// y_n = (1/n!) rho^{-1} d^n/ds^n [sigma^n rho], n <= 32.
Polynomial rodrigues_polynomial(const NUBranch &branch, const NUProblem &p,
                                int n);

} // namespace wsspec

#endif
