#include "wsspec/nu_engine.hpp"

#include "wsspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsspec {

namespace {

constexpr double kDuplicateTol = 1e-12;
constexpr double kSquareTol = 1e-9;
constexpr double kZeroTol = 1e-14;
constexpr int kMaxRodriguesDegree = 32;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Principal square root; branch cut along the negative real axis.
cplx principal_sqrt(cplx z) { return std::sqrt(z); }

// Principal power z^a = exp(a Log z), with 0^a = 0 for Re a > 0.
cplx principal_pow(cplx z, cplx a) {
  if (z == cplx(0.0)) {
    if (a == cplx(0.0))
      return 1.0;
    return 0.0;
  }
  return std::exp(a * std::log(z));
}

Polynomial multiply(const QuadPoly &a, const Polynomial &p) {
  Polynomial out;
  out.coeffs.assign(p.coeffs.size() + 2, cplx(0.0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    out.coeffs[i] += a.c0 * p.coeffs[i];
    out.coeffs[i + 1] += a.c1 * p.coeffs[i];
    out.coeffs[i + 2] += a.c2 * p.coeffs[i];
  }
  return out;
}

void add_into(Polynomial &acc, const Polynomial &p) {
  if (acc.coeffs.size() < p.coeffs.size())
    acc.coeffs.resize(p.coeffs.size(), cplx(0.0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    acc.coeffs[i] += p.coeffs[i];
}

void trim_to(Polynomial &p, std::size_t size) {
  if (p.coeffs.size() > size)
    p.coeffs.resize(size);
}

struct QuadRoots {
  cplx r1, r2;
};

// Roots of c2 s^2 + c1 s + c0 without cancellation; |r1| <= |r2|.
QuadRoots stable_quadratic_roots(cplx c2, cplx c1, cplx c0) {
  const cplx sq = principal_sqrt(c1 * c1 - 4.0 * c2 * c0);
  const cplx plus = c1 + sq;
  const cplx minus = c1 - sq;
  const cplx big = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
  QuadRoots roots{big / c2, big == cplx(0.0) ? cplx(0.0) : c0 / big};
  if (std::abs(roots.r2) < std::abs(roots.r1))
    std::swap(roots.r1, roots.r2);
  return roots;
}

} // namespace

int QuadPoly::degree(double tol) const {
  if (std::abs(c2) > tol)
    return 2;
  if (std::abs(c1) > tol)
    return 1;
  if (std::abs(c0) > tol)
    return 0;
  return -1;
}

double QuadPoly::scale() const {
  return std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
}

bool QuadPoly::is_finite() const {
  return finite(c0) && finite(c1) && finite(c2);
}

cplx Polynomial::operator()(cplx s) const {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
  return d;
}

int Polynomial::degree(double tol) const {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (std::abs(coeffs[i]) > tol)
      return static_cast<int>(i);
  return -1;
}

void NUProblem::validate() const {
  if (!sigma.is_finite() || !tau_tilde.is_finite() || !sigma_tilde.is_finite())
    throw std::invalid_argument("NU problem has non-finite coefficients");
  if (sigma.degree() < 0)
    throw std::invalid_argument("sigma must not vanish identically");
  if (tau_tilde.c2 != cplx(0.0))
    throw std::invalid_argument("tau~ must have degree <= 1");
}

Radicand radicand(const NUProblem &p) {
  const QuadPoly half = 0.5 * cplx(1.0) * (p.sigma.derivative() - p.tau_tilde);
  const QuadPoly square{half.c0 * half.c0, 2.0 * half.c0 * half.c1,
                        half.c1 * half.c1};
  return {square - p.sigma_tilde, p.sigma};
}

std::vector<cplx> k_candidates(const NUProblem &p) {
  p.validate();
  const Radicand r = radicand(p);
  const auto &a = r.base;
  const auto &b = r.slope;

  // disc(k) = (a1 + k b1)^2 - 4 (a2 + k b2)(a0 + k b0) = A k^2 + B k + C
  const cplx A = b.c1 * b.c1 - 4.0 * b.c2 * b.c0;
  const cplx B = 2.0 * a.c1 * b.c1 - 4.0 * (a.c2 * b.c0 + b.c2 * a.c0);
  const cplx C = a.c1 * a.c1 - 4.0 * a.c2 * a.c0;
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});

  if (scale == 0.0) {
    // Every k squares the radicand; take the one that clears its constant.
    if (b.c0 != cplx(0.0))
      return {-a.c0 / b.c0};
    return {cplx(0.0)};
  }
  if (std::abs(A) <= kZeroTol * scale) {
    if (std::abs(B) <= kZeroTol * scale)
      throw StructuralError("radicand discriminant is a nonzero constant; "
                            "no finite k exists");
    return {-C / B};
  }

  const cplx sq = principal_sqrt(B * B - 4.0 * A * C);
  // Stable pair; track which one is (-B - sq)/2A.
  cplx k_minus, k_plus;
  if (std::abs(B + sq) >= std::abs(B - sq)) {
    const cplx big = -0.5 * (B + sq);
    k_minus = big / A;
    k_plus = C / big;
  } else {
    const cplx big = -0.5 * (B - sq);
    k_plus = big / A;
    k_minus = C / big;
  }
  const double mag = std::max({1.0, std::abs(k_minus), std::abs(k_plus)});
  if (std::abs(k_minus - k_plus) <= kDuplicateTol * mag)
    return {0.5 * (k_minus + k_plus)};
  return {k_minus, k_plus};
}

std::array<QuadPoly, 2> pi_branches(const NUProblem &p, cplx k) {
  const Radicand rad = radicand(p);
  const QuadPoly r = rad.at(k);
  const double scale = std::max(
      {std::abs(rad.base.c0) + std::abs(k * rad.slope.c0),
       std::abs(rad.base.c1) + std::abs(k * rad.slope.c1),
       std::abs(rad.base.c2) + std::abs(k * rad.slope.c2)});

  // Extract p1 s + p0 with (p1 s + p0)^2 = r, rooting the larger end.
  cplx p0 = 0.0, p1 = 0.0;
  if (std::abs(r.c2) >= std::abs(r.c0)) {
    p1 = principal_sqrt(r.c2);
    p0 = p1 == cplx(0.0) ? cplx(0.0) : r.c1 / (2.0 * p1);
  } else {
    p0 = principal_sqrt(r.c0);
    p1 = r.c1 / (2.0 * p0);
  }
  const double defect = std::abs(p1 * p1 - r.c2) +
                        std::abs(2.0 * p0 * p1 - r.c1) +
                        std::abs(p0 * p0 - r.c0);
  if (defect > kSquareTol * std::max(scale, 1e-300))
    throw ConsistencyError("radicand is not a perfect square at k = (" +
                           std::to_string(k.real()) + ", " +
                           std::to_string(k.imag()) + "), defect " +
                           std::to_string(defect));

  const QuadPoly half = 0.5 * cplx(1.0) * (p.sigma.derivative() - p.tau_tilde);
  const QuadPoly root{p0, p1, 0.0};
  return {half - root, half + root};
}

std::vector<NUBranch> resolve_branches(const NUProblem &p) {
  const auto ks = k_candidates(p);
  std::vector<NUBranch> out;
  out.reserve(2 * ks.size());
  for (std::size_t ik = 0; ik < ks.size(); ++ik) {
    const auto pis = pi_branches(p, ks[ik]);
    for (int ip = 0; ip < 2; ++ip) {
      NUBranch br;
      br.k = ks[ik];
      br.pi = pis[ip];
      br.tau = p.tau_tilde + 2.0 * cplx(1.0) * br.pi;
      br.lambda = br.k + br.pi.c1;
      br.k_sign = ik == 0 ? -1 : 1;
      br.pi_sign = ip == 0 ? -1 : 1;
      br.admissible = br.tau.c1.real() < 0.0;
      out.push_back(br);
    }
  }
  return out;
}

cplx lambda_n(const NUProblem &p, const NUBranch &branch, int n) {
  if (n < 0)
    throw std::invalid_argument("lambda_n: n must be >= 0");
  const double nn = n;
  // sigma''/2 == c2
  return -nn * branch.tau.c1 - nn * (nn - 1.0) * p.sigma.c2;
}

std::vector<cplx> branch_residuals(const NUProblem &p, int n) {
  std::vector<cplx> out;
  for (const auto &br : resolve_branches(p))
    out.push_back(br.lambda - lambda_n(p, br, n));
  return out;
}

cplx quantization_residual(const ProblemFamily &family,
                           std::size_t branch_index, int n, cplx epsilon) {
  const NUProblem problem = family(epsilon);
  const auto branches = resolve_branches(problem);
  if (branch_index >= branches.size())
    throw std::out_of_range("branch index " + std::to_string(branch_index) +
                            " out of range (" +
                            std::to_string(branches.size()) + " branches)");
  const auto &br = branches[branch_index];
  return br.lambda - lambda_n(problem, br, n);
}

EigenSolution solve_eigenvalue(const ProblemFamily &family,
                               std::size_t branch_index, int n, cplx seed,
                               SecantOptions options) {
  auto f = [&](cplx e) {
    return quantization_residual(family, branch_index, n, e);
  };
  cplx x0 = seed;
  cplx f0 = f(x0);
  if (std::abs(f0) < options.tolerance)
    return {x0, f0, 0};
  cplx x1 = seed + 1e-4 * std::max(1.0, std::abs(seed));
  cplx f1 = f(x1);
  for (int it = 1; it <= options.max_iterations; ++it) {
    if (std::abs(f1) < options.tolerance)
      return {x1, f1, it};
    const cplx df = f1 - f0;
    if (df == cplx(0.0) || !finite(df))
      throw ConvergenceError("secant step degenerate (flat residual)", x1, it);
    const cplx x2 = x1 - f1 * (x1 - x0) / df;
    if (!finite(x2))
      throw ConvergenceError("secant iterate diverged", x1, it);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
  }
  if (std::abs(f1) < options.tolerance)
    return {x1, f1, options.max_iterations};
  throw ConvergenceError("secant iteration did not converge in " +
                             std::to_string(options.max_iterations) +
                             " iterations",
                         x1, options.max_iterations);
}

cplx FactorizedWeight::operator()(cplx s) const {
  switch (kind) {
  case WeightKind::Gaussian:
    return std::exp(s * (exp_linear + s * exp_quadratic));
  case WeightKind::PowerExponential:
    return principal_pow(s - root1, exponent1) * std::exp(exp_linear * s);
  case WeightKind::TwoPower:
    return principal_pow(s - root1, exponent1) *
           principal_pow(1.0 - s / root2, exponent2);
  }
  return 0.0;
}

cplx FactorizedWeight::log_derivative(cplx s) const {
  switch (kind) {
  case WeightKind::Gaussian:
    return exp_linear + 2.0 * exp_quadratic * s;
  case WeightKind::PowerExponential:
    return exponent1 / (s - root1) + exp_linear;
  case WeightKind::TwoPower:
    return exponent1 / (s - root1) + exponent2 / (s - root2);
  }
  return 0.0;
}

FactorizedWeight factorize_log_derivative(const QuadPoly &numerator,
                                          const QuadPoly &sigma) {
  if (numerator.c2 != cplx(0.0))
    throw std::invalid_argument("log-derivative numerator must be linear");
  const double tol = kZeroTol * sigma.scale();
  FactorizedWeight w;
  switch (sigma.degree(tol)) {
  case 0:
    w.kind = WeightKind::Gaussian;
    w.exp_linear = numerator.c0 / sigma.c0;
    w.exp_quadratic = numerator.c1 / (2.0 * sigma.c0);
    return w;
  case 1: {
    // (t0 + t1 s) / (c1 (s - r)) = t1/c1 + (t0 + t1 r) / (c1 (s - r))
    w.kind = WeightKind::PowerExponential;
    w.root1 = -sigma.c0 / sigma.c1;
    w.exp_linear = numerator.c1 / sigma.c1;
    w.exponent1 = (numerator.c0 + numerator.c1 * w.root1) / sigma.c1;
    return w;
  }
  case 2: {
    const auto roots = stable_quadratic_roots(sigma.c2, sigma.c1, sigma.c0);
    if (std::abs(roots.r1 - roots.r2) <=
        1e-12 * std::max(1.0, std::abs(roots.r2)))
      throw UnsupportedSigmaError(
          "sigma has a double root; weight is not a power product");
    w.kind = WeightKind::TwoPower;
    w.root1 = roots.r1;
    w.root2 = roots.r2;
    const cplx gap = sigma.c2 * (roots.r1 - roots.r2);
    w.exponent1 = numerator(roots.r1) / gap;
    w.exponent2 = -numerator(roots.r2) / gap;
    return w;
  }
  default:
    throw UnsupportedSigmaError("sigma vanishes identically");
  }
}

FactorizedWeight weight_function(const NUBranch &branch, const NUProblem &p) {
  return factorize_log_derivative(branch.tau - p.sigma.derivative(), p.sigma);
}

FactorizedWeight phi_factor(const NUBranch &branch, const NUProblem &p) {
  return factorize_log_derivative(branch.pi, p.sigma);
}

Polynomial rodrigues_polynomial(const NUBranch &branch, const NUProblem &p,
                                int n) {
  if (n < 0 || n > kMaxRodriguesDegree)
    throw std::invalid_argument("rodrigues_polynomial: n must be in [0, 32]");
  // Rejects sigma outside the supported families before differentiating.
  (void)weight_function(branch, p);

  // d^j/ds^j [sigma^n rho] = sigma^{n-j} rho p_j with
  //   p_{j+1} = ((n - j - 1) sigma' + tau) p_j + sigma p_j'.
  const QuadPoly dsigma = p.sigma.derivative();
  Polynomial pj{{cplx(1.0)}};
  for (int j = 0; j < n; ++j) {
    const QuadPoly factor =
        cplx(static_cast<double>(n - j - 1)) * dsigma + branch.tau;
    Polynomial next = multiply(factor, pj);
    add_into(next, multiply(p.sigma, pj.derivative()));
    trim_to(next, static_cast<std::size_t>(j) + 2);
    pj = std::move(next);
  }
  double factorial = 1.0;
  for (int j = 2; j <= n; ++j)
    factorial *= j;
  for (auto &c : pj.coeffs)
    c /= factorial;
  return pj;
}

} // namespace wsspec
