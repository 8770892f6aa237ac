#include "wsspec/eigenfunctions.hpp"

#include "wsspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wsspec {

namespace {

constexpr double kRecurrenceGuard = 1e-14;
constexpr int kMaxJacobiDegree = 64;

cplx principal_pow(cplx z, cplx a) {
  if (z == cplx(0.0))
    return a == cplx(0.0) ? cplx(1.0) : cplx(0.0);
  return std::exp(a * std::log(z));
}

// Keep the negative real axis on the upper side of the cut.
cplx upper_side(cplx s) { return {s.real(), s.imag() + 0.0}; }

} // namespace

cplx jacobi(const JacobiParams &p, cplx x) {
  if (p.n < 0 || p.n > kMaxJacobiDegree)
    throw std::invalid_argument("jacobi: n must be in [0, 64]");
  const cplx a = p.a;
  const cplx b = p.b;
  if (p.n == 0)
    return 1.0;
  cplx prev = 1.0;
  cplx curr = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int m = 1; m < p.n; ++m) {
    const double md = m;
    const cplx s = 2.0 * md + a + b;
    const cplx den = 2.0 * (md + 1.0) * (md + a + b + 1.0) * s;
    if (std::abs(den) < kRecurrenceGuard)
      throw DegenerateParameterError(
          "jacobi recurrence denominator vanishes at step m = " +
          std::to_string(m));
    const cplx c1 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
    const cplx c2 = 2.0 * (md + a) * (md + b) * (s + 2.0);
    const cplx next = (c1 * curr - c2 * prev) / den;
    prev = curr;
    curr = next;
  }
  return curr;
}

cplx jacobi_derivative(const JacobiParams &p, cplx x) {
  if (p.n == 0)
    return 0.0;
  const cplx factor = (static_cast<double>(p.n) + p.a + p.b + 1.0) / 2.0;
  return factor * jacobi({p.n - 1, p.a + 1.0, p.b + 1.0}, x);
}

cplx jacobi_second_derivative(const JacobiParams &p, cplx x) {
  if (p.n <= 1)
    return 0.0;
  const cplx factor = (static_cast<double>(p.n) + p.a + p.b + 1.0) / 2.0;
  return factor * jacobi_derivative({p.n - 1, p.a + 1.0, p.b + 1.0}, x);
}

cplx x_to_s(Variant variant, double steepness, double x) {
  if (!std::isfinite(x))
    throw DomainError("x_to_s: non-finite x");
  if (variant == Variant::PTSymmetric) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double theta = 2.0 * steepness * x;
    double reduced = std::fmod(theta, two_pi);
    // Phases within rounding of a period boundary land on arg s = +pi.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(theta));
    if (reduced <= slack)
      reduced += two_pi;
    if (reduced >= two_pi - slack)
      return {-1.0, 0.0};
    return upper_side(std::polar(1.0, reduced - std::numbers::pi));
  }
  return upper_side(cplx(-std::exp(2.0 * steepness * x), 0.0));
}

cplx s_to_principal_x(Variant variant, double steepness, cplx s) {
  if (s == cplx(0.0))
    throw DomainError("s = 0 has no preimage");
  const cplx log_minus_s = std::log(-upper_side(s));
  if (variant == Variant::PTSymmetric)
    return log_minus_s / cplx(0.0, 2.0 * steepness);
  return log_minus_s / (2.0 * steepness);
}

cplx FactorizedEigenfunction::operator()(cplx s) const {
  const cplx tail = 1.0 - q * s;
  if (s == cplx(0.0) && s_exponent.real() < 0.0)
    throw SingularPointError("psi singular at s = 0 (Re exponent < 0)");
  if (tail == cplx(0.0) && tail_exponent.real() < 0.0)
    throw SingularPointError("psi singular at s = 1/q (Re exponent < 0)");
  return scale * principal_pow(s, s_exponent) *
         principal_pow(tail, tail_exponent) * wsspec::jacobi(jacobi, 1.0 - 2.0 * q * s);
}

FactorizedEigenfunction::Derivatives
FactorizedEigenfunction::derivatives(cplx s) const {
  const cplx tail = 1.0 - q * s;
  if (s == cplx(0.0) || tail == cplx(0.0))
    throw SingularPointError("derivatives requested at a branch point");
  const cplx phi =
      scale * principal_pow(s, s_exponent) * principal_pow(tail, tail_exponent);
  const cplx L = s_exponent / s - q * tail_exponent / tail;
  const cplx dL = -s_exponent / (s * s) - q * q * tail_exponent / (tail * tail);
  const cplx t = 1.0 - 2.0 * q * s;
  const cplx y = wsspec::jacobi(jacobi, t);
  const cplx dy = -2.0 * q * wsspec::jacobi_derivative(jacobi, t);
  const cplx d2y = 4.0 * q * q * wsspec::jacobi_second_derivative(jacobi, t);
  const cplx dphi = phi * L;
  const cplx d2phi = phi * (dL + L * L);
  return {phi * y, dphi * y + phi * dy, d2phi * y + 2.0 * dphi * dy + phi * d2y};
}

FactorizedEigenfunction pt_eigenfunction(int n, const DimensionlessParams &p,
                                         PsiOptions options) {
  const cplx u = options.root.value_or(std::sqrt(p.beta - p.epsilon));
  const cplx c = std::sqrt(cplx(1.0 - 4.0 * p.gamma / p.q, 0.0));
  FactorizedEigenfunction f;
  f.q = p.q;
  f.s_exponent = u;
  f.tail_exponent = (1.0 + c) / 2.0;
  f.jacobi = {n, 2.0 * u, c};
  f.scale = options.scale;
  return f;
}

FactorizedEigenfunction nonpt_eigenfunction(int n,
                                            const DimensionlessParams &p,
                                            PsiOptions options) {
  const cplx u = options.root.value_or(
      std::sqrt(p.epsilon - cplx(p.beta, p.delta)));
  const cplx c = std::sqrt(cplx(1.0 + 4.0 * p.gamma / p.q, 0.0));
  FactorizedEigenfunction f;
  f.q = p.q;
  f.s_exponent = u;
  f.tail_exponent = (1.0 + c) / 2.0;
  f.jacobi = {n, 2.0 * u, c};
  f.scale = options.scale;
  return f;
}

WavefunctionSample psi_pt(int n, const DimensionlessParams &p, double alphaI,
                          double x, PsiOptions options) {
  const auto f = pt_eigenfunction(n, p, options);
  const cplx s = x_to_s(Variant::PTSymmetric, alphaI, x);
  return {x, s, f(s)};
}

WavefunctionSample psi_nonpt(int n, const DimensionlessParams &p, double alpha,
                             double x, PsiOptions options) {
  const auto f = nonpt_eigenfunction(n, p, options);
  const cplx s = x_to_s(Variant::NonPTComplex, alpha, x);
  return {x, s, f(s)};
}

FactorizedEigenfunction branch_eigenfunction(const NUBranch &branch,
                                             const NUProblem &problem, int n) {
  const auto &sig = problem.sigma;
  if (sig.c0 != cplx(0.0) || sig.c1 != cplx(1.0) || sig.c2.imag() != 0.0 ||
      !(sig.c2.real() < 0.0))
    throw UnsupportedSigmaError(
        "branch_eigenfunction requires sigma = s(1 - q s) with q > 0");
  const auto phi = phi_factor(branch, problem);
  const auto rho = weight_function(branch, problem);
  FactorizedEigenfunction f;
  f.q = -sig.c2.real();
  f.s_exponent = phi.exponent1;
  f.tail_exponent = phi.exponent2;
  f.jacobi = {n, rho.exponent1, rho.exponent2};
  return f;
}

double normalize(const Sampler &sampler, Window window, int points) {
  if (points < 64)
    throw std::invalid_argument("normalize: at least 64 points required");
  if (!(window.hi > window.lo))
    throw std::invalid_argument("normalize: empty window");
  const double h = (window.hi - window.lo) / (points - 1);
  double integral = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? window.hi : window.lo + h * i;
    const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    integral += w * std::norm(sampler(x));
  }
  integral *= h;
  if (!std::isfinite(integral) || integral < 1e-280)
    throw NormalizationError("wavefunction norm too small or not finite");
  return 1.0 / std::sqrt(integral);
}

std::vector<WavefunctionSample>
sample_wavefunction(const FactorizedEigenfunction &f, Variant variant,
                    double steepness, Window window, int points) {
  if (points < 2)
    throw std::invalid_argument("sample_wavefunction: need >= 2 points");
  std::vector<WavefunctionSample> out;
  out.reserve(points);
  const double h = (window.hi - window.lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? window.hi : window.lo + h * i;
    const cplx s = x_to_s(variant, steepness, x);
    out.push_back({x, s, f(s)});
  }
  return out;
}

} // namespace wsspec
