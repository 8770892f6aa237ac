// Independent reference computations for the tests. Nothing here calls the
// library's own formulas.
#ifndef WSSPEC_TESTS_ORACLES_HPP
#define WSSPEC_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline cplx falling(cplx a, int j) {
  cplx r = 1.0;
  for (int i = 0; i < j; ++i)
    r *= a - static_cast<double>(i);
  return r;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i)
    r *= i;
  return r;
}

/// (1/n!) rho^{-1} d^n/ds^n [s^{n+A} (1-qs)^{n+B}] with rho = s^A (1-qs)^B,
/// expanded by the Leibniz rule; a polynomial, so no branch choices enter.
inline cplx leibniz_rodrigues(int n, cplx A, cplx B, double q, cplx s) {
  cplx sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const int m = n - j;
    sum += binomial(n, j) * falling(static_cast<double>(n) + A, j) *
           falling(static_cast<double>(n) + B, m) * std::pow(-q, m) *
           std::pow(s, m) * std::pow(1.0 - q * s, j);
  }
  return sum / factorial(n);
}

/// Explicit sum P_n^{(a,b)}(x) = sum_k C(n+a, n-k) C(n+b, k) ((x-1)/2)^k ((x+1)/2)^{n-k}
/// with generalized binomials.
inline cplx jacobi_explicit(int n, cplx a, cplx b, cplx x) {
  auto gbinom = [](cplx top, int k) { return falling(top, k) / factorial(k); };
  cplx sum = 0.0;
  for (int k = 0; k <= n; ++k)
    sum += gbinom(static_cast<double>(n) + a, n - k) *
           gbinom(static_cast<double>(n) + b, k) *
           std::pow((x - 1.0) / 2.0, k) * std::pow((x + 1.0) / 2.0, n - k);
  return sum;
}

inline cplx central_difference(const std::function<cplx(cplx)> &f, cplx x,
                               double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// beta/2 - b^2/16 - (beta/b)^2 with b = 1 + 2n + sqrt(1 - 4 gamma/q), all in
/// explicit real arithmetic.
inline cplx pt_epsilon_expanded(int n, double beta, double gamma, double q) {
  const double rad = 1.0 - 4.0 * gamma / q;
  const double br = 1.0 + 2.0 * n + (rad >= 0.0 ? std::sqrt(rad) : 0.0);
  const double bi = rad >= 0.0 ? 0.0 : std::sqrt(-rad);
  const double b2r = br * br - bi * bi;
  const double b2i = 2.0 * br * bi;
  const double mod2 = br * br + bi * bi;
  // beta/b = beta (br - i bi) / |b|^2
  const double rr = beta * br / mod2;
  const double ri = -beta * bi / mod2;
  const double r2r = rr * rr - ri * ri;
  const double r2i = 2.0 * rr * ri;
  return {beta / 2.0 - b2r / 16.0 - r2r, -b2i / 16.0 - r2i};
}

/// The printed complex non-PT energy in real arithmetic, physical units.
inline cplx nonpt_energy_expanded(int n, double hbar, double m, double a,
                                  double q, double C, double V0R, double V0I) {
  const double hb2 = hbar * hbar;
  const double bp = std::sqrt(1.0 + 8.0 * m * C * a * a / (hb2 * q)) + 1.0 + 2.0 * n;
  const double bp2 = bp * bp;
  const double g = m * a * a / hb2;
  const double pre = hb2 / (2.0 * m * a * a);
  const double re = bp2 / 16.0 + 4.0 * g * g * (V0R * V0R - V0I * V0I) / bp2;
  const double im = 4.0 * g * g * V0R * V0I / bp2 + m * V0I * a * a / hb2;
  return {-pre * re, -pre * im};
}

/// Direct evaluation of the Woods-Saxon form with exp/complex arithmetic.
inline cplx woods_saxon(cplx V0, cplx two_alpha_x, double q, double C) {
  const cplx z = q * std::exp(two_alpha_x);
  const cplx w = std::exp(two_alpha_x);
  return -V0 / (1.0 + z) - C * w / ((1.0 + z) * (1.0 + z));
}

inline std::vector<cplx> random_annulus(std::mt19937_64 &rng, std::size_t count,
                                        double rmin, double rmax, double q) {
  std::uniform_real_distribution<double> r(rmin, rmax);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  std::vector<cplx> out;
  while (out.size() < count) {
    const cplx s = std::polar(r(rng) / q, t(rng));
    if (std::abs(1.0 - q * s) < 0.05)
      continue;
    out.push_back(s);
  }
  return out;
}

inline double rel_err(cplx a, cplx b) {
  return std::abs(a - b) / std::max(1e-300, std::abs(b));
}

} // namespace oracle

#endif
