#include "oracles.hpp"

#include "wsspec/errors.hpp"
#include "wsspec/nu_engine.hpp"
#include "wsspec/spectra.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace wsspec;
using oracle::cplx;

namespace {

ProblemFamily oscillator() {
  return [](cplx eps) {
    return NUProblem{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {eps, 0.0, -1.0}};
  };
}

bool same(const QuadPoly &a, const QuadPoly &b, double tol = 1e-12) {
  return std::abs(a.c0 - b.c0) <= tol && std::abs(a.c1 - b.c1) <= tol &&
         std::abs(a.c2 - b.c2) <= tol;
}

std::size_t admissible_index(const std::vector<NUBranch> &bs) {
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (bs[i].admissible)
      return i;
  return bs.size();
}

// The PT branch whose tau' is -q(2 + 2u + c).
NUBranch pt_reference_branch(const NUProblem &p, cplx u, cplx c, double q) {
  for (const auto &b : resolve_branches(p))
    if (std::abs(b.tau.c1 + q * (2.0 + 2.0 * u + c)) < 1e-10)
      return b;
  FAIL("reference branch missing");
  return {};
}

} // namespace

TEST_CASE("quad poly basics") {
  QuadPoly p{1.0, 0.0, 2.0};
  CHECK(p.degree() == 2);
  CHECK(QuadPoly{1.0, 3.0, 0.0}.degree() == 1);
  CHECK(QuadPoly{}.degree() == -1);
  CHECK(p(cplx(0.0, 1.0)) == cplx(-1.0));
  CHECK(same(p.derivative(), {0.0, 4.0, 0.0}));
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(NUProblem({}, {1.0, 0.0, 0.0}, {}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NUProblem({1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NUProblem({1.0, 0.0, 0.0}, {}, {NAN, 0.0, 0.0}).validate(),
                  std::invalid_argument);
}

TEST_CASE("k candidates") {
  const auto ho = k_candidates(oscillator()(3.0));
  REQUIRE(ho.size() == 1);
  CHECK(std::abs(ho[0] - 3.0) < 1e-12);

  const auto square = k_candidates({{1.0, 0.0, 0.0}, {}, {0.0, 0.0, -1.0}});
  REQUIRE(square.size() == 1);
  CHECK(std::abs(square[0]) < 1e-12);

  const auto flat = k_candidates({{1.0, 0.0, 0.0}, {}, {}});
  REQUIRE(flat.size() == 1);
  CHECK(flat[0] == cplx(0.0));

  const double beta = 2.0, gamma = 0.1, q = 1.5;
  const cplx eps = -0.25;
  const auto ks = k_candidates(
      woods_saxon_problem(SpectralCase::PT, {eps, beta, gamma, 0.0, q}));
  REQUIRE(ks.size() == 2);
  const cplx root = q * std::sqrt((beta - eps) * (1.0 - 4.0 * gamma / q));
  const cplx km = gamma - beta * q - root, kp = gamma - beta * q + root;
  CHECK(std::min(std::abs(ks[0] - km), std::abs(ks[0] - kp)) < 1e-12);
  CHECK(std::min(std::abs(ks[1] - km), std::abs(ks[1] - kp)) < 1e-12);
  CHECK(std::abs(ks[0] - ks[1]) > 0.1);
}

TEST_CASE("radicand at every k is a perfect square") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    NUProblem p{{u(rng), u(rng), u(rng)}, {cplx(u(rng), u(rng)), u(rng), 0.0},
                {cplx(u(rng), u(rng)), u(rng), u(rng)}};
    for (cplx k : k_candidates(p)) {
      const QuadPoly r = radicand(p).at(k);
      const double scale = std::max({std::abs(r.c0), std::abs(r.c1), std::abs(r.c2), 1.0});
      CHECK(std::abs(r.c1 * r.c1 - 4.0 * r.c2 * r.c0) <= 1e-9 * scale * scale);
    }
  }
}

TEST_CASE("pi branches") {
  const auto ho = pi_branches(oscillator()(3.0), 3.0);
  CHECK(((same(ho[0], {0.0, -1.0, 0.0}) && same(ho[1], {0.0, 1.0, 0.0})) ||
         (same(ho[1], {0.0, -1.0, 0.0}) && same(ho[0], {0.0, 1.0, 0.0}))));

  const NUProblem legendre{{0.0, 1.0, -1.0}, {1.0, -1.0, 0.0}, {}};
  const auto pis = pi_branches(legendre, 0.0);
  const bool zero0 = same(pis[0], {}), zero1 = same(pis[1], {});
  CHECK(zero0 != zero1);
  CHECK(same(zero0 ? pis[1] : pis[0], {0.0, -1.0, 0.0}));

  CHECK_THROWS_AS(pi_branches(oscillator()(3.0), 1.0), ConsistencyError);
}

TEST_CASE("PT pi matches the printed branch pattern") {
  const double beta = 2.0, q = 1.0;
  const cplx eps = -0.25, u = std::sqrt(beta - eps), c = 1.0;
  const auto p = woods_saxon_problem(SpectralCase::PT, {eps, beta, 0.0, 0.0, q});
  const QuadPoly lin{-2.0 * u, (2.0 * u + c) * q, 0.0};
  const QuadPoly base{0.0, -q / 2.0, 0.0};
  const QuadPoly expect_plus = base + cplx(0.5) * lin;
  const QuadPoly expect_minus = base + cplx(-0.5) * lin;
  int found = 0;
  for (const auto &b : resolve_branches(p))
    if (same(b.pi, expect_plus) || same(b.pi, expect_minus))
      ++found;
  CHECK(found == 2);
}

TEST_CASE("resolve branches") {
  const auto p = oscillator()(5.0);
  const auto bs = resolve_branches(p);
  REQUIRE(bs.size() == 2);
  const auto i = admissible_index(bs);
  REQUIRE(i < bs.size());
  CHECK(same(bs[i].tau, {0.0, -2.0, 0.0}));
  CHECK(std::abs(bs[i].lambda - 4.0) < 1e-12);

  const auto ws = resolve_branches(
      woods_saxon_problem(SpectralCase::PT, {-0.3, 2.0, 0.1, 0.0, 1.0}));
  CHECK(ws.size() == 4);
  CHECK(admissible_index(ws) < ws.size());
  int inadmissible = 0;
  for (const auto &b : ws) {
    CHECK(b.admissible == (b.tau.c1.real() < 0.0));
    inadmissible += !b.admissible;
  }
  CHECK(inadmissible > 0);

  const auto flat = resolve_branches({{1.0, 0.0, 0.0}, {}, {}});
  for (const auto &b : flat) {
    CHECK(b.k == cplx(0.0));
    CHECK(b.lambda == cplx(0.0));
  }
}

TEST_CASE("branch identities tau = tau~ + 2 pi and lambda = k + pi'") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    NUProblem p{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), 0.0},
                {cplx(u(rng), u(rng)), u(rng), u(rng)}};
    for (const auto &b : resolve_branches(p)) {
      CHECK(same(b.tau, p.tau_tilde + cplx(2.0) * b.pi, 0.0));
      CHECK(b.lambda == b.k + b.pi.derivative()(0.0));
      CHECK(b.pi.degree() <= 1);
    }
  }
}

TEST_CASE("lambda_n") {
  const auto p = oscillator()(5.0);
  const auto bs = resolve_branches(p);
  const auto &b = bs[admissible_index(bs)];
  CHECK(lambda_n(p, b, 2) == cplx(4.0));
  CHECK(lambda_n(p, b, 0) == cplx(0.0));
  CHECK_THROWS_AS(lambda_n(p, b, -1), std::invalid_argument);

  const double beta = 3.0, gamma = 0.2, q = 2.0;
  const cplx eps = -0.5, u = std::sqrt(beta - eps), c = std::sqrt(1.0 - 4.0 * gamma / q);
  const auto ws = woods_saxon_problem(SpectralCase::PT, {eps, beta, gamma, 0.0, q});
  const auto ref = pt_reference_branch(ws, u, c, q);
  for (int n = 0; n <= 4; ++n) {
    const cplx expect = n * q * (2.0 + 2.0 * u + c) + n * (n - 1.0) * q;
    CHECK(std::abs(lambda_n(ws, ref, n) - expect) < 1e-12);
  }
}

TEST_CASE("quantization residual") {
  const auto family = oscillator();
  const auto bs = resolve_branches(family(1.0));
  const auto i = admissible_index(bs);
  for (int n = 0; n <= 4; ++n) {
    CHECK(std::abs(quantization_residual(family, i, n, 2.0 * n + 1.0)) <= 1e-12);
    CHECK(std::abs(quantization_residual(family, i, n, 2.0 * n) - cplx(-1.0)) <= 1e-12);
  }
  CHECK_THROWS_AS(quantization_residual(family, 7, 0, 1.0), std::out_of_range);

  const DimensionlessParams p{0.0, 2.5, 0.3, 0.0, 2.0};
  for (int n = 0; n <= 3; ++n) {
    const cplx eps = pt_epsilon(n, p.beta, p.gamma, p.q);
    const auto family_ws = woods_saxon_family(SpectralCase::PT, p);
    double best = 1e300;
    for (std::size_t b = 0; b < 4; ++b)
      best = std::min(best, std::abs(quantization_residual(family_ws, b, n, eps)));
    CHECK(best <= 1e-10);
  }
}

TEST_CASE("secant solver") {
  const auto family = oscillator();
  const auto i = admissible_index(resolve_branches(family(1.0)));
  CHECK(std::abs(solve_eigenvalue(family, i, 1, 2.5).epsilon - 3.0) <= 1e-10);
  CHECK(std::abs(solve_eigenvalue(family, i, 0, 0.9).epsilon - 1.0) <= 1e-10);
  for (int n = 0; n <= 3; ++n)
    CHECK(std::abs(solve_eigenvalue(family, i, n, 0.5).epsilon - (2.0 * n + 1.0)) <= 1e-9);

  const DimensionlessParams p{0.0, 2.0, 0.1, 0.0, 1.0};
  const cplx closed = pt_epsilon(0, p.beta, p.gamma, p.q);
  const auto res = crosscheck_quantization(SpectralCase::PT, 0, {closed, p.beta, p.gamma, 0.0, p.q});
  const auto best = static_cast<std::size_t>(
      std::min_element(res.begin(), res.end(),
                       [](cplx a, cplx b) { return std::abs(a) < std::abs(b); }) -
      res.begin());
  const auto sol =
      solve_eigenvalue(woods_saxon_family(SpectralCase::PT, p), best, 0, closed + 0.1);
  CHECK(std::abs(sol.epsilon - closed) <= 1e-9);

  const ProblemFamily frozen = [](cplx) {
    return NUProblem{{1.0, 0.0, 0.0}, {}, {3.0, 0.0, -1.0}};
  };
  try {
    solve_eigenvalue(frozen, i, 0, 0.5);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError &e) {
    CHECK(std::isfinite(e.last_iterate.real()));
  }
}

TEST_CASE("weight function") {
  const double beta = 3.0, gamma = 0.2, q = 2.0;
  const cplx eps = -0.5, u = std::sqrt(beta - eps), c = std::sqrt(1.0 - 4.0 * gamma / q);
  const auto ws = woods_saxon_problem(SpectralCase::PT, {eps, beta, gamma, 0.0, q});
  const auto rho = weight_function(pt_reference_branch(ws, u, c, q), ws);
  std::mt19937_64 rng(2);
  for (const cplx s : oracle::random_annulus(rng, 10, 0.1, 0.9, q)) {
    const cplx expect = 2.0 * u / s - q * c / (1.0 - q * s);
    CHECK(oracle::rel_err(rho.log_derivative(s), expect) < 1e-12);
  }

  // Non-PT: some branch carries s^{2 sqrt(eps - beta - i delta)} (1-qs)^{kappa-1}.
  const double delta = 0.7;
  const cplx e2 = 4.0;
  const auto np = woods_saxon_problem(SpectralCase::NonPT, {e2, beta, gamma, delta, q});
  const cplx w = std::sqrt(e2 - beta - cplx(0.0, delta));
  const cplx kap = std::sqrt(1.0 + 4.0 * gamma / q) + 1.0;
  bool matched = false;
  const cplx s0(0.3, 0.1);
  for (const auto &b : resolve_branches(np)) {
    const cplx expect = 2.0 * w / s0 - q * (kap - 1.0) / (1.0 - q * s0);
    matched = matched || oracle::rel_err(weight_function(b, np).log_derivative(s0), expect) < 1e-12;
  }
  CHECK(matched);

  NUBranch flat;
  flat.tau = {1.0, -2.0, 0.0};
  const NUProblem legendre{{0.0, 1.0, -1.0}, {1.0, -1.0, 0.0}, {}};
  const auto one = weight_function(flat, legendre);
  CHECK(std::abs(one.log_derivative(0.37)) < 1e-14);
  CHECK(std::abs(one(0.37) / one(0.71) - 1.0) < 1e-14);

  const NUProblem double_root{{1.0, -2.0, 1.0}, {}, {}};
  CHECK_THROWS_AS(weight_function(flat, double_root), UnsupportedSigmaError);

  NUBranch g;
  g.tau = {0.0, -2.0, 0.0};
  const auto gauss = weight_function(g, oscillator()(1.0));
  CHECK(gauss.kind == WeightKind::Gaussian);
  CHECK(oracle::rel_err(gauss(1.5) / gauss(0.0), std::exp(-2.25)) < 1e-14);
}

TEST_CASE("rodrigues polynomial") {
  NUBranch flat;
  flat.tau = {1.0, -2.0, 0.0};
  const NUProblem legendre{{0.0, 1.0, -1.0}, {1.0, -1.0, 0.0}, {}};
  const auto y0 = rodrigues_polynomial(flat, legendre, 0);
  CHECK(y0.degree() == 0);
  CHECK(y0(0.4) == cplx(1.0));
  const auto y1 = rodrigues_polynomial(flat, legendre, 1);
  REQUIRE(y1.degree() == 1);
  CHECK(std::abs(y1.coeffs[1] / y1.coeffs[0] + 2.0) < 1e-14);
  CHECK_THROWS_AS(rodrigues_polynomial(flat, legendre, 33), std::invalid_argument);
}

TEST_CASE("rodrigues output solves the hypergeometric equation") {
  std::mt19937_64 rng(23);
  const DimensionlessParams cases[] = {{-0.5, 3.0, 0.2, 0.0, 2.0},
                                       {cplx(0.4, 0.2), 1.5, -0.3, 0.0, 0.5}};
  for (const auto &p : cases) {
    const auto prob = woods_saxon_problem(SpectralCase::PT, p);
    for (const auto &b : resolve_branches(prob))
      for (int n = 0; n <= 6; ++n) {
        const auto y = rodrigues_polynomial(b, prob, n);
        CHECK(y.degree() == n);
        const auto dy = y.derivative(), d2y = dy.derivative();
        const cplx lam = lambda_n(prob, b, n);
        for (const cplx s : oracle::random_annulus(rng, 50, 0.05, 2.0, p.q)) {
          const cplx t1 = prob.sigma(s) * d2y(s), t2 = b.tau(s) * dy(s), t3 = lam * y(s);
          const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
          CHECK(std::abs(t1 + t2 + t3) <= 1e-9 * scale);
        }
      }
  }
}

TEST_CASE("rodrigues matches the Leibniz expansion") {
  const double q = 1.5;
  const auto prob = woods_saxon_problem(SpectralCase::PT, {-0.5, 3.0, 0.2, 0.0, q});
  const cplx u = std::sqrt(3.5), c = std::sqrt(1.0 - 0.8 / q);
  const auto b = pt_reference_branch(prob, u, c, q);
  std::mt19937_64 rng(31);
  for (int n = 0; n <= 5; ++n) {
    const auto y = rodrigues_polynomial(b, prob, n);
    for (const cplx s : oracle::random_annulus(rng, 20, 0.1, 1.5, q))
      CHECK(oracle::rel_err(y(s), oracle::leibniz_rodrigues(n, 2.0 * u, c, q, s)) <= 1e-9);
  }
}
