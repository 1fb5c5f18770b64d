#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fnx/basis.hpp"
#include "fnx/expansion.hpp"
#include "fnx/fractional.hpp"

using namespace fnx;

namespace {

CoefficientVector random_combo(double alpha, int N, unsigned seed) {
  std::minstd_rand rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CoefficientVector c;
  c.alpha = alpha;
  c.N = N;
  c.coeffs = Eigen::VectorXd::Zero(N + 1);
  for (int k = 0; k <= N; ++k) c.coeffs[k] = dist(rng);
  return c;
}

}  // namespace

TEST_CASE("series form acts diagonally on eigenfunctions") {
  for (double alpha : {-0.5, 0.0, 1.3}) {
    AlphaContext ctx = make_alpha_context(alpha);
    for (int n : {0, 2, 5}) {
      CoefficientVector c;
      c.alpha = alpha;
      c.N = n;
      c.coeffs = Eigen::VectorXd::Zero(n + 1);
      c.coeffs[n] = 1.0;
      double nu = alpha + 2.0 * n + 1.0;
      for (double lambda : {0.5, 1.0, 2.3}) {
        for (double x : {0.7, 4.0}) {
          double want = std::pow(nu, -lambda) * eval_jn(alpha, n, x);
          CHECK(frac_series(c, lambda, ctx, x) ==
                doctest::Approx(want).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("order tending to zero recovers the partial sum") {
  AlphaContext ctx = make_alpha_context(0.4);
  CoefficientVector c = random_combo(0.4, 7, 13u);
  for (double x : {0.5, 2.0, 8.0}) {
    double sn = partial_sum(c, 7, x);
    CHECK(std::abs(frac_series(c, 1e-6, ctx, x) - sn) <=
          1e-6 * (1.0 + std::abs(sn)));
  }
}

TEST_CASE("composition adds the orders") {
  AlphaContext ctx = make_alpha_context(0.2);
  CoefficientVector c = random_combo(0.2, 9, 17u);
  CoefficientVector two_step =
      frac_coefficients(frac_coefficients(c, 0.7, ctx), 1.2, ctx);
  CoefficientVector one_step = frac_coefficients(c, 1.9, ctx);
  for (int n = 0; n <= 9; ++n)
    CHECK(two_step.coeffs[n] ==
          doctest::Approx(one_step.coeffs[n]).epsilon(1e-14));
  for (double x : {0.6, 3.1}) {
    double a = frac_series(frac_coefficients(c, 0.7, ctx), 1.2, ctx, x);
    double b = frac_series(c, 1.9, ctx, x);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("damping is monotone in the order when the base exceeds one") {
  AlphaContext ctx = make_alpha_context(0.3);  // nu_0 = 1.3 > 1
  CoefficientVector c = random_combo(0.3, 6, 23u);
  CoefficientVector d1 = frac_coefficients(c, 0.8, ctx);
  CoefficientVector d2 = frac_coefficients(c, 1.7, ctx);
  for (int n = 0; n <= 6; ++n)
    CHECK(std::abs(d2.coeffs[n]) <= std::abs(d1.coeffs[n]) + 1e-300);

  // nu_0 = 0.5 < 1 at alpha = -0.5: the n = 0 multiplier grows instead
  AlphaContext low = make_alpha_context(-0.5);
  CoefficientVector e0;
  e0.alpha = -0.5;
  e0.N = 0;
  e0.coeffs = Eigen::VectorXd::Ones(1);
  double m1 = frac_coefficients(e0, 0.8, low).coeffs[0];
  double m2 = frac_coefficients(e0, 1.7, low).coeffs[0];
  CHECK(m2 > m1);
  CHECK(m1 > 1.0);
}

TEST_CASE("scalar kernel reproduces the power function") {
  for (double lambda : {0.5, 1.0, 2.3}) {
    for (double gamma : {0.5, 1.0, 3.7, 9.0}) {
      double want = std::pow(gamma, -lambda);
      CHECK(frac_scalar_kernel(lambda, gamma) ==
            doctest::Approx(want).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(frac_scalar_kernel(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(frac_scalar_kernel(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(frac_scalar_kernel(1.0, 0.0), std::domain_error);
}

TEST_CASE("quadrature form agrees with the series form") {
  AlphaContext ctx = make_alpha_context(0.5);
  CoefficientVector c = random_combo(0.5, 6, 29u);
  for (double lambda : {0.5, 1.0, 2.3}) {
    for (double x : {0.8, 3.0}) {
      double series = frac_series(c, lambda, ctx, x);
      double quad = frac_quadrature(c, lambda, ctx, x);
      CHECK(quad == doctest::Approx(series)
                        .epsilon(1e-9)
                        .scale(1.0 + std::abs(series)));
    }
  }
  // small alpha pushes the slowest decay rate toward zero; still settles
  AlphaContext tiny = make_alpha_context(-0.9);
  CoefficientVector c2 = random_combo(-0.9, 3, 31u);
  double series = frac_series(c2, 0.6, tiny, 1.2);
  CHECK(frac_quadrature(c2, 0.6, tiny, 1.2) ==
        doctest::Approx(series).epsilon(1e-8));

  CHECK_THROWS_AS(frac_quadrature(c, -0.5, ctx, 1.0), std::domain_error);
  CHECK_THROWS_AS(frac_series(c2, 1.0, ctx, 1.0), std::domain_error);
}

TEST_CASE("potential norm ratios on eigenfunctions") {
  AlphaContext ctx = make_alpha_context(0.4);
  std::vector<FunctionSpec> corpus;
  for (int n = 0; n <= 3; ++n)
    corpus.push_back(FunctionSpec::basis_combo({{n, 1.0}}));
  double s = 1.3, p = 2.5;
  PotentialReport rep = potential_norm_check(corpus, s, p, ctx);
  REQUIRE(rep.ratios.size() == 4);
  for (int n = 0; n <= 3; ++n) {
    double nu = 0.4 + 2.0 * n + 1.0;
    // homogeneity cancels the norms; only quadrature noise remains
    CHECK(rep.ratios[n] == doctest::Approx(std::pow(nu, -s)).epsilon(1e-7));
  }
  CHECK(rep.bounded);
  CHECK(rep.max_ratio == doctest::Approx(std::pow(1.4, -s)).epsilon(1e-7));

  // s -> 0 leaves eigenfunctions untouched
  PotentialReport flat = potential_norm_check(corpus, 1e-8, p, ctx);
  for (int n = 0; n <= 3; ++n)
    CHECK(flat.ratios[n] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("potential norm stays bounded on a mixed corpus") {
  AlphaContext ctx = make_alpha_context(0.0);
  std::vector<FunctionSpec> corpus = {
      FunctionSpec::basis_combo({{0, 1.0}}),
      FunctionSpec::basis_combo({{0, 0.8}, {2, -0.4}}),
      FunctionSpec::indicator(0.0, 1.0),
      FunctionSpec::basis_combo({{1, 1.0}, {3, 0.25}}),
      FunctionSpec::bump(0.5, 2.0),
      FunctionSpec::poly_exp(1),
  };
  PotentialReport rep = potential_norm_check(corpus, 1.0, 2.0, ctx);
  CHECK(rep.bounded);
  // the spectrum starts at alpha + 1 = 1, so no ratio can exceed 1 by more
  // than the quadrature margin
  CHECK(rep.max_ratio <= 1.0 / (0.0 + 1.0) + 1e-4);
  CHECK(rep.labels.size() == corpus.size());

  CHECK_THROWS_AS(potential_norm_check(corpus, -1.0, 2.0, ctx),
                  std::domain_error);
  CHECK_THROWS_AS(potential_norm_check(corpus, 1.0, 9.0, ctx),
                  std::domain_error);
}
