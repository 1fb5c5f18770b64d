#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fnx/basis.hpp"
#include "fnx/specfun.hpp"

#include <cmath>
#include <vector>

using namespace fnx;

TEST_CASE("basis index carries nu and the eigenvalue") {
  BasisIndex b{0.0, 2};
  CHECK(b.nu() == doctest::Approx(5.0));
  CHECK(b.eigenvalue() == doctest::Approx(25.0));
  BasisIndex c{-0.5, 0};
  CHECK(c.eigenvalue() == doctest::Approx(0.25));
}

TEST_CASE("eval_jn reference value at alpha = -1/2") {
  // reference frozen from 50-digit arithmetic
  const double x = 1.5707963267948966;
  CHECK(eval_jn(-0.5, 0, x) ==
        doctest::Approx(0.507949087473927758286106439477).epsilon(1e-12));
}

TEST_CASE("eval_jn small-x leading behavior") {
  const double x = 1e-3;
  for (double alpha : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
    for (int n : {0, 1, 2, 5}) {
      const double nu = alpha + 2.0 * n + 1.0;
      const double lead = std::sqrt(2.0 * nu) * std::pow(x, 2.0 * n) /
                          (std::pow(2.0, nu) * gamma_fn(nu + 1.0));
      CAPTURE(alpha);
      CAPTURE(n);
      CHECK(eval_jn(alpha, n, x) == doctest::Approx(lead).epsilon(1e-5));
    }
  }
}

TEST_CASE("eval_jn is continuous across the series/direct switch") {
  for (double alpha : {-0.9, 0.0, 2.5}) {
    for (int n : {0, 1, 4}) {
      const double below = eval_jn(alpha, n, 0.5 - 1e-9);
      const double above = eval_jn(alpha, n, 0.5 + 1e-9);
      CAPTURE(alpha);
      CAPTURE(n);
      CHECK(below == doctest::Approx(above).epsilon(1e-8));
    }
  }
}

TEST_CASE("eval_jn at x = 0") {
  CHECK(eval_jn(0.0, 1, 0.0) == 0.0);
  CHECK(eval_jn(0.0, 0, 0.0) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(eval_jn(-1.5, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_jn(0.0, -1, 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_jn(0.0, 0, -1.0), std::domain_error);
}

TEST_CASE("eigenrelation: L j_n = (alpha+2n+1)^2 j_n") {
  for (double alpha : {-0.9, 0.0, 2.5}) {
    for (int n = 0; n <= 8; ++n) {
      const double mu = BasisIndex{alpha, n}.eigenvalue();
      for (double x : {0.5, 1.0, 5.0, 20.0}) {
        const double lhs = apply_L_jn(alpha, n, x);
        const double rhs = mu * eval_jn(alpha, n, x);
        CAPTURE(alpha);
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (std::abs(rhs) + 1e-3 * mu));
      }
    }
  }
}

TEST_CASE("closed-form check: L maps x^{-(a+1)} sin x to x^{-a} cos x") {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    auto f = [alpha](double x) {
      return std::pow(x, -(alpha + 1.0)) * std::sin(x);
    };
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double want = std::pow(x, -alpha) * std::cos(x);
      ApplyLResult r = apply_L_fd(f, alpha, x);
      CAPTURE(alpha);
      CAPTURE(x);
      CHECK_FALSE(r.unstable);
      CHECK(std::abs(r.value - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("finite differences flag a noisy integrand as unstable") {
  auto noisy = [](double x) { return std::sin(x) + 1e-7 * std::sin(1e8 * x); };
  ApplyLResult r = apply_L_fd(noisy, 0.0, 2.0);
  CHECK(r.unstable);
  auto smooth = [](double x) { return std::sin(x); };
  CHECK_FALSE(apply_L_fd(smooth, 0.0, 2.0).unstable);
}

TEST_CASE("p_range window endpoints and monotonicity") {
  auto r0 = p_range(0.0);
  CHECK(r0.first == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(r0.second == doctest::Approx(4.0).epsilon(1e-15));

  double prev0 = 0.0;
  double prev1 = std::numeric_limits<double>::infinity();
  for (double alpha : {-0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 4.0}) {
    auto r = p_range(alpha);
    CHECK(r.first >= prev0);       // lower endpoint grows with alpha
    CHECK(r.second <= prev1);      // upper endpoint shrinks
    CHECK(r.first > 1.0 - 1e-15);  // always inside (1, inf)
    CHECK(r.first < r.second);
    prev0 = r.first;
    prev1 = r.second;
  }
}

TEST_CASE("norm growth model: regimes and continuity at p = 4") {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    NormGrowthModel below = jn_norm_model(alpha, 4.0 - 1e-9);
    NormGrowthModel at = jn_norm_model(alpha, 4.0);
    NormGrowthModel above = jn_norm_model(alpha, 4.0 + 1e-9);
    CHECK(below.regime == NormRegime::Subcritical);
    CHECK(at.regime == NormRegime::Critical);
    CHECK(above.regime == NormRegime::Supercritical);
    CHECK_FALSE(below.has_log_factor);
    CHECK(at.has_log_factor);
    CHECK_FALSE(above.has_log_factor);
    CHECK(below.exponent == doctest::Approx(at.exponent).epsilon(1e-8));
    CHECK(above.exponent == doctest::Approx(at.exponent).epsilon(1e-8));
    CHECK(at.exponent == doctest::Approx(-(alpha + 1.0) / 2.0).epsilon(1e-14));
  }
  // the p = 2 exponent is exactly 0: the family is normalized
  CHECK(jn_norm_model(0.0, 2.0).exponent == doctest::Approx(0.0));
  CHECK_THROWS_AS(jn_norm_model(0.0, 4.0 / 3.0), std::domain_error);
  CHECK_THROWS_AS(jn_norm_model(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(jn_norm_model(0.0, 2.0).value(1), std::domain_error);
  CHECK(jn_norm_model(0.0, 4.0).value(10) ==
        doctest::Approx(std::pow(10.0, -0.5) *
                        std::pow(std::log(10.0), 0.25)));
}

TEST_CASE("high-index norms stay at 1 for p = 2 (model exponent 0)") {
  AlphaContext ctx = make_alpha_context(0.0);
  for (int n : {8, 16, 32}) {
    const double nu = 2.0 * n + 1.0;
    TailSpec tail;
    tail.sigma = 1.0;
    tail.start_hint = nu * nu;
    auto f = [n](double x) { return eval_jn(0.0, n, x); };
    CAPTURE(n);
    CHECK(lp_norm(f, 2.0, ctx, QuadratureConfig{}, tail) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("gram matrix is the identity") {
  Eigen::MatrixXd g = gram_matrix(0.0, 5);
  CHECK((g - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
  Eigen::MatrixXd h = gram_matrix(-0.9, 3);
  CHECK((h - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
}
