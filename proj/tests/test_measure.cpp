#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fnx/measure.hpp"
#include "fnx/specfun.hpp"

#include <cmath>
#include <functional>

using namespace fnx;

namespace {

// orthonormal basis member built straight from the Bessel layer; the basis
// module proper is tested elsewhere, this keeps the measure tests standalone
std::function<double(double)> jn_raw(double alpha, int n) {
  const double nu = alpha + 2.0 * n + 1.0;
  const double norm = std::sqrt(2.0 * nu);
  return [alpha, nu, norm](double x) {
    if (x == 0.0) return 0.0;  // limit exists but is never sampled at 0
    return norm * bessel_j(nu, x) * std::pow(x, -alpha - 1.0);
  };
}

TailSpec product_tail(double alpha, int nmax) {
  TailSpec t;
  t.sigma = 1.0;
  const double nu = alpha + 2.0 * nmax + 1.0;
  t.start_hint = nu * nu;
  return t;
}

const double kAlphas[] = {-0.9, -0.5, 0.0, 1.0, 2.5};

}  // namespace

TEST_CASE("alpha context: exponent window endpoints") {
  AlphaContext a0 = make_alpha_context(0.0);
  CHECK(a0.p0 == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(a0.p1 == doctest::Approx(4.0).epsilon(1e-15));

  AlphaContext ah = make_alpha_context(-0.5);
  CHECK(ah.p0 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(ah.p1));

  AlphaContext a1 = make_alpha_context(1.0);
  CHECK(a1.p0 == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(a1.p1 == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

  // below -1/2 the window is all of (1, inf)
  AlphaContext am = make_alpha_context(-0.9);
  CHECK(am.p0 == 1.0);
  CHECK(std::isinf(am.p1));

  CHECK_THROWS_AS(make_alpha_context(-1.0), std::domain_error);
  CHECK_THROWS_AS(make_alpha_context(-3.0), std::domain_error);
}

TEST_CASE("indicator of (0,1) integrates to 1/(2 alpha + 2)") {
  for (double alpha : kAlphas) {
    AlphaContext ctx = make_alpha_context(alpha);
    TailSpec tail;
    tail.support_upper = 1.0;
    tail.breaks = {1.0};
    IntegralResult r = integrate_mu_result([](double) { return 1.0; }, ctx,
                                           QuadratureConfig{}, tail);
    CAPTURE(alpha);
    CHECK(r.converged);
    CHECK(r.value ==
          doctest::Approx(1.0 / (2.0 * alpha + 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("indicator of (0,2) crosses the substitution boundary cleanly") {
  for (double alpha : {-0.9, 0.0, 2.5}) {
    AlphaContext ctx = make_alpha_context(alpha);
    TailSpec tail;
    tail.support_upper = 2.0;
    tail.breaks = {2.0};
    const double want = std::pow(2.0, 2.0 * alpha + 2.0) / (2.0 * alpha + 2.0);
    CAPTURE(alpha);
    CHECK(integrate_mu([](double) { return 1.0; }, ctx, QuadratureConfig{},
                       tail) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("integrable endpoint singularity inside the dyadic region") {
  AlphaContext ctx = make_alpha_context(0.0);
  TailSpec tail;
  tail.support_upper = 1.0;
  // x^(-1/2) against x dx integrates to 2/3
  CHECK(integrate_mu([](double x) { return 1.0 / std::sqrt(x); }, ctx,
                     QuadratureConfig{}, tail) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("gaussian moments via the fast-decay path") {
  for (double alpha : kAlphas) {
    AlphaContext ctx = make_alpha_context(alpha);
    TailSpec tail;
    tail.fast_decay = true;
    tail.decay_cutoff = 30.0;
    const double want = 0.5 * gamma_fn(alpha + 1.0);
    CAPTURE(alpha);
    IntegralResult r = integrate_mu_result(
        [](double x) { return std::exp(-x * x); }, ctx, QuadratureConfig{},
        tail);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(r.restarts == 0);
  }
}

TEST_CASE("basis normalization: integral of j_0^2 d mu is 1") {
  for (double alpha : kAlphas) {
    AlphaContext ctx = make_alpha_context(alpha);
    auto j0 = jn_raw(alpha, 0);
    IntegralResult r = integrate_mu_result(
        [&j0](double x) { return j0(x) * j0(x); }, ctx, QuadratureConfig{},
        product_tail(alpha, 0));
    CAPTURE(alpha);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(5e-10));
  }
}

TEST_CASE("orthogonality: integral of j_0 j_1 d mu vanishes within 1e-8") {
  for (double alpha : kAlphas) {
    AlphaContext ctx = make_alpha_context(alpha);
    auto j0 = jn_raw(alpha, 0);
    auto j1 = jn_raw(alpha, 1);
    const double v =
        integrate_mu([&](double x) { return j0(x) * j1(x); }, ctx,
                     QuadratureConfig{}, product_tail(alpha, 1));
    CAPTURE(alpha);
    CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("vector integrand: one pass shares nodes across components") {
  const double alpha = 0.0;
  AlphaContext ctx = make_alpha_context(alpha);
  auto j0 = jn_raw(alpha, 0);
  auto j1 = jn_raw(alpha, 1);
  VecIntegralResult r = integrate_mu_vec(
      3,
      [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
        const double a = j0(x), b = j1(x);
        out[0] = a * a;
        out[1] = a * b;
        out[2] = b * b;
      },
      ctx, QuadratureConfig{}, product_tail(alpha, 1));
  CHECK(r.converged);
  CHECK(r.value[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(r.value[1]) < 1e-8);
  CHECK(r.value[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("high order norm needs the start hint or a restart, same answer") {
  AlphaContext ctx = make_alpha_context(0.0);
  auto j20 = jn_raw(0.0, 20);
  auto f = [&j20](double x) { return j20(x) * j20(x); };

  IntegralResult hinted = integrate_mu_result(f, ctx, QuadratureConfig{},
                                              product_tail(0.0, 20));
  CHECK(hinted.converged);
  CHECK(hinted.value == doctest::Approx(1.0).epsilon(1e-9));

  TailSpec nohint;
  nohint.sigma = 1.0;
  IntegralResult cold = integrate_mu_result(f, ctx, QuadratureConfig{},
                                            nohint);
  CHECK(cold.converged);
  CHECK(cold.restarts >= 1);
  CHECK(cold.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp_norm contract examples") {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    AlphaContext ctx = make_alpha_context(alpha);
    TailSpec tail;
    tail.support_upper = 1.0;
    tail.breaks = {1.0};
    auto ind = [](double) { return 1.0; };
    for (double p : {1.0, 2.0, 3.5}) {
      const double want = std::pow(2.0 * alpha + 2.0, -1.0 / p);
      CAPTURE(alpha );
      CAPTURE(p);
      CHECK(lp_norm(ind, p, ctx, QuadratureConfig{}, tail) ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("lp_norm homogeneity with c = 3.5") {
  AlphaContext ctx = make_alpha_context(0.0);
  TailSpec tail;
  tail.fast_decay = true;
  tail.decay_cutoff = 30.0;
  auto f = [](double x) { return std::exp(-0.5 * x * x) * (1.0 + x); };
  auto cf = [&f](double x) { return 3.5 * f(x); };
  for (double p : {1.5, 2.0, 3.0}) {
    const double a = lp_norm(cf, p, ctx, QuadratureConfig{}, tail);
    const double b = 3.5 * lp_norm(f, p, ctx, QuadratureConfig{}, tail);
    CHECK(a == doctest::Approx(b).epsilon(1e-11));
  }
}

TEST_CASE("holder inequality holds with 1e-8 slack") {
  AlphaContext ctx = make_alpha_context(0.0);
  auto f = jn_raw(0.0, 0);
  auto g = [](double x) { return std::exp(-0.5 * x * x); };
  TailSpec ptail = product_tail(0.0, 0);

  const double inner = integrate_mu(
      [&](double x) { return f(x) * g(x); }, ctx, QuadratureConfig{}, ptail);

  const double p = 2.0, q = 2.0;
  TailSpec f2 = product_tail(0.0, 0);
  const double nf = lp_norm(f, p, ctx, QuadratureConfig{}, f2);
  TailSpec gt;
  gt.fast_decay = true;
  gt.decay_cutoff = 30.0;
  const double ng = lp_norm(g, q, ctx, QuadratureConfig{}, gt);
  CHECK(std::abs(inner) <= nf * ng + 1e-8);
}

TEST_CASE("refinement stability: doubling the rule order stays within the "
          "reported estimate") {
  AlphaContext ctx = make_alpha_context(0.0);
  auto j1 = jn_raw(0.0, 1);
  auto f = [&j1](double x) { return j1(x) * j1(x); };
  QuadratureConfig c32;
  QuadratureConfig c64;
  c64.panel_rule_order = 64;
  IntegralResult r32 =
      integrate_mu_result(f, ctx, c32, product_tail(0.0, 1));
  IntegralResult r64 =
      integrate_mu_result(f, ctx, c64, product_tail(0.0, 1));
  CHECK(std::abs(r32.value - r64.value) <=
        r32.err_estimate + r64.err_estimate + 1e-13);
}

TEST_CASE("tail correctness: doubling cutoff_x moves the result less than "
          "the tail estimate") {
  AlphaContext ctx = make_alpha_context(0.0);
  auto j2 = jn_raw(0.0, 2);
  auto f = [&j2](double x) { return j2(x) * j2(x); };
  QuadratureConfig base;
  QuadratureConfig wide;
  wide.cutoff_x = 2.0 * base.cutoff_x;
  IntegralResult ra = integrate_mu_result(f, ctx, base, product_tail(0.0, 2));
  IntegralResult rb = integrate_mu_result(f, ctx, wide, product_tail(0.0, 2));
  CHECK(ra.converged);
  CHECK(rb.converged);
  CHECK(std::abs(ra.value - rb.value) <=
        ra.tail_estimate + rb.tail_estimate + 1e-13);
  CHECK(std::abs(ra.value - rb.value) <= 1e-9);
}

TEST_CASE("non-integrable endpoint raises a singularity error") {
  AlphaContext ctx = make_alpha_context(0.0);
  TailSpec tail;
  tail.support_upper = 1.0;
  CHECK_THROWS_AS(
      integrate_mu([](double x) { return 1.0 / (x * x); }, ctx,
                   QuadratureConfig{}, tail),
      quadrature_error);
  CHECK_THROWS_AS(
      integrate_mu([](double x) { return std::pow(x, -3.1); }, ctx,
                   QuadratureConfig{}, tail),
      quadrature_error);
}

TEST_CASE("divergent tail reports nonconvergence") {
  AlphaContext ctx = make_alpha_context(0.0);
  // x / (1 + x^2) decays like 1/x against d mu_0, a log-divergent tail
  auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  IntegralResult r = integrate_mu_result(f, ctx, QuadratureConfig{}, {});
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate_mu(f, ctx, QuadratureConfig{}, {}),
                  quadrature_error);
}

TEST_CASE("config validation") {
  AlphaContext ctx = make_alpha_context(0.0);
  QuadratureConfig bad;
  bad.panel_rule_order = 8;
  CHECK_THROWS_AS(integrate_mu([](double) { return 0.0; }, ctx, bad, {}),
                  std::domain_error);
  QuadratureConfig bad2;
  bad2.cutoff_x = 0.5;
  CHECK_THROWS_AS(integrate_mu([](double) { return 0.0; }, ctx, bad2, {}),
                  std::domain_error);
}
