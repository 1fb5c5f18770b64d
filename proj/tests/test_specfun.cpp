#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fnx/specfun.hpp"

#include <cmath>
#include <vector>

using namespace fnx;

namespace {
double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}
}  // namespace

// Reference values below were computed with 50-digit arithmetic and frozen.

TEST_CASE("gamma matches high-precision references to 1e-13") {
  CHECK(rel_err(gamma_fn(0.5), 1.77245385090551602729816748334) < 1e-13);
  CHECK(rel_err(gamma_fn(1.0), 1.0) < 1e-14);
  CHECK(rel_err(gamma_fn(10.0), 362880.0) < 1e-13);
  CHECK(rel_err(gamma_fn(20.0), 1.21645100408832e17) < 1e-13);
  // the minimum of Gamma on (0, inf)
  CHECK(rel_err(gamma_fn(1.4616321449683623),
                0.885603194410888700278815900583) < 1e-13);
  // near the double overflow edge the exp/log route is most fragile
  CHECK(rel_err(gamma_fn(171.5), 9.4833675668247993362534054692e307) < 1e-13);
  // small arguments via the recurrence
  CHECK(rel_err(gamma_fn(0.1), 9.51350769866873183629248717726) < 1e-13);
}

TEST_CASE("gamma signals domain and overflow") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-2.5), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(172.0), std::overflow_error);
  CHECK_THROWS_AS(gamma_ln(-1.0), std::domain_error);
}

TEST_CASE("gamma_ln consistent with gamma_fn and usable past overflow") {
  struct Ref {
    double x, val;
  };
  const std::vector<Ref> refs = {
      {0.1, 2.25271265173420595986970164637},
      {0.5, 0.572364942924700087071713675677},
      {1.0, 0.0},
      {2.7, 0.434820553655104531704636868964},
      {10.0, 12.8018274800814696112077178746},
      {100.0, 359.134205369575398776044010460},
      {171.0, 706.573062245787347110722262721},
      {300.0, 1409.20206747041178748737726655},  // past double overflow
  };
  for (const auto& r : refs) {
    CAPTURE(r.x);
    CHECK(std::abs(gamma_ln(r.x) - r.val) <=
          1e-13 * std::max(1.0, std::abs(r.val)));
  }
}

TEST_CASE("bessel_j matches frozen references") {
  struct Ref {
    double nu, x, val;
  };
  const std::vector<Ref> refs = {
      {3.0, 0.1, 0.0000208203157547562614294588156974},
      {-0.9, 0.01, 12.3730775853078648145852208347},
      {-0.9, 20.0, -0.039288113936617170077191523914},
      {-0.5, 1.0, 0.431098868018376079520520967299},
      {0.0, 1.0, 0.765197686557966551449717526103},
      {1.0, 1.0, 0.440050585744933515959682203719},
      {0.0, 5.0, -0.177596771314338304347397013075},
      {0.5, 5.0, -0.342167984798161809759670035969},
      {2.0, 15.0, 0.0415716779752504747201492588888},
      {7.5, 15.0, -0.0812129451033008464188881105758},
      {7.5, 50.0, 0.10856137065342746007238702729},
      {20.5, 50.0, -0.0890574944459343683234870695178},
      {20.5, 200.0, -0.00062345145753245796013127746695},
      {0.0, 200.0, -0.0154374399305650915919228472313},
  };
  for (const auto& r : refs) {
    CAPTURE(r.nu);
    CAPTURE(r.x);
    CHECK(rel_err(bessel_j(r.nu, r.x), r.val) < 1e-12);
  }
}

TEST_CASE("half-integer orders reduce to elementary closed forms") {
  for (double x : {0.5, 1.0, 5.0, 15.0, 50.0, 200.0}) {
    const double amp = std::sqrt(2.0 / (3.14159265358979323846 * x));
    CAPTURE(x);
    CHECK(rel_err(bessel_j(0.5, x), amp * std::sin(x)) < 5e-13);
    CHECK(rel_err(bessel_j(-0.5, x), amp * std::cos(x)) < 5e-13);
  }
}

TEST_CASE("cross-method consistency over the validation grid") {
  const std::vector<double> nus = {-0.9, -0.5, 0.0, 0.5, 2.0, 7.5, 20.5};
  const std::vector<double> xs = {0.01, 0.5, 1.0, 5.0, 15.0, 50.0, 200.0};
  const BesselEvalPolicy pol;
  for (double nu : nus) {
    for (double x : xs) {
      std::vector<double> vals;
      // only compare methods inside their own validity regions
      if (x <= pol.x_series_max) {
        vals.push_back(bessel_j(nu, x, BesselMethod::PowerSeries));
      }
      if (x >= pol.x_asym_min && x >= pol.asym_nu_factor * std::abs(nu)) {
        vals.push_back(bessel_j(nu, x, BesselMethod::AsymptoticExpansion));
      }
      vals.push_back(bessel_j(nu, x, BesselMethod::IntegralRepresentation));
      const double scale = std::abs(vals.back());
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        CAPTURE(nu);
        CAPTURE(x);
        const double diff = std::abs(vals[i] - vals.back());
        // 1e-9 relative away from zeros, 1e-12 absolute near them
        CHECK(diff <= std::max(1e-9 * scale, 1e-12));
      }
    }
  }
}

TEST_CASE("auto dispatch reports the method actually used") {
  CHECK(bessel_j_eval(0.0, 5.0).method_used == BesselMethod::PowerSeries);
  CHECK(bessel_j_eval(0.0, 50.0).method_used ==
        BesselMethod::AsymptoticExpansion);
  CHECK(bessel_j_eval(0.0, 25.0).method_used ==
        BesselMethod::IntegralRepresentation);
  // forcing is honored
  CHECK(bessel_j_eval(0.0, 5.0, BesselMethod::IntegralRepresentation)
            .method_used == BesselMethod::IntegralRepresentation);
}

TEST_CASE("asymptotic certificate is honest") {
  // deep in the asymptotic regime the certificate must bound the actual
  // deviation from the integral representation
  for (double nu : {0.0, 2.0, 7.5}) {
    for (double x : {50.0, 120.0, 200.0}) {
      BesselResult a = bessel_j_eval(nu, x, BesselMethod::AsymptoticExpansion);
      const double truth = bessel_j(nu, x, BesselMethod::IntegralRepresentation);
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs(a.value - truth) <=
            a.err_estimate + 1e-12 * (1.0 + std::abs(truth)));
    }
  }
}

TEST_CASE("x = 0 limits") {
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(0.5, 0.0) == 0.0);
  CHECK(bessel_j(3.0, 0.0) == 0.0);
  CHECK(std::isinf(bessel_j(-0.5, 0.0)));
}

TEST_CASE("domain errors carry the offending values") {
  CHECK_THROWS_AS(bessel_j(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(-1.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0.0, -0.1), std::domain_error);
  try {
    bessel_j(-1.2, 1.0);
    CHECK(false);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("-1.2") != std::string::npos);
  }
}

TEST_CASE("validated envelope: outside it a warning is raised, not an error") {
  BesselResult inside = bessel_j_eval(20.5, 200.0);
  CHECK_FALSE(inside.envelope_warning);
  BesselResult out = bessel_j_eval(81.5, 200.0);
  CHECK(out.envelope_warning);
  // value is still good; reference frozen from 50-digit arithmetic
  CHECK(rel_err(out.value, 0.0588640977458862420977788431399) < 1e-10);
}

TEST_CASE("size bound |J_nu(x)| <= (x/2)^nu / Gamma(nu+1) for nu > -1/2") {
  for (double nu : {-0.49, -0.3, 0.0, 0.5, 2.0, 7.5, 20.5}) {
    for (double x : {0.01, 0.5, 1.0, 5.0, 15.0, 50.0, 200.0}) {
      const double bound =
          std::exp(nu * std::log(0.5 * x) - gamma_ln(nu + 1.0));
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs(bessel_j(nu, x)) <= bound * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("three-term recurrence residual") {
  for (double nu : {0.5, 2.0, 7.5, 20.5}) {
    for (double x : {0.5, 1.0, 5.0, 15.0, 50.0, 200.0}) {
      const double jm = bessel_j(nu - 1.0, x);
      const double j0 = bessel_j(nu, x);
      const double jp = bessel_j(nu + 1.0, x);
      const double resid = std::abs(jm + jp - (2.0 * nu / x) * j0);
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(resid <= 1e-9 * std::max(1.0, std::abs(j0)));
    }
  }
}

TEST_CASE("derivative agrees with finite differences") {
  for (double nu : {0.5, 1.0, 2.0, 7.5}) {
    for (double x : {0.5, 1.0, 5.0, 15.0, 50.0}) {
      const double h = 1e-6 * std::max(1.0, x);
      const double fd =
          (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2.0 * h);
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs(bessel_j_dx(nu, x) - fd) <= 1e-7);
    }
  }
  // at the origin both neighbors vanish for nu = 2
  CHECK(bessel_j_dx(2.0, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j_dx(0.0, 1.0), std::domain_error);
}
