#pragma once

// Gamma and Bessel-J evaluation for real order nu > -1 on x >= 0.
// Three Bessel routes: a compensated power series (small x), a Hankel-type
// asymptotic expansion with a truncation certificate (large x), and a slow
// integral-representation oracle valid everywhere.

#include <stdexcept>

namespace fnx {

enum class BesselMethod {
  Auto,                   // dispatch by (nu, x)
  PowerSeries,            // x <= x_series_max
  AsymptoticExpansion,    // x >= max(x_asym_min, asym_nu_factor * nu)
  IntegralRepresentation  // oracle, any (nu, x)
};

struct BesselEvalPolicy {
  double x_series_max = 20.0;
  double x_asym_min = 30.0;
  double asym_nu_factor = 1.5;
  // validated envelope; outside it results carry a warning flag, not an error
  double envelope_nu_max = 80.0;
  double envelope_x_max = 400.0;
};

struct BesselResult {
  double value = 0.0;
  double err_estimate = 0.0;  // absolute, from the method's own certificate
  BesselMethod method_used = BesselMethod::Auto;
  bool envelope_warning = false;
};

// Gamma(x) for x > 0. Relative error <= 1e-13.
// Throws std::domain_error for x <= 0, std::overflow_error past ~171.62.
double gamma_fn(double x);

// log Gamma(x) for x > 0.
double gamma_ln(double x);

// J_nu(x) for nu > -1, x >= 0.
BesselResult bessel_j_eval(double nu, double x,
                           BesselMethod method = BesselMethod::Auto,
                           const BesselEvalPolicy& pol = BesselEvalPolicy{});

double bessel_j(double nu, double x, BesselMethod method = BesselMethod::Auto);

// J_nu'(x) = (J_{nu-1}(x) - J_{nu+1}(x))/2; requires nu > 0 so both
// neighbor orders stay above -1.
double bessel_j_dx(double nu, double x);

}  // namespace fnx
