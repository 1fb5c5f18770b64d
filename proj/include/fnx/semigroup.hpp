#pragma once

// The generalized series V_r f = sum r^{mu_n} c_n j_n, its Poisson and heat
// instances, the Cesaro-mean representation with second-difference weights,
// the heat weight-sign crossover, subordination, tail bounds, and the PDE
// residuals of both semigroups.

#include <Eigen/Dense>

#include <functional>

#include "fnx/expansion.hpp"
#include "fnx/measure.hpp"

namespace fnx {

enum class SemigroupKind { Poisson, Heat, Custom };

struct SemigroupSpec {
  SemigroupKind kind = SemigroupKind::Poisson;
  double alpha = 0.0;
  double r = 0.5;  // in (0,1)
  // mu_n >= growth_constant * n, needed for the second-difference
  // representation's tail to telescope
  double growth_constant = 2.0;
  std::function<double(int)> custom_mu;  // Custom kind only

  double mu(int n) const;

  static SemigroupSpec poisson(double alpha, double r);
  static SemigroupSpec heat(double alpha, double r);
  static SemigroupSpec custom(std::function<double(int)> mu, double r,
                              double growth_constant);

  // throws std::domain_error on r outside (0,1), nonpositive growth
  // constant, or a sampled violation of monotonicity / linear growth
  void validate() const;
};

struct SeriesResult {
  double value = 0.0;
  // bound on the dropped tail beyond the stored coefficients, computed
  // with p = 2 and the coefficient l2 norm
  double tail_certificate = 0.0;
  int terms_used = 0;
};

// sum_{n <= c.N} r^{mu_n} c_n j_n(x)
SeriesResult eval_series(const CoefficientVector& c, const SemigroupSpec& spec,
                         double x);

// w_n = (r^{mu_{n+2}} - 2 r^{mu_{n+1}} + r^{mu_n}) (n+1), n = 0..N
Eigen::VectorXd second_diff_weights(const SemigroupSpec& spec, int N);

// bound on |sum_{n > N} w_n| from the partial-sum identities
double weight_total_bound(const SemigroupSpec& spec, int N);

// sum_n w_n C_n f(x); the summation length is extended adaptively until the
// weight-total bound is negligible against the input scale
double eval_cesaro_rep(const CoefficientVector& c, const SemigroupSpec& spec,
                       double x);

// real solution n of 4(alpha + 2n + 2) = log(1 + sqrt(1 - r^8)) / (-log r);
// may be negative, in which case every heat weight is already nonnegative;
// the integer sign-split index is ceil of this value.
// Throws std::domain_error unless 1/2 < r < 1.
double crossover_index(const AlphaContext& ctx, double r);

// upper bound on |sum_{n > N} r^{mu_n} c_n j_n(x)| given ||f||_p <= norm_f:
// norm_f * sum_{n > N} r^{mu_n} n^{delta + 1/2} (x/2)^{2n} / Gamma(alpha+2n+2)
// with delta the norm-growth exponent at the conjugate exponent p' (the
// leading constant is taken as 1; see the calibration tests)
double tail_bound(const AlphaContext& ctx, double p, double norm_f, double x,
                  int N, const SemigroupSpec& spec);

// smallest N with tail_bound <= abs_tol, capped at 40
int choose_truncation(const AlphaContext& ctx, double p, double norm_f,
                      double x, const SemigroupSpec& spec, double abs_tol);

// (2/sqrt(pi)) int_0^inf e^{-u^2} W_{t^2/(4u^2)} f(x) du, the heat-to-
// Poisson subordination; equals sum_n e^{-t(alpha+2n+1)} c_n j_n(x)
double subordinate_poisson(const CoefficientVector& c, double t, double x,
                           const QuadratureConfig& cfg = {});

// scalar version of the same identity: should equal e^{-t sqrt(gamma)}
double subordination_scalar(double t, double gamma,
                            const QuadratureConfig& cfg = {});

struct ResidualResult {
  double residual = 0.0;      // the governing equation applied to the series
  double scale = 0.0;         // max of the two competing terms, for ratios
  double plus_variant = 0.0;  // Poisson only: (d^2/dt^2 + L) u
  bool fd_unstable = false;
};

// (d/dt + L) w for w(t,x) = sum e^{-t(alpha+2n+1)^2} c_n j_n(x); the time
// derivative uses 4th order finite differences by default, or the term-wise
// differentiated series when termwise_dt is set
ResidualResult residual_heat(const CoefficientVector& c, double t, double x,
                             const AlphaContext& ctx,
                             bool termwise_dt = false);

// (d^2/dt^2 - L) u for u(t,x) = sum e^{-t(alpha+2n+1)} c_n j_n(x), plus the
// "+"-sign variant reported through ResidualResult::plus_variant
ResidualResult residual_poisson(const CoefficientVector& c, double t, double x,
                                const AlphaContext& ctx,
                                bool termwise_dt = false);

}  // namespace fnx
