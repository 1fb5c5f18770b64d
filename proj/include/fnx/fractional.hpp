#pragma once

// Negative fractional powers of the Bessel-type operator: the spectral
// series form, the equivalent Poisson-semigroup quadrature form, and the
// potential-space norm diagnostic.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "fnx/expansion.hpp"
#include "fnx/measure.hpp"

namespace fnx {

// coefficients of L^{-lambda/2} f: c_n -> (alpha + 2n + 1)^{-lambda} c_n
CoefficientVector frac_coefficients(const CoefficientVector& c, double lambda,
                                    const AlphaContext& ctx);

// sum_n c_n (alpha + 2n + 1)^{-lambda} j_n(x)
double frac_series(const CoefficientVector& c, double lambda,
                   const AlphaContext& ctx, double x);

// (1/Gamma(lambda)) int_0^1 (-log r)^{lambda-1} P_r f(x) dr / r, computed
// after the substitution r = e^{-t}; agrees with frac_series
double frac_quadrature(const CoefficientVector& c, double lambda,
                       const AlphaContext& ctx, double x,
                       const QuadratureConfig& cfg = {});

// scalar version of the same kernel:
// (1/Gamma(lambda)) int_0^1 (-log r)^{lambda-1} r^gamma dr / r = gamma^{-lambda}
double frac_scalar_kernel(double lambda, double gamma,
                          const QuadratureConfig& cfg = {});

struct PotentialReport {
  std::vector<std::string> labels;
  Eigen::VectorXd ratios;  // ||L^{-s/2} g||_p / ||g||_p per corpus entry
  double max_ratio = 0.0;
  // max over the holdout half stays within a factor 2 of the max
  // calibrated on the fit half
  bool bounded = false;
};

// diagnostic for ||L^{-s/2} g||_p <= C ||g||_p over a corpus; BasisCombo
// entries use exact coefficients, everything else is expanded first
PotentialReport potential_norm_check(const std::vector<FunctionSpec>& corpus,
                                     double s, double p,
                                     const AlphaContext& ctx,
                                     const QuadratureConfig& cfg = {});

}  // namespace fnx
