#pragma once

// The modified Hankel transform H f(y) = int_0^inf J_alpha(xy)/(xy)^alpha
// f(x) dmu(x), the band-limiting multiplier M f = H(chi_[0,1] H f), and the
// comparison of semigroup limits against M.

#include <Eigen/Dense>

#include <functional>

#include "fnx/expansion.hpp"
#include "fnx/measure.hpp"
#include "fnx/semigroup.hpp"

namespace fnx {

struct HankelConfig {
  // functions without compact support are rolled off by a C^8 window that
  // ramps from 1 to 0 over [window_start, 3 * window_start]
  double window_start = 32.0 * M_PI;
  int inner_grid_size = 129;  // transform nodes on [0,1] for the multiplier
  QuadratureConfig quad;
};

// J_alpha(z) / z^alpha, continuous at z = 0 with value 2^{-alpha}/Gamma(alpha+1)
double hankel_kernel(double alpha, double z);

// the roll-off factor used for non-compact inputs: 1 below window_start,
// 0 above 3 * window_start, C^8 in between
double hankel_window(const HankelConfig& cfg, double x);

struct TransformResult {
  Eigen::VectorXd grid;    // strictly increasing, nonnegative
  Eigen::VectorXd values;  // transform at the grid points
  Eigen::VectorXd errs;    // quadrature error estimate per point
  // piecewise-cubic interpolation through the grid values
  double operator()(double y) const;
};

// transform of a callable supported on [0, support_upper]; pass +inf to
// apply the window instead
TransformResult hankel_grid_fn(const std::function<double(double)>& f,
                               double support_upper, const AlphaContext& ctx,
                               const Eigen::VectorXd& grid,
                               const HankelConfig& cfg = {});

TransformResult hankel_grid(const FunctionSpec& f, const AlphaContext& ctx,
                            const Eigen::VectorXd& grid,
                            const HankelConfig& cfg = {});

// single-point transform, y > 0
double hankel(const FunctionSpec& f, const AlphaContext& ctx, double y,
              const HankelConfig& cfg = {});

struct MultiplierResult {
  double value = 0.0;
  double err_estimate = 0.0;  // outer estimate plus the worst inner estimate
};

// M f on a grid of x values: the inner transform is tabulated on
// inner_grid_size Chebyshev nodes in [0,1], cut at 1, and transformed back
TransformResult multiplier_grid_fn(const std::function<double(double)>& f,
                                   double support_upper,
                                   const AlphaContext& ctx,
                                   const Eigen::VectorXd& xgrid,
                                   const HankelConfig& cfg = {});

TransformResult multiplier_grid(const FunctionSpec& f, const AlphaContext& ctx,
                                const Eigen::VectorXd& xgrid,
                                const HankelConfig& cfg = {});

MultiplierResult multiplier_M(const FunctionSpec& f, const AlphaContext& ctx,
                              double x, const HankelConfig& cfg = {});

struct LimitReport {
  Eigen::VectorXd r_values;   // 1 - 2^{-k}, k = 3..10
  Eigen::VectorXd distances;  // max over the grid, semigroup vs multiplier
  double final_distance = 0.0;
  bool monotone_trend = false;  // nonincreasing within 5 percent slack
  bool converged = false;       // final distance <= 5e-3
};

// distance of P_r f (or W_r f) to M f along r -> 1
LimitReport semigroup_limit_vs_M(const FunctionSpec& f, SemigroupKind kind,
                                 const AlphaContext& ctx,
                                 const Eigen::VectorXd& xgrid,
                                 const HankelConfig& cfg = {});

// Chebyshev-Lobatto nodes on [lo, hi], increasing, endpoints included
Eigen::VectorXd chebyshev_grid(int m, double lo, double hi);

}  // namespace fnx
