#pragma once

// The orthonormal family j_n(x) = sqrt(2(alpha+2n+1)) J_{alpha+2n+1}(x)
// x^{-alpha-1} in L^2(d mu_alpha), the second order operator it
// diagonalizes, and the growth model for its L^p norms.

#include <Eigen/Dense>

#include <functional>
#include <utility>

#include "fnx/measure.hpp"

namespace fnx {

struct BasisIndex {
  double alpha = 0.0;
  int n = 0;
  double nu() const { return alpha + 2.0 * n + 1.0; }
  // eigenvalue of the operator on j_n
  double eigenvalue() const {
    const double v = nu();
    return v * v;
  }
};

// j_n(x); small arguments go through a series in x^2 so the x^{-alpha-1}
// factor never overflows. Throws std::domain_error for alpha <= -1, n < 0
// or x < 0.
double eval_jn(double alpha, int n, double x);

// L f = x^2 f'' + (2 alpha + 3) x f' + (x^2 + (alpha+1)^2) f, assembled
// from caller-supplied derivatives
double apply_L_exact(double alpha, double x, double f, double fp, double fpp);

// L applied to j_n through Bessel derivative relations (the n-th member is
// never special-cased through its eigenvalue, so this is usable as an
// independent check of the eigenrelation)
double apply_L_jn(double alpha, int n, double x);

struct ApplyLResult {
  double value = 0.0;
  double err_estimate = 0.0;  // step-halving difference
  bool unstable = false;      // halving the step failed to help
};

// L via 4th order central differences; h = 0 selects 1e-4 * max(1, x),
// clamped so the stencil stays inside (0, inf)
ApplyLResult apply_L_fd(const std::function<double(double)>& f, double alpha,
                        double x, double h = 0.0);

// exponent window (p0, p1) on which the expansion machinery is claimed
std::pair<double, double> p_range(double alpha);

enum class NormRegime { Subcritical, Critical, Supercritical };

// || j_n ||_p ~ C n^exponent (log n)^{1/4 if critical}; the regime switches
// at p = 4 and the exponent is continuous across it
struct NormGrowthModel {
  NormRegime regime = NormRegime::Subcritical;
  double exponent = 0.0;
  bool has_log_factor = false;
  double value(int n) const;  // requires n >= 2
};

// requires p > p0(alpha); the norm is infinite otherwise
NormGrowthModel jn_norm_model(double alpha, double p);

// Gram matrix of { j_0 .. j_nmax } under d mu_alpha, every pair integrated
// in one vector pass so Bessel evaluations are shared across pairs
Eigen::MatrixXd gram_matrix(double alpha, int nmax,
                            const QuadratureConfig& cfg = {});

}  // namespace fnx
