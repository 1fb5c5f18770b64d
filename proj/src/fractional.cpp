#include "fnx/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fnx/basis.hpp"
#include "fnx/quadrule.hpp"
#include "fnx/specfun.hpp"

namespace fnx {

namespace {

[[noreturn]] void bad_arg(const char* what, double value) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "fractional: %s (got %.17g)", what, value);
  throw std::domain_error(buf);
}

void check_inputs(const CoefficientVector& c, double lambda,
                  const AlphaContext& ctx) {
  if (!(lambda > 0.0)) bad_arg("order must be positive", lambda);
  if (std::abs(c.alpha - ctx.alpha) > 1e-12 * (1.0 + std::abs(ctx.alpha)))
    bad_arg("coefficient alpha does not match the context", c.alpha);
}

// int_0^inf t^{lambda-1} g(t) dt for g(t) = sum a_k e^{-t nu_k}, nu_k > 0
// increasing. Geometric octaves handle the algebraic endpoint behavior at
// t = 0 (singular for lambda < 1, merely non-smooth otherwise) and run out
// to where e^{-t nu_0} underflows. splits doubles the panels per octave.
double kernel_integral(const std::vector<double>& a,
                       const std::vector<double>& nu, double lambda, int order,
                       int splits) {
  const GLRule& rule = gl_rule(order);
  // mass below 2^{-kd} is O(2^{-kd lambda} / lambda); push it under 1e-15
  int kd = std::min(2000, static_cast<int>(std::ceil(47.0 / lambda)) + 4);
  int ku = static_cast<int>(std::ceil(std::log2(745.0 / nu[0]))) + 1;
  double acc = 0.0;
  for (int oct = -kd; oct < ku; ++oct) {
    double lo = std::ldexp(1.0, oct);
    double hi = 2.0 * lo;
    int nsub = 1 << splits;
    for (int s = 0; s < nsub; ++s) {
      double sa = lo + (hi - lo) * s / nsub;
      double sb = lo + (hi - lo) * (s + 1) / nsub;
      double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
      for (int i = 0; i < order; ++i) {
        double t = mid + half * rule.x[i];
        double g = 0.0;
        for (size_t k = 0; k < a.size(); ++k) g += a[k] * std::exp(-t * nu[k]);
        acc += half * rule.w[i] * std::pow(t, lambda - 1.0) * g;
      }
    }
  }
  return acc;
}

double kernel_checked(const std::vector<double>& a,
                      const std::vector<double>& nu, double lambda,
                      const QuadratureConfig& cfg) {
  double coarse = kernel_integral(a, nu, lambda, cfg.panel_rule_order, 0);
  double fine = kernel_integral(a, nu, lambda, cfg.panel_rule_order, 1);
  double disagree = std::abs(fine - coarse);
  if (disagree > 10.0 * (cfg.abs_tol + cfg.rel_tol * std::abs(fine))) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "fractional kernel quadrature did not settle (refinement "
                  "moved the value by %.3g)",
                  disagree);
    throw quadrature_error(buf);
  }
  return fine / gamma_fn(lambda);
}

}  // namespace

CoefficientVector frac_coefficients(const CoefficientVector& c, double lambda,
                                    const AlphaContext& ctx) {
  check_inputs(c, lambda, ctx);
  CoefficientVector out = c;
  for (int n = 0; n <= c.N; ++n) {
    double nu = ctx.alpha + 2.0 * n + 1.0;
    out.coeffs[n] = c.coeffs[n] * std::exp(-lambda * std::log(nu));
  }
  return out;
}

double frac_series(const CoefficientVector& c, double lambda,
                   const AlphaContext& ctx, double x) {
  CoefficientVector damped = frac_coefficients(c, lambda, ctx);
  return partial_sum(damped, damped.N, x);
}

double frac_quadrature(const CoefficientVector& c, double lambda,
                       const AlphaContext& ctx, double x,
                       const QuadratureConfig& cfg) {
  check_inputs(c, lambda, ctx);
  std::vector<double> a(c.N + 1), nu(c.N + 1);
  for (int k = 0; k <= c.N; ++k) {
    a[k] = c.coeffs[k] * eval_jn(ctx.alpha, k, x);
    nu[k] = ctx.alpha + 2.0 * k + 1.0;
  }
  return kernel_checked(a, nu, lambda, cfg);
}

double frac_scalar_kernel(double lambda, double gamma,
                          const QuadratureConfig& cfg) {
  if (!(lambda > 0.0)) bad_arg("order must be positive", lambda);
  if (!(gamma > 0.0)) bad_arg("decay rate must be positive", gamma);
  return kernel_checked({1.0}, {gamma}, lambda, cfg);
}

PotentialReport potential_norm_check(const std::vector<FunctionSpec>& corpus,
                                     double s, double p,
                                     const AlphaContext& ctx,
                                     const QuadratureConfig& cfg) {
  if (!(s > 0.0)) bad_arg("potential order must be positive", s);
  if (!(p > ctx.p0 && p < ctx.p1))
    bad_arg("p outside the admissible window", p);

  PotentialReport rep;
  rep.labels.reserve(corpus.size());
  rep.ratios = Eigen::VectorXd::Zero(static_cast<int>(corpus.size()));

  for (size_t i = 0; i < corpus.size(); ++i) {
    const FunctionSpec& g = corpus[i];
    rep.labels.push_back(describe(g));
    CoefficientVector c = g.kind == FunctionKind::BasisCombo
                              ? combo_coefficients(g, ctx.alpha)
                              : expand(g, 16, ctx, cfg);
    CoefficientVector damped = frac_coefficients(c, s, ctx);
    std::vector<std::pair<int, double>> terms;
    for (int n = 0; n <= damped.N; ++n)
      if (damped.coeffs[n] != 0.0) terms.emplace_back(n, damped.coeffs[n]);
    if (terms.empty()) {
      rep.ratios[static_cast<int>(i)] = 0.0;
      continue;
    }
    FunctionSpec hg = FunctionSpec::basis_combo(terms);
    double num = lp_norm_spec(hg, p, ctx, cfg);
    double den = lp_norm_spec(g, p, ctx, cfg);
    rep.ratios[static_cast<int>(i)] = num / den;
  }

  rep.max_ratio = corpus.empty() ? 0.0 : rep.ratios.maxCoeff();
  int fit = static_cast<int>((corpus.size() + 1) / 2);
  if (fit > 0 && fit < rep.ratios.size()) {
    double c_fit = rep.ratios.head(fit).maxCoeff();
    double c_hold = rep.ratios.tail(rep.ratios.size() - fit).maxCoeff();
    rep.bounded = c_hold <= 2.0 * c_fit && std::isfinite(rep.max_ratio);
  } else {
    rep.bounded = std::isfinite(rep.max_ratio);
  }
  return rep;
}

}  // namespace fnx
