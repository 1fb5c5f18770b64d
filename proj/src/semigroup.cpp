#include "fnx/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fnx/basis.hpp"
#include "fnx/quadrule.hpp"
#include "fnx/specfun.hpp"

namespace fnx {

namespace {

[[noreturn]] void bad_spec(const char* what, double value) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "semigroup spec: %s (got %.17g)", what,
                value);
  throw std::domain_error(buf);
}

void check_alpha_match(const CoefficientVector& c, double alpha) {
  if (std::abs(c.alpha - alpha) > 1e-12 * (1.0 + std::abs(alpha)))
    bad_spec("coefficient alpha does not match the semigroup alpha", c.alpha);
}

// r^{mu} in long double; the Cesaro weights take second differences of
// these, so the extra digits matter near r = 1
long double rpow(long double log_r, double mu) {
  return expl(static_cast<long double>(mu) * log_r);
}

}  // namespace

double SemigroupSpec::mu(int n) const {
  switch (kind) {
    case SemigroupKind::Poisson:
      return alpha + 2.0 * n + 1.0;
    case SemigroupKind::Heat: {
      double nu = alpha + 2.0 * n + 1.0;
      return nu * nu;
    }
    case SemigroupKind::Custom:
      return custom_mu(n);
  }
  return 0.0;  // unreachable
}

SemigroupSpec SemigroupSpec::poisson(double alpha, double r) {
  SemigroupSpec s;
  s.kind = SemigroupKind::Poisson;
  s.alpha = alpha;
  s.r = r;
  s.growth_constant = 2.0;  // alpha + 2n + 1 >= 2n for alpha > -1
  s.validate();
  return s;
}

SemigroupSpec SemigroupSpec::heat(double alpha, double r) {
  SemigroupSpec s;
  s.kind = SemigroupKind::Heat;
  s.alpha = alpha;
  s.r = r;
  s.growth_constant = 4.0;  // (alpha + 2n + 1)^2 >= 4n^2 >= 4n
  s.validate();
  return s;
}

SemigroupSpec SemigroupSpec::custom(std::function<double(int)> mu, double r,
                                    double growth_constant) {
  SemigroupSpec s;
  s.kind = SemigroupKind::Custom;
  s.r = r;
  s.growth_constant = growth_constant;
  s.custom_mu = std::move(mu);
  s.validate();
  return s;
}

void SemigroupSpec::validate() const {
  if (!(r > 0.0 && r < 1.0)) bad_spec("r must lie in (0,1)", r);
  if (!(growth_constant > 0.0))
    bad_spec("growth constant must be positive", growth_constant);
  if (kind != SemigroupKind::Custom && !(alpha > -1.0))
    bad_spec("alpha must exceed -1", alpha);
  if (kind == SemigroupKind::Custom && !custom_mu)
    throw std::domain_error("semigroup spec: custom kind needs a mu callback");
  // monotonicity and linear growth cannot be checked for every n; sample a
  // prefix, which is where violations from a botched callback show up
  double prev = mu(0);
  for (int n = 1; n <= 64; ++n) {
    double cur = mu(n);
    if (!(cur > prev)) bad_spec("mu must be strictly increasing; fails at n",
                                static_cast<double>(n));
    if (cur < growth_constant * n)
      bad_spec("mu violates the linear growth bound at n",
               static_cast<double>(n));
    prev = cur;
  }
}

SeriesResult eval_series(const CoefficientVector& c, const SemigroupSpec& spec,
                         double x) {
  spec.validate();
  if (spec.kind != SemigroupKind::Custom) check_alpha_match(c, spec.alpha);
  double alpha = c.alpha;
  long double log_r = logl(static_cast<long double>(spec.r));
  long double acc = 0.0L;
  for (int n = 0; n <= c.N; ++n)
    acc += rpow(log_r, spec.mu(n)) * static_cast<long double>(c.coeffs[n]) *
           static_cast<long double>(eval_jn(alpha, n, x));
  SeriesResult out;
  out.value = static_cast<double>(acc);
  out.terms_used = c.N + 1;
  // p = 2 is always inside the admissible window and the coefficient l2
  // norm never exceeds the L2 norm of the expanded function
  AlphaContext ctx = make_alpha_context(alpha);
  out.tail_certificate = tail_bound(ctx, 2.0, c.coeffs.norm(), x, c.N, spec);
  return out;
}

Eigen::VectorXd second_diff_weights(const SemigroupSpec& spec, int N) {
  spec.validate();
  if (N < 0) bad_spec("weight count must be nonnegative", N);
  long double log_r = logl(static_cast<long double>(spec.r));
  Eigen::VectorXd w(N + 1);
  if (spec.kind == SemigroupKind::Poisson) {
    // mu_{n+1} - mu_n = 2, so the second difference factorizes exactly as
    // r^{mu_n} (r^2 - 1)^2; this form avoids the cancellation of the
    // generic path when r is close to 1
    long double r = spec.r;
    long double fac = (r * r - 1.0L) * (r * r - 1.0L);
    for (int n = 0; n <= N; ++n)
      w[n] = static_cast<double>(rpow(log_r, spec.mu(n)) * fac * (n + 1));
    return w;
  }
  for (int n = 0; n <= N; ++n) {
    long double d2 = rpow(log_r, spec.mu(n + 2)) -
                     2.0L * rpow(log_r, spec.mu(n + 1)) +
                     rpow(log_r, spec.mu(n));
    w[n] = static_cast<double>(d2 * (n + 1));
  }
  return w;
}

double weight_total_bound(const SemigroupSpec& spec, int N) {
  spec.validate();
  if (N < 0) bad_spec("weight count must be nonnegative", N);
  // sum_{n=0}^{N} w_n = r^{mu_0} - (N+2) r^{mu_{N+1}} + (N+1) r^{mu_{N+2}},
  // so the missing mass beyond N is (N+2) r^{mu_{N+1}} - (N+1) r^{mu_{N+2}}
  long double log_r = logl(static_cast<long double>(spec.r));
  long double a = rpow(log_r, spec.mu(N + 1));
  long double b = rpow(log_r, spec.mu(N + 2));
  return static_cast<double>((N + 1) * fabsl(a - b) + a);
}

double eval_cesaro_rep(const CoefficientVector& c, const SemigroupSpec& spec,
                       double x) {
  spec.validate();
  if (spec.kind != SemigroupKind::Custom) check_alpha_match(c, spec.alpha);
  double alpha = c.alpha;
  int N = c.N;
  std::vector<double> jv(N + 1);
  for (int k = 0; k <= N; ++k) jv[k] = eval_jn(alpha, k, x);

  // Cesaro means of index n >= N include every stored coefficient, so they
  // collapse to A - P/(n+1); the weighted tail then sums in closed form
  // through the same telescoping that gives weight_total_bound.
  long double A = 0.0L, P = 0.0L;
  for (int k = 0; k <= N; ++k) {
    long double term =
        static_cast<long double>(c.coeffs[k]) * static_cast<long double>(jv[k]);
    A += term;
    P += k * term;
  }

  long double acc = 0.0L;
  if (N > 0) {
    Eigen::VectorXd w = second_diff_weights(spec, N - 1);
    for (int n = 0; n < N; ++n) {
      long double cn = 0.0L;
      for (int k = 0; k <= n; ++k)
        cn += (1.0L - static_cast<long double>(k) / (n + 1)) *
              static_cast<long double>(c.coeffs[k]) *
              static_cast<long double>(jv[k]);
      acc += static_cast<long double>(w[n]) * cn;
    }
  }

  long double log_r = logl(static_cast<long double>(spec.r));
  long double rN = rpow(log_r, spec.mu(N));
  long double rN1 = rpow(log_r, spec.mu(N + 1));
  // sum_{n >= N} w_n = (N+1) r^{mu_N} - N r^{mu_{N+1}}
  // sum_{n >= N} w_n/(n+1) = r^{mu_N} - r^{mu_{N+1}}
  acc += A * ((N + 1) * rN - static_cast<long double>(N) * rN1);
  acc -= P * (rN - rN1);
  return static_cast<double>(acc);
}

double crossover_index(const AlphaContext& ctx, double r) {
  if (!(r > 0.5 && r < 1.0))
    bad_spec("crossover needs r in (1/2, 1)", r);
  double log_r = std::log(r);
  // 1 - r^8 through expm1 so nothing is lost when r is close to 1
  double L = std::log1p(std::sqrt(-std::expm1(8.0 * log_r))) / (-log_r);
  auto g = [&](double n) { return 4.0 * (ctx.alpha + 2.0 * n + 2.0) - L; };
  // g is increasing in n; the root can sit below zero when r is small, so
  // the bracket is widened on the left before bisecting
  double lo = std::min(0.0, L / 8.0 - (ctx.alpha + 2.0) / 2.0 - 1.0);
  double hi = 1e6;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tail_bound(const AlphaContext& ctx, double p, double norm_f, double x,
                  int N, const SemigroupSpec& spec) {
  spec.validate();
  if (N < 0) bad_spec("tail start must be nonnegative", N);
  if (!(norm_f >= 0.0)) bad_spec("norm bound must be nonnegative", norm_f);
  if (!(p > ctx.p0 && p < ctx.p1))
    bad_spec("p outside the admissible window", p);
  if (x == 0.0 || norm_f == 0.0) return 0.0;
  // the pairing of the dropped modes against f is controlled by their norms
  // at the conjugate exponent; the window is self-dual, so p' is admissible
  double pprime = p / (p - 1.0);
  NormGrowthModel model = jn_norm_model(ctx.alpha, pprime);
  double delta = model.exponent;
  double log_r = std::log(spec.r);
  double lx2 = std::log(0.5 * x);
  double acc = 0.0;
  for (int n = N + 1; n <= N + 5000; ++n) {
    double lt = spec.mu(n) * log_r + (delta + 0.5) * std::log(double(n)) +
                2.0 * n * lx2 - gamma_ln(ctx.alpha + 2.0 * n + 2.0);
    if (model.has_log_factor && n >= 3)
      lt += 0.25 * std::log(std::log(double(n)));
    if (lt < -700.0) {
      if (acc > 0.0) break;  // past the hump and underflowing
      continue;              // still climbing toward the hump
    }
    double t = std::exp(lt);
    acc += t;
    if (t <= 1e-18 * acc) break;
  }
  return norm_f * acc;
}

int choose_truncation(const AlphaContext& ctx, double p, double norm_f,
                      double x, const SemigroupSpec& spec, double abs_tol) {
  for (int N = 0; N < 40; ++N)
    if (tail_bound(ctx, p, norm_f, x, N, spec) <= abs_tol) return N;
  return 40;
}

namespace {

// (2/sqrt(pi)) int_0^6 e^{-u^2} F(u) du where F(u) = e^{-q_min/u^2} * (a
// bounded smooth factor). The integrand turns on across a boundary layer
// around u = sqrt(q_min), which can sit anywhere in (0, 1), so the panels
// are graded geometrically toward zero; each octave then sees a smooth
// function. splits = 1 doubles the panel count for the accuracy check.
template <class F>
double subord_integral(const F& f, double q_min, int order, int splits) {
  const GLRule& rule = gl_rule(order);
  // below u = sqrt(q_min / 750) the factor e^{-q_min/u^2} underflows
  double floor_u = std::sqrt(q_min / 750.0);
  double acc = 0.0;
  double b = 6.0;
  while (b > floor_u && b > 1e-280) {
    double a = std::max(0.5 * b, floor_u);
    int nsub = 1 << splits;
    for (int s = 0; s < nsub; ++s) {
      double sa = a + (b - a) * s / nsub;
      double sb = a + (b - a) * (s + 1) / nsub;
      double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
      for (int i = 0; i < order; ++i) {
        double u = mid + half * rule.x[i];
        acc += half * rule.w[i] * std::exp(-u * u) * f(u);
      }
    }
    b = a;
  }
  return acc * (2.0 / std::sqrt(M_PI));
}

template <class F>
double subordinate_checked(const F& f, double q_min,
                           const QuadratureConfig& cfg) {
  double coarse = subord_integral(f, q_min, cfg.panel_rule_order, 0);
  double fine = subord_integral(f, q_min, cfg.panel_rule_order, 1);
  double disagree = std::abs(fine - coarse);
  if (disagree > 10.0 * (cfg.abs_tol + cfg.rel_tol * std::abs(fine))) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "subordination quadrature did not settle (refinement "
                  "moved the value by %.3g)",
                  disagree);
    throw quadrature_error(buf);
  }
  return fine;
}

}  // namespace

double subordinate_poisson(const CoefficientVector& c, double t, double x,
                           const QuadratureConfig& cfg) {
  if (!(t > 0.0)) bad_spec("subordination time must be positive", t);
  int N = c.N;
  std::vector<double> a(N + 1), mu2(N + 1);
  for (int k = 0; k <= N; ++k) {
    a[k] = c.coeffs[k] * eval_jn(c.alpha, k, x);
    double nu = c.alpha + 2.0 * k + 1.0;
    mu2[k] = nu * nu;
  }
  double q = 0.25 * t * t;
  auto heat_at = [&](double u) {
    double s = q / (u * u);
    double acc = 0.0;
    for (int k = 0; k <= N; ++k) acc += a[k] * std::exp(-s * mu2[k]);
    return acc;
  };
  return subordinate_checked(heat_at, q * mu2[0], cfg);
}

double subordination_scalar(double t, double gamma,
                            const QuadratureConfig& cfg) {
  if (!(t > 0.0)) bad_spec("subordination time must be positive", t);
  if (!(gamma > 0.0)) bad_spec("subordination rate must be positive", gamma);
  double q = 0.25 * t * t * gamma;
  auto f = [&](double u) { return std::exp(-q / (u * u)); };
  return subordinate_checked(f, q, cfg);
}

namespace {

struct SeriesOnAxis {
  std::vector<double> a;   // c_k j_k(x)
  std::vector<double> la;  // c_k L j_k(x)
  std::vector<double> mu;  // decay rates

  double at(double t) const {
    double acc = 0.0;
    for (size_t k = 0; k < a.size(); ++k) acc += a[k] * std::exp(-t * mu[k]);
    return acc;
  }
  double l_at(double t) const {
    double acc = 0.0;
    for (size_t k = 0; k < la.size(); ++k) acc += la[k] * std::exp(-t * mu[k]);
    return acc;
  }
};

SeriesOnAxis build_series(const CoefficientVector& c, double x, bool heat) {
  SeriesOnAxis s;
  int N = c.N;
  s.a.resize(N + 1);
  s.la.resize(N + 1);
  s.mu.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    s.a[k] = c.coeffs[k] * eval_jn(c.alpha, k, x);
    s.la[k] = c.coeffs[k] * apply_L_jn(c.alpha, k, x);
    double nu = c.alpha + 2.0 * k + 1.0;
    s.mu[k] = heat ? nu * nu : nu;
  }
  return s;
}

struct FdDeriv {
  double value = 0.0;
  bool unstable = false;
};

// 4th order first or second t-derivative with step halving; the instability
// heuristic mirrors apply_L_fd in the basis module
template <class F>
FdDeriv fd_time_deriv(const F& f, double t, double h0, bool second) {
  auto stencil = [&](double h) {
    double fm2 = f(t - 2 * h), fm1 = f(t - h);
    double fp1 = f(t + h), fp2 = f(t + 2 * h);
    if (second)
      return (-fm2 + 16.0 * fm1 - 30.0 * f(t) + 16.0 * fp1 - fp2) /
             (12.0 * h * h);
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  };
  double v1 = stencil(h0), v2 = stencil(0.5 * h0), v3 = stencil(0.25 * h0);
  double d12 = std::abs(v1 - v2), d23 = std::abs(v2 - v3);
  double scale = std::max({1.0, std::abs(v1), std::abs(v3)});
  FdDeriv out;
  out.unstable = d23 > 3e-6 * scale && d23 > 0.5 * d12;
  out.value = (d23 < d12) ? v3 : v1;
  return out;
}

}  // namespace

ResidualResult residual_heat(const CoefficientVector& c, double t, double x,
                             const AlphaContext& ctx, bool termwise_dt) {
  check_alpha_match(c, ctx.alpha);
  if (!(t > 0.0)) bad_spec("residual time must be positive", t);
  SeriesOnAxis s = build_series(c, x, /*heat=*/true);
  double lw = s.l_at(t);
  ResidualResult out;
  double dt;
  if (termwise_dt) {
    double acc = 0.0;
    for (size_t k = 0; k < s.a.size(); ++k)
      acc += -s.mu[k] * s.a[k] * std::exp(-t * s.mu[k]);
    dt = acc;
  } else {
    // the stencil error scales like (h mu_max)^4, so the step shrinks with
    // the stiffest mode present
    double mu_max = s.mu.empty() ? 1.0 : s.mu.back();
    double h0 = std::min(t / 3.0, 0.04 / std::max(1.0, mu_max));
    FdDeriv d = fd_time_deriv([&](double tt) { return s.at(tt); }, t, h0,
                              /*second=*/false);
    dt = d.value;
    out.fd_unstable = d.unstable;
  }
  out.residual = dt + lw;
  out.scale = std::max(std::abs(dt), std::abs(lw));
  return out;
}

ResidualResult residual_poisson(const CoefficientVector& c, double t, double x,
                                const AlphaContext& ctx, bool termwise_dt) {
  check_alpha_match(c, ctx.alpha);
  if (!(t > 0.0)) bad_spec("residual time must be positive", t);
  SeriesOnAxis s = build_series(c, x, /*heat=*/false);
  double lu = s.l_at(t);
  ResidualResult out;
  double dtt;
  if (termwise_dt) {
    double acc = 0.0;
    for (size_t k = 0; k < s.a.size(); ++k)
      acc += s.mu[k] * s.mu[k] * s.a[k] * std::exp(-t * s.mu[k]);
    dtt = acc;
  } else {
    double nu_max = s.mu.empty() ? 1.0 : s.mu.back();
    double h0 = std::min(t / 3.0, 0.1 / std::max(1.0, nu_max));
    FdDeriv d = fd_time_deriv([&](double tt) { return s.at(tt); }, t, h0,
                              /*second=*/true);
    dtt = d.value;
    out.fd_unstable = d.unstable;
  }
  out.residual = dtt - lu;
  out.plus_variant = dtt + lu;
  out.scale = std::max(std::abs(dtt), std::abs(lu));
  return out;
}

}  // namespace fnx
