#include "fnx/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "fnx/basis.hpp"
#include "fnx/expansion.hpp"
#include "fnx/fractional.hpp"
#include "fnx/hankel.hpp"
#include "fnx/measure.hpp"
#include "fnx/semigroup.hpp"
#include "fnx/specfun.hpp"

namespace fnx {

namespace {

std::string strf(const char* format, ...) {
  char buf[160];
  va_list ap;
  va_start(ap, format);
  std::vsnprintf(buf, sizeof buf, format, ap);
  va_end(ap);
  return std::string(buf);
}

CheckResult check_leq(std::string name, double value, double limit) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.pass = std::isfinite(value) && value <= limit;
  return c;
}

std::vector<double> alpha_sweep(const VerifyOptions& opt,
                                std::initializer_list<double> def) {
  if (!opt.alphas.empty()) return opt.alphas;
  return std::vector<double>(def);
}

double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

// coefficients for a corpus entry: combos are read off exactly, everything
// else is expanded far enough that the dropped tail is out of reach of the
// tolerances here (these inputs have factorially decaying coefficients)
CoefficientVector coeffs_for(const FunctionSpec& f, const AlphaContext& ctx) {
  if (f.kind == FunctionKind::BasisCombo)
    return combo_coefficients(f, ctx.alpha);
  return expand(f, 40, ctx);
}

// || sum_n d_n j_n ||_p, computed at unit scale so the quadrature tolerances
// stay relative to the function, then rescaled; terms below 1e-14 of the
// largest weight cannot move the norm at the tolerances used here
double damped_norm(const Eigen::VectorXd& d, double p,
                   const AlphaContext& ctx) {
  const double top = d.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  std::vector<std::pair<int, double>> terms;
  for (int n = 0; n < d.size(); ++n) {
    if (std::abs(d[n]) > 1e-14 * top) terms.push_back({n, d[n] / top});
  }
  return top * lp_norm_spec(FunctionSpec::basis_combo(terms), p, ctx);
}

void suite_orthonormality(const VerifyOptions& opt, SuiteResult& out) {
  const int nmax = opt.nmax >= 0 ? opt.nmax : 10;
  for (double alpha : alpha_sweep(opt, {-0.9, -0.5, 0.0, 1.0, 2.5})) {
    Eigen::MatrixXd g = gram_matrix(alpha, nmax);
    double dev =
        (g - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff();
    out.checks.push_back(
        check_leq(strf("gram residual alpha=%g nmax=%d", alpha, nmax), dev,
                  1e-7));
  }
}

void suite_eigenrelation(const VerifyOptions& opt, SuiteResult& out) {
  const int nmax = opt.nmax >= 0 ? opt.nmax : 8;
  for (double alpha : alpha_sweep(opt, {-0.9, -0.5, 0.0, 1.0, 2.5})) {
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n) {
      const double lam = BasisIndex{alpha, n}.eigenvalue();
      for (double x : {0.5, 1.0, 5.0, 20.0}) {
        double jn = eval_jn(alpha, n, x);
        double rel = std::abs(apply_L_jn(alpha, n, x) - lam * jn) /
                     (1.0 + std::abs(jn) * lam);
        worst = std::max(worst, rel);
      }
    }
    out.checks.push_back(check_leq(
        strf("operator residual alpha=%g nmax=%d", alpha, nmax), worst, 1e-6));
  }
}

void suite_cesaro(const VerifyOptions& opt, SuiteResult& out) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> wdist(-1.0, 1.0);
  std::uniform_real_distribution<double> xdist(0.3, 8.0);
  const double rs[3] = {0.3, 0.9, 0.99};
  double worst[2][3] = {};
  for (int trial = 0; trial < 100; ++trial) {
    CoefficientVector c;
    c.alpha = 0.0;
    c.N = 12;
    c.coeffs = Eigen::VectorXd::Zero(13);
    const int active = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < active; ++i)
      c.coeffs[static_cast<int>(rng() % 13)] = wdist(rng);
    const double x = xdist(rng);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 3; ++j) {
        SemigroupSpec s = (k == 0) ? SemigroupSpec::poisson(0.0, rs[j])
                                   : SemigroupSpec::heat(0.0, rs[j]);
        double a = eval_series(c, s, x).value;
        double b = eval_cesaro_rep(c, s, x);
        worst[k][j] = std::max(worst[k][j], std::abs(a - b));
      }
    }
  }
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 3; ++j) {
      out.checks.push_back(
          check_leq(strf("series vs cesaro rep %s r=%g over 100 trials",
                         k == 0 ? "poisson" : "heat", rs[j]),
                    worst[k][j], 1e-8));
    }
  }
}

void suite_parts(const VerifyOptions& opt, SuiteResult& out) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int len = 5 + static_cast<int>(rng() % 40);
    std::vector<double> a(len + 2, 0.0), b(len + 2, 0.0);
    for (int i = 0; i < len; ++i) {
      a[i] = dist(rng);
      b[i] = dist(rng);
    }
    double lhs = 0.0, rhs = 0.0;
    for (int n = 0; n <= len; ++n) {
      const double bprev = (n == 0) ? 0.0 : b[n - 1];
      lhs += a[n] * (b[n] - bprev);
      rhs -= (a[n + 1] - a[n]) * b[n];
    }
    worst = std::max(worst, std::abs(lhs - rhs) /
                                std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
  out.checks.push_back(
      check_leq("abel identity over 1000 random pairs", worst, 1e-14));
}

void suite_weights(const VerifyOptions& opt, SuiteResult& out) {
  const double r = 0.9;
  const long double fac = (static_cast<long double>(r) * r - 1.0L) *
                          (static_cast<long double>(r) * r - 1.0L);
  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.7})) {
    SemigroupSpec p = SemigroupSpec::poisson(alpha, r);
    Eigen::VectorXd w = second_diff_weights(p, 200);
    double worst = 0.0;
    for (int n = 0; n <= 200; ++n) {
      const long double ref = powl(r, alpha + 2.0L * n + 1.0L) * fac;
      worst = std::max(
          worst, std::abs(static_cast<double>((w[n] / (n + 1) - ref) / ref)));
    }
    out.checks.push_back(check_leq(
        strf("weight factorization alpha=%g r=%g", alpha, r), worst, 1e-14));
    out.checks.push_back(
        check_leq(strf("weight telescoping alpha=%g r=%g N=200", alpha, r),
                  std::abs(w.sum() - std::pow(r, alpha + 1.0)), 1e-10));
  }
}

void suite_crossover(const VerifyOptions& opt, SuiteResult& out) {
  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
    AlphaContext ctx = make_alpha_context(alpha);
    int bad = 0;
    for (double r : {0.8, 0.95, 0.99, 0.999}) {
      const int split = std::max(
          0, static_cast<int>(std::ceil(crossover_index(ctx, r) - 1e-9)));
      Eigen::VectorXd w = second_diff_weights(SemigroupSpec::heat(alpha, r), 300);
      for (int n = 0; n <= 300; ++n) {
        if (std::abs(w[n]) < 1e-300) continue;  // underflowed, sign is noise
        if ((n < split) != (w[n] < 0.0)) ++bad;
      }
    }
    out.checks.push_back(check_leq(
        strf("sign split mismatches alpha=%g across four r values", alpha),
        static_cast<double>(bad), 0.0));
  }

  // the integer index is clamped at 1, which biases the small-k fit for
  // alpha away from 0; the raw real root shows the exponent for every alpha
  AlphaContext ctx0 = make_alpha_context(0.0);
  std::vector<double> xs, ys;
  for (int k = 3; k <= 12; ++k) {
    const double eps = std::pow(2.0, -k);
    const int n = std::max(
        1, static_cast<int>(std::ceil(crossover_index(ctx0, 1.0 - eps))));
    xs.push_back(std::log(eps));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  out.checks.push_back(check_leq("integer index slope alpha=0 k=3..12 vs -1/2",
                                 std::abs(slope_fit(xs, ys) + 0.5), 0.05));
  for (double alpha : {-0.9, -0.5, 0.0, 1.0}) {
    AlphaContext ctx = make_alpha_context(alpha);
    std::vector<double> xr, yr;
    for (int k = 12; k <= 21; ++k) {
      const double eps = std::pow(2.0, -k);
      xr.push_back(std::log(eps));
      yr.push_back(std::log(crossover_index(ctx, 1.0 - eps)));
    }
    out.checks.push_back(
        check_leq(strf("real root slope alpha=%g k=12..21 vs -1/2", alpha),
                  std::abs(slope_fit(xr, yr) + 0.5), 0.05));
  }
}

// two four-function corpora; all entries are dominated by low basis modes,
// so the norm ratios probe the operators rather than single-mode decay
std::vector<FunctionSpec> corpus_half(bool holdout) {
  if (!holdout) {
    return {FunctionSpec::basis_combo({{0, 1.0}, {3, 0.25}}),
            FunctionSpec::indicator(0.0, 1.0), FunctionSpec::bump(0.5, 2.0),
            FunctionSpec::poly_exp(1)};
  }
  return {FunctionSpec::basis_combo({{0, 1.0}, {1, 0.2}, {2, -0.15}}),
          FunctionSpec::indicator(0.0, 1.5), FunctionSpec::bump(1.0, 2.5),
          FunctionSpec::poly_exp(2)};
}

void suite_norm_decay(const VerifyOptions& opt, SuiteResult& out) {
  const std::vector<FunctionSpec> cal = corpus_half(false);
  const std::vector<FunctionSpec> hold = corpus_half(true);
  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
    AlphaContext ctx = make_alpha_context(alpha);
    std::vector<CoefficientVector> ccal, chold;
    for (const auto& f : cal) ccal.push_back(coeffs_for(f, ctx));
    for (const auto& f : hold) chold.push_back(coeffs_for(f, ctx));
    for (double p : {2.0, 3.0}) {
      auto ratio_max = [&](const std::vector<FunctionSpec>& fs,
                           const std::vector<CoefficientVector>& cs) {
        double worst = 0.0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
          const double base = lp_norm_spec(fs[i], p, ctx);
          for (double r : {0.3, 0.7, 0.95}) {
            SemigroupSpec s = SemigroupSpec::poisson(alpha, r);
            Eigen::VectorXd d = cs[i].coeffs;
            for (int n = 0; n < d.size(); ++n) d[n] *= std::pow(r, s.mu(n));
            worst = std::max(worst, damped_norm(d, p, ctx) /
                                        (std::pow(r, alpha + 1.0) * base));
          }
        }
        return worst;
      };
      const double cfit = ratio_max(cal, ccal);
      out.checks.push_back(check_leq(
          strf("holdout ratio vs 2x calibrated alpha=%g p=%g", alpha, p),
          ratio_max(hold, chold), 2.0 * cfit));
    }
  }
}

void suite_boundedness(const VerifyOptions& opt, SuiteResult& out) {
  std::vector<FunctionSpec> corpus = corpus_half(false);
  {
    std::vector<FunctionSpec> hold = corpus_half(true);
    corpus.insert(corpus.end(), hold.begin(), hold.end());
  }
  const double rs[4] = {0.5, 0.9, 0.99, 0.999};
  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
    AlphaContext ctx = make_alpha_context(alpha);
    std::vector<CoefficientVector> cs;
    std::vector<double> base;
    for (const auto& f : corpus) cs.push_back(coeffs_for(f, ctx));
    for (double p : {2.0, 3.0}) {
      base.clear();
      for (const auto& f : corpus) base.push_back(lp_norm_spec(f, p, ctx));
      double m[4] = {};
      for (int j = 0; j < 4; ++j) {
        SemigroupSpec s = SemigroupSpec::heat(alpha, rs[j]);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          Eigen::VectorXd d = cs[i].coeffs;
          for (int n = 0; n < d.size(); ++n) d[n] *= std::pow(rs[j], s.mu(n));
          m[j] = std::max(m[j], damped_norm(d, p, ctx) / base[i]);
        }
      }
      out.checks.push_back(check_leq(
          strf("ratio at r=0.999 vs 1.1x earlier max alpha=%g p=%g", alpha, p),
          m[3], 1.1 * std::max({m[0], m[1], m[2]})));
    }
  }
}

void suite_convergence(const VerifyOptions& opt, SuiteResult& out) {
  (void)opt;
  const FunctionSpec f =
      FunctionSpec::basis_combo({{0, 1.0}, {2, 0.5}, {5, -0.3}});
  const std::pair<double, double> grid[4] = {
      {-0.5, 2.0}, {0.0, 2.0}, {0.0, 3.0}, {1.0, 2.0}};
  for (const auto& [alpha, p] : grid) {
    AlphaContext ctx = make_alpha_context(alpha);
    CoefficientVector c = combo_coefficients(f, alpha);
    for (int kind = 0; kind < 2; ++kind) {
      const char* kname = kind == 0 ? "poisson" : "heat";
      auto dist_at = [&](int k) {
        const double r = 1.0 - std::pow(2.0, -k);
        SemigroupSpec s = kind == 0 ? SemigroupSpec::poisson(alpha, r)
                                    : SemigroupSpec::heat(alpha, r);
        Eigen::VectorXd d = c.coeffs;
        for (int n = 0; n < d.size(); ++n)
          d[n] *= std::pow(r, s.mu(n)) - 1.0;
        return damped_norm(d, p, ctx);
      };
      double prev = dist_at(1);
      double worst_ratio = 0.0;
      double dist = prev;
      for (int k = 2; k <= 10; ++k) {
        dist = dist_at(k);
        worst_ratio = std::max(worst_ratio, dist / prev);
        prev = dist;
      }
      out.checks.push_back(check_leq(
          strf("distance ratio %s alpha=%g p=%g k=1..10", kname, alpha, p),
          worst_ratio, 1.0));
      int k = 10;
      while (dist > 1e-6 && k < 40) dist = dist_at(++k);
      out.checks.push_back(check_leq(
          strf("final distance %s alpha=%g p=%g k=%d", kname, alpha, p, k),
          dist, 1e-6));

      // pointwise variant at the final r
      const double r = 1.0 - std::pow(2.0, -k);
      SemigroupSpec s = kind == 0 ? SemigroupSpec::poisson(alpha, r)
                                  : SemigroupSpec::heat(alpha, r);
      double pw = 0.0;
      for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        pw = std::max(pw, std::abs(eval_series(c, s, x).value -
                                   evaluate(f, alpha, x)));
      }
      out.checks.push_back(check_leq(
          strf("pointwise gap %s alpha=%g k=%d", kname, alpha, k), pw, 1e-6));
    }
  }
}

void suite_pde(const VerifyOptions& opt, SuiteResult& out) {
  std::vector<CoefficientVector> inputs;
  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
    CoefficientVector c1;
    c1.alpha = alpha;
    c1.N = 2;
    c1.coeffs = Eigen::VectorXd(3);
    c1.coeffs << 1.0, 0.0, 0.5;
    CoefficientVector c2;
    c2.alpha = alpha;
    c2.N = 3;
    c2.coeffs = Eigen::VectorXd(4);
    c2.coeffs << 0.0, 0.7, 0.0, -0.4;

    AlphaContext ctx = make_alpha_context(alpha);
    double heat_rel = 0.0, poisson_rel = 0.0, plus_rel = 0.0;
    for (const CoefficientVector& c : {c1, c2}) {
      for (double t : {0.3, 1.0}) {
        for (double x : {0.5, 1.0, 2.0, 5.0}) {
          ResidualResult rh = residual_heat(c, t, x, ctx);
          heat_rel = std::max(heat_rel,
                              std::abs(rh.residual) / (rh.scale + 1e-30));
          ResidualResult rp = residual_poisson(c, t, x, ctx);
          poisson_rel = std::max(
              poisson_rel, std::abs(rp.residual) / (rp.scale + 1e-30));
          // the "+"-sign variant must equal twice the nu^2-weighted series
          double want = 0.0, scale = 0.0;
          for (int n = 0; n <= c.N; ++n) {
            const double nu = alpha + 2.0 * n + 1.0;
            const double term = nu * nu * std::exp(-t * nu) * c.coeffs[n] *
                                eval_jn(alpha, n, x);
            want += 2.0 * term;
            scale += 2.0 * std::abs(term);
          }
          plus_rel = std::max(plus_rel, std::abs(rp.plus_variant - want) /
                                            (scale + 1e-30));
        }
      }
    }
    out.checks.push_back(
        check_leq(strf("heat residual alpha=%g", alpha), heat_rel, 1e-5));
    out.checks.push_back(check_leq(strf("poisson residual alpha=%g", alpha),
                                   poisson_rel, 1e-5));
    out.checks.push_back(check_leq(
        strf("plus variant vs doubled series alpha=%g", alpha), plus_rel,
        1e-5));
  }
  (void)inputs;
}

void suite_subordination(const VerifyOptions& opt, SuiteResult& out) {
  double scalar = 0.0;
  for (double t : {0.1, 1.0, 3.0}) {
    for (double gamma : {0.5, 2.0, 10.0}) {
      scalar = std::max(scalar, std::abs(subordination_scalar(t, gamma) -
                                         std::exp(-t * std::sqrt(gamma))));
    }
  }
  out.checks.push_back(
      check_leq("scalar identity vs exp(-t sqrt(gamma))", scalar, 1e-8));

  for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
    CoefficientVector c;
    c.alpha = alpha;
    c.N = 2;
    c.coeffs = Eigen::VectorXd(3);
    c.coeffs << 1.0, 0.0, 0.5;
    double worst = 0.0;
    for (double t : {0.2, 1.0}) {
      SemigroupSpec s = SemigroupSpec::poisson(alpha, std::exp(-t));
      for (double x : {0.5, 2.0}) {
        worst = std::max(worst, std::abs(subordinate_poisson(c, t, x) -
                                         eval_series(c, s, x).value));
      }
    }
    out.checks.push_back(check_leq(
        strf("subordinated heat vs direct poisson alpha=%g", alpha), worst,
        1e-6));
  }
}

void suite_fractional(const VerifyOptions& opt, SuiteResult& out) {
  for (double lambda : {0.5, 1.0, 2.3}) {
    double scalar = 0.0;
    for (double gamma : {1.0, 3.7, 12.0}) {
      scalar = std::max(scalar,
                        std::abs(frac_scalar_kernel(lambda, gamma) -
                                 std::pow(gamma, -lambda)) /
                            std::pow(gamma, -lambda));
    }
    out.checks.push_back(check_leq(
        strf("scalar kernel vs gamma^-lambda at lambda=%g", lambda), scalar,
        1e-9));

    double worst = 0.0;
    for (double alpha : alpha_sweep(opt, {-0.5, 0.0, 1.0})) {
      AlphaContext ctx = make_alpha_context(alpha);
      CoefficientVector c;
      c.alpha = alpha;
      c.N = 4;
      c.coeffs = Eigen::VectorXd(5);
      c.coeffs << 1.0, -0.3, 0.0, 0.0, 0.2;
      for (double x : {0.5, 1.5, 4.0}) {
        worst = std::max(worst, std::abs(frac_series(c, lambda, ctx, x) -
                                         frac_quadrature(c, lambda, ctx, x)));
      }
    }
    out.checks.push_back(check_leq(
        strf("series vs quadrature at lambda=%g", lambda), worst, 1e-6));
  }
}

void suite_norm_growth(const VerifyOptions& opt, SuiteResult& out) {
  (void)opt;
  const std::pair<double, double> grid[5] = {
      {0.0, 2.0}, {0.0, 3.5}, {0.0, 4.0}, {0.0, 8.0}, {1.0, 2.5}};
  for (const auto& [alpha, p] : grid) {
    AlphaContext ctx = make_alpha_context(alpha);
    NormGrowthModel model = jn_norm_model(alpha, p);
    auto ratio = [&](int n) {
      return lp_norm_spec(FunctionSpec::basis_combo({{n, 1.0}}), p, ctx) /
             model.value(n);
    };
    double cfit = 0.0;
    for (int n = 8; n <= 16; ++n) cfit = std::max(cfit, ratio(n));
    double probe = 0.0;
    for (int n = 17; n <= 40; ++n) probe = std::max(probe, ratio(n));
    out.checks.push_back(check_leq(
        strf("norm vs 1.1x calibrated model alpha=%g p=%g n=17..40", alpha, p),
        probe, 1.10 * cfit));
  }
}

// sampling grid for tabulating slowly decaying multiplier output
Eigen::VectorXd tab_grid(double hi) {
  std::vector<double> g;
  for (double x = 0.0; x < std::min(8.0, hi); x += 0.125) g.push_back(x);
  for (double x = 8.0; x < hi; x += 0.25) g.push_back(x);
  g.push_back(hi);
  Eigen::VectorXd out(static_cast<int>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    out[static_cast<int>(i)] = g[i];
  return out;
}

void suite_hankel(const VerifyOptions& opt, SuiteResult& out) {
  (void)opt;
  AlphaContext ctx = make_alpha_context(0.0);
  const FunctionSpec chi = FunctionSpec::indicator(0.0, 1.0);

  // isometry on the indicator: the tail of |H chi|^2 dmu decays like 1/K
  {
    HankelConfig fast;
    fast.quad.panel_rule_order = 16;
    QuadratureConfig outer;
    outer.cutoff_x = 16.0 * M_PI;
    TailSpec tail;
    tail.sigma = 1.0;
    double norm_sq = integrate_mu(
        [&](double y) {
          const double h = hankel(chi, ctx, y, fast);
          return h * h;
        },
        ctx, outer, tail);
    out.checks.push_back(check_leq("isometry |norm(H chi) - norm(chi)|",
                                   std::abs(std::sqrt(norm_sq) -
                                            std::sqrt(0.5)),
                                   1e-4));
  }

  // transforms of basis members vanish beyond the unit interval
  {
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n) {
      FunctionSpec jn = FunctionSpec::basis_combo({{n, 1.0}});
      for (double y : {1.1, 1.5, 2.0, 5.0})
        worst = std::max(worst, std::abs(hankel(jn, ctx, y)));
    }
    out.checks.push_back(
        check_leq("support leakage max |H j_n| y>=1.1 n<=4", worst, 1e-4));
  }

  // coefficient preservation through the sigma=1 pairing ladder
  {
    CoefficientVector cf = expand(chi, 3, ctx);
    TransformResult mf = multiplier_grid(chi, ctx, tab_grid(302.0));
    QuadratureConfig q;
    q.cutoff_x = 37.0;
    q.abs_tol = 1e-6;  // the oscillation caps the ladder fit near 1e-6
    TailSpec tail;
    tail.sigma = 1.0;
    VecIntegralResult res = integrate_mu_vec(
        4,
        [&](double x, Eigen::Ref<Eigen::VectorXd> o) {
          const double v = mf(x);
          for (int n = 0; n <= 3; ++n) o[n] = v * eval_jn(0.0, n, x);
        },
        ctx, q, tail);
    double worst = std::numeric_limits<double>::infinity();
    if (res.converged)
      worst = (res.value - cf.coeffs.head(4)).cwiseAbs().maxCoeff();
    out.checks.push_back(
        check_leq("coefficient preservation n<=3", worst, 5e-4));

    // idempotence: the second application reads M chi through a table and
    // the windowed path; the wide window keeps the truncation bias small
    HankelConfig wide;
    wide.window_start = 201.0;
    TransformResult mwide =
        multiplier_grid(chi, ctx, tab_grid(3.0 * wide.window_start), wide);
    Eigen::VectorXd xs(3);
    xs << 0.5, 1.0, 2.0;
    TransformResult mmf = multiplier_grid_fn(
        [&](double x) { return mwide(x); },
        std::numeric_limits<double>::infinity(), ctx, xs, wide);
    double idem = 0.0;
    for (int i = 0; i < 3; ++i)
      idem = std::max(idem, std::abs(mmf.values[i] - mwide(xs[i])));
    out.checks.push_back(check_leq("idempotence on the indicator", idem, 5e-4));
  }

  // semigroup limits approach the multiplier
  {
    Eigen::VectorXd xs(3);
    xs << 0.5, 1.0, 2.0;
    FunctionSpec combo = FunctionSpec::basis_combo({{0, 1.0}, {2, 0.5}});
    TransformResult target = multiplier_grid(combo, ctx, xs);
    double gap = 0.0;
    for (int i = 0; i < 3; ++i)
      gap = std::max(gap,
                     std::abs(target.values[i] - evaluate(combo, 0.0, xs[i])));
    out.checks.push_back(
        check_leq("band-limited M f vs f", gap, 1e-5));
    for (auto kind : {SemigroupKind::Poisson, SemigroupKind::Heat}) {
      const char* kname = kind == SemigroupKind::Poisson ? "poisson" : "heat";
      LimitReport rep = semigroup_limit_vs_M(combo, kind, ctx, xs);
      out.checks.push_back(
          check_leq(strf("limit monotone trend %s band-limited", kname),
                    rep.monotone_trend ? 0.0 : 1.0, 0.0));
      out.checks.push_back(check_leq(
          strf("limit final distance %s band-limited", kname),
          rep.final_distance, 5e-3));
    }
    LimitReport rep =
        semigroup_limit_vs_M(chi, SemigroupKind::Poisson, ctx, xs);
    out.checks.push_back(check_leq("limit monotone trend poisson indicator",
                                   rep.monotone_trend ? 0.0 : 1.0, 0.0));
    out.checks.push_back(check_leq("limit final distance poisson indicator",
                                   rep.final_distance, 5e-3));
  }
}

struct SuiteEntry {
  const char* name;
  void (*run)(const VerifyOptions&, SuiteResult&);
};

constexpr SuiteEntry kSuites[] = {
    {"orthonormality", suite_orthonormality},
    {"eigenrelation", suite_eigenrelation},
    {"cesaro-equivalence", suite_cesaro},
    {"summation-by-parts", suite_parts},
    {"poisson-weights", suite_weights},
    {"heat-crossover", suite_crossover},
    {"poisson-norm-decay", suite_norm_decay},
    {"heat-boundedness", suite_boundedness},
    {"convergence", suite_convergence},
    {"pde-residuals", suite_pde},
    {"subordination", suite_subordination},
    {"fractional-integral", suite_fractional},
    {"norm-growth", suite_norm_growth},
    {"hankel-multiplier", suite_hankel},
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteEntry& s : kSuites) v.push_back(s.name);
    return v;
  }();
  return names;
}

SuiteResult run_verify_suite(const std::string& name,
                             const VerifyOptions& opt) {
  for (const SuiteEntry& s : kSuites) {
    if (name != s.name) continue;
    SuiteResult out;
    out.suite = name;
    const auto t0 = std::chrono::steady_clock::now();
    s.run(opt, out);
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.pass = !out.checks.empty();
    for (const CheckResult& c : out.checks) out.pass = out.pass && c.pass;
    return out;
  }
  throw std::invalid_argument("unknown verify suite: " + name);
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& opt) {
  std::vector<SuiteResult> all;
  for (const SuiteEntry& s : kSuites) all.push_back(run_verify_suite(s.name, opt));
  return all;
}

}  // namespace fnx
