#include "fnx/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fnx/basis.hpp"
#include "fnx/quadrule.hpp"
#include "fnx/specfun.hpp"

namespace fnx {

namespace {

[[noreturn]] void bad_arg(const char* what, double value) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "hankel: %s (got %.17g)", what, value);
  throw std::domain_error(buf);
}

void check_grid(const Eigen::VectorXd& grid) {
  if (grid.size() == 0) throw std::domain_error("hankel: empty grid");
  if (!(grid[0] >= 0.0)) bad_arg("grid must be nonnegative", grid[0]);
  for (int i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      bad_arg("grid must be strictly increasing, first offender", grid[i]);
}

// integration limit for a FunctionSpec: compact kinds end at b, the
// Gaussian factor of PolyExp underflows past ~38, combos get an analytic
// tail past a finite cutoff
double support_of(const FunctionSpec& f) {
  switch (f.kind) {
    case FunctionKind::Indicator:
    case FunctionKind::Bump:
      return f.b;
    case FunctionKind::PolyExp:
      return 40.0 + f.k;
    case FunctionKind::BasisCombo:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

// ---- analytic tail for transforms of basis functions --------------------
//
// Past the quadrature cutoff B the integrand of the transform of j_n is
// sqrt(2 nu) y^{-alpha} J_nu(x) J_alpha(x y); both factors are deep in
// their asymptotic regime there, so the tail reduces to oscillatory
// integrals int_B^inf x^{-m} e^{i w x} dx.  Those are exponential
// integrals of imaginary argument, evaluated by power series for small
// |w| B and by a continued fraction otherwise, which keeps the tail
// uniformly accurate in the beat frequency w = 1 -+ y (including the
// support edge y = 1, where the slow beat degenerates).

// E_m(-i w B) = int_1^inf t^{-m} e^{i w B t} dt, w > 0
std::complex<double> expint_imag(int m, double w) {
  const std::complex<double> z(0.0, -w);
  if (w <= 8.0) {
    // series around 0; the log term carries the principal branch of
    // ln(-i w) = ln w - i pi/2
    double psi = -0.57721566490153286061;
    for (int i = 1; i < m; ++i) psi += 1.0 / i;
    std::complex<double> mz_pow(1.0, 0.0);
    double kfact = 1.0;
    std::complex<double> acc(0.0, 0.0);
    for (int k = 0; k <= 80; ++k) {
      if (k > 0) {
        mz_pow *= -z;
        kfact *= k;
      }
      if (k == m - 1) {
        acc += mz_pow / kfact *
               (psi - std::complex<double>(std::log(w), -0.5 * M_PI));
      } else {
        std::complex<double> term = -mz_pow / (kfact * (k - m + 1.0));
        acc += term;
        if (k > static_cast<int>(w) + m &&
            std::abs(term) < 1e-18 * (1.0 + std::abs(acc)))
          break;
      }
    }
    return acc;
  }
  // modified Lentz continued fraction, valid off the negative real axis
  const double tiny = 1e-300;
  std::complex<double> b = z + static_cast<double>(m);
  std::complex<double> c(1.0 / tiny, 0.0);
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i <= 400; ++i) {
    double a = -static_cast<double>(i) * (m - 1.0 + i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    std::complex<double> delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15)
      return h * std::exp(std::complex<double>(0.0, w));
  }
  throw quadrature_error("hankel: tail continued fraction stalled");
}

// C + i S with C = int_B^inf x^{-m} cos(w x) dx, S likewise with sin;
// w = 0 takes the limit from above, which matches cutting the transform
// at the support edge from inside
std::complex<double> tail_power_integral(int m, double w, double B) {
  if (w < 1e-14) {
    double c = m >= 2 ? std::pow(B, 1.0 - m) / (m - 1.0) : 0.0;
    double s = m == 1 ? 0.5 * M_PI : 0.0;
    return {c, s};
  }
  return std::pow(B, 1.0 - m) * expint_imag(m, w * B);
}

// coefficients of the large-argument expansion J_rho(z) ~ sqrt(2/(pi z))
// [P cos chi - Q sin chi]: a_j(rho) feeds P (even j) and Q (odd j)
void asym_coeffs(double rho, int count, double* a) {
  double mu = 4.0 * rho * rho;
  a[0] = 1.0;
  for (int j = 1; j < count; ++j) {
    double odd = 2.0 * j - 1.0;
    a[j] = a[j - 1] * (mu - odd * odd) / (8.0 * j);
  }
}

constexpr int kTailOrder = 12;

// int_B^inf sqrt(2 nu) y^{-alpha} J_nu(x) J_alpha(x y) dx for x y >= ~25
// at x = B: both Bessel factors expanded, trig products split into the
// slow beat (1-y) and the carrier (1+y)
double combo_tail_beat(double nu, double alpha, double y, double B) {
  double an[kTailOrder + 1], aa[kTailOrder + 1];
  asym_coeffs(nu, kTailOrder + 1, an);
  asym_coeffs(alpha, kTailOrder + 1, aa);

  // series in 1/x for each factor; the second factor carries y powers
  double p1[kTailOrder + 1] = {0}, q1[kTailOrder + 1] = {0};
  double p2[kTailOrder + 1] = {0}, q2[kTailOrder + 1] = {0};
  double ypow = 1.0;
  for (int j = 0; j <= kTailOrder; ++j) {
    double sgn = (j / 2) % 2 == 0 ? 1.0 : -1.0;
    if (j % 2 == 0) {
      p1[j] = sgn * an[j];
      p2[j] = sgn * aa[j] * ypow;
    } else {
      q1[j] = sgn * an[j];
      q2[j] = sgn * aa[j] * ypow;
    }
    ypow /= y;
  }

  double wm = 1.0 - y, wp = 1.0 + y;
  double sgn_wm = wm < 0.0 ? -1.0 : 1.0;
  double phim = -0.5 * (nu - alpha) * M_PI;
  double phip = -0.5 * (nu + alpha + 1.0) * M_PI;
  double cm = std::cos(phim), sm = std::sin(phim);
  double cp = std::cos(phip), sp = std::sin(phip);

  double acc = 0.0;
  for (int m = 0; m <= kTailOrder; ++m) {
    double pp = 0.0, qq = 0.0, pq = 0.0, qp = 0.0;
    for (int i = 0; i <= m; ++i) {
      pp += p1[i] * p2[m - i];
      qq += q1[i] * q2[m - i];
      pq += p1[i] * q2[m - i];
      qp += q1[i] * p2[m - i];
    }
    std::complex<double> gm = tail_power_integral(m + 1, std::abs(wm), B);
    std::complex<double> gp = tail_power_integral(m + 1, wp, B);
    double cw_m = gm.real(), sw_m = sgn_wm * gm.imag();
    double cw_p = gp.real(), sw_p = gp.imag();
    // cos-beat, sin-beat, cos-carrier, sin-carrier weights
    acc += (pp + qq) * (cm * cw_m - sm * sw_m);
    acc += (pq - qp) * (sm * cw_m + cm * sw_m);
    acc += (pp - qq) * (cp * cw_p - sp * sw_p);
    acc -= (pq + qp) * (sp * cw_p + cp * sw_p);
  }
  return std::sqrt(2.0 * nu) * std::pow(y, -alpha - 0.5) / M_PI * acc;
}

// int_B^inf x^s e^{i x} dx by repeated integration by parts (Abel sense);
// terms fall off like |s|/B
std::complex<double> tail_monomial(double s, double B) {
  std::complex<double> term =
      std::complex<double>(0.0, 1.0) * std::pow(B, s) *
      std::exp(std::complex<double>(0.0, B));
  std::complex<double> acc = term;
  for (int t = 0; t < 30; ++t) {
    term *= std::complex<double>(0.0, (s - t) / B);
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

// same tail for small y (x y still small at x = B): the kernel factor is
// expanded as a power series in (x y)^2 instead, leaving moment-type
// integrals of a single Bessel function
double combo_tail_smally(double nu, double alpha, double y, double B) {
  double an[kTailOrder + 1];
  asym_coeffs(nu, kTailOrder + 1, an);
  std::complex<double> carrier =
      std::exp(std::complex<double>(0.0, -0.5 * (nu + 0.5) * M_PI));

  double acc = 0.0;
  double kern = std::exp(-alpha * std::log(2.0) - gamma_ln(alpha + 1.0));
  double y2 = y * y;
  for (int k = 0; k <= 25; ++k) {
    if (k > 0) kern *= -0.25 * y2 / (k * (alpha + k));
    // moment int_B^inf J_nu(x) x^{2k+alpha} dx
    double rho = 2.0 * k + alpha;
    double mom = 0.0;
    for (int j = 0; j <= kTailOrder; ++j) {
      std::complex<double> v = carrier * tail_monomial(rho - 0.5 - j, B);
      if (j % 2 == 0) {
        mom += ((j / 2) % 2 == 0 ? 1.0 : -1.0) * an[j] * v.real();
      } else {
        mom -= (((j - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * an[j] * v.imag();
      }
    }
    mom *= std::sqrt(2.0 / M_PI);
    double term = kern * mom;
    acc += term;
    if (k > 2 && std::abs(term) < 1e-17 * (1.0 + std::abs(acc))) break;
  }
  return std::sqrt(2.0 * nu) * acc;
}

// quadrature cutoff: the nu expansion needs x >> nu^2, the alpha factor
// needs x y past the beat regime unless y is small enough for the
// kernel-series route
double combo_cutoff(double nu_max, double y) {
  double B = std::max(300.0, 3.0 * nu_max * nu_max);
  if (y >= 0.02) B = std::max(B, 30.0 / y);
  return B;
}

double combo_tail(double nu, double alpha, double y, double B) {
  return y < 0.02 ? combo_tail_smally(nu, alpha, y, B)
                  : combo_tail_beat(nu, alpha, y, B);
}

}  // namespace

double hankel_kernel(double alpha, double z) {
  if (!(z >= 0.0)) bad_arg("kernel argument must be nonnegative", z);
  if (z < 0.5) {
    // J_alpha(z)/z^alpha = 2^{-alpha} sum (-z^2/4)^k / (k! Gamma(alpha+k+1))
    double q = -0.25 * z * z;
    double term = std::exp(-alpha * std::log(2.0) - gamma_ln(alpha + 1.0));
    double acc = term;
    for (int k = 1; k <= 40; ++k) {
      term *= q / (k * (alpha + k));
      acc += term;
      if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
    }
    return acc;
  }
  return bessel_j(alpha, z) * std::exp(-alpha * std::log(z));
}

double hankel_window(const HankelConfig& cfg, double x) {
  double a = cfg.window_start, b = 3.0 * cfg.window_start;
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  double u = (x - a) / (b - a);
  // regularized incomplete beta I_u(9,9): first eight derivatives vanish at
  // both ends, so truncating there costs O((width * frequency)^{-9})
  double p = 0.0;
  // primitive of v^8 (1-v)^8 = sum_k C(8,k) (-1)^k v^{8+k}
  static const double binom[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
  double upow = std::pow(u, 9.0);
  for (int k = 0; k <= 8; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    p += sign * binom[k] * upow / (9.0 + k);
    upow *= u;
  }
  static const double b99 = std::exp(2.0 * gamma_ln(9.0) - gamma_ln(18.0));
  return 1.0 - p / b99;
}

double TransformResult::operator()(double y) const {
  int n = static_cast<int>(grid.size());
  if (n == 1) return values[0];
  // locate the cell, then fit a cubic through the four nearest nodes
  const double* begin = grid.data();
  int i = static_cast<int>(std::upper_bound(begin, begin + n, y) - begin) - 1;
  i = std::clamp(i, 0, n - 2);
  int lo = std::clamp(i - 1, 0, n - 4);
  if (n < 4) lo = 0;
  int m = std::min(4, n);
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    double lj = 1.0;
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      lj *= (y - grid[lo + k]) / (grid[lo + j] - grid[lo + k]);
    }
    acc += lj * values[lo + j];
  }
  return acc;
}

TransformResult hankel_grid_fn(const std::function<double(double)>& f,
                               double support_upper, const AlphaContext& ctx,
                               const Eigen::VectorXd& grid,
                               const HankelConfig& cfg) {
  check_grid(grid);
  bool windowed = !std::isfinite(support_upper);
  double upper = windowed ? 3.0 * cfg.window_start : support_upper;
  if (!(upper > 0.0)) bad_arg("support must be positive", upper);

  QuadratureConfig q = cfg.quad;
  double ymax = grid[grid.size() - 1];
  q.panel_length = std::min(q.panel_length, M_PI / std::max(1.0, ymax));
  TailSpec tail;
  tail.support_upper = upper;

  int dim = static_cast<int>(grid.size());
  double alpha = ctx.alpha;
  VecIntegrand g = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
    double fv = f(x);
    if (windowed) fv *= hankel_window(cfg, x);
    if (fv == 0.0) {
      out.setZero();
      return;
    }
    for (int i = 0; i < dim; ++i)
      out[i] = fv * hankel_kernel(alpha, x * grid[i]);
  };
  VecIntegralResult res = integrate_mu_vec(dim, g, ctx, q, tail);
  if (!res.converged)
    throw quadrature_error("hankel: transform quadrature did not converge");

  TransformResult out;
  out.grid = grid;
  out.values = res.value;
  out.errs = Eigen::VectorXd::Constant(dim, res.err_estimate);
  return out;
}

TransformResult hankel_grid(const FunctionSpec& f, const AlphaContext& ctx,
                            const Eigen::VectorXd& grid,
                            const HankelConfig& cfg) {
  if (f.kind != FunctionKind::BasisCombo)
    return hankel_grid_fn(as_callable(f, ctx.alpha), support_of(f), ctx, grid,
                          cfg);
  check_grid(grid);

  double alpha = ctx.alpha;
  double nu_max = alpha + 1.0;
  for (const auto& [n, c] : f.combo)
    nu_max = std::max(nu_max, alpha + 2.0 * n + 1.0);
  double b0 = combo_cutoff(nu_max, 1.0);

  // shared finite part over [0, B0], one vector pass for the whole grid
  auto fv = as_callable(f, alpha);
  QuadratureConfig q = cfg.quad;
  double ymax = grid[grid.size() - 1];
  q.panel_length = std::min(q.panel_length, M_PI / std::max(1.0, ymax));
  TailSpec tail;
  tail.support_upper = b0;

  int dim = static_cast<int>(grid.size());
  VecIntegrand g = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
    double v = fv(x);
    if (v == 0.0) {
      out.setZero();
      return;
    }
    for (int i = 0; i < dim; ++i)
      out[i] = v * hankel_kernel(alpha, x * grid[i]);
  };
  VecIntegralResult res = integrate_mu_vec(dim, g, ctx, q, tail);
  if (!res.converged)
    throw quadrature_error("hankel: transform quadrature did not converge");

  TransformResult out;
  out.grid = grid;
  out.values = res.value;
  out.errs = Eigen::VectorXd::Constant(dim, res.err_estimate);

  const GLRule& rule = gl_rule(cfg.quad.panel_rule_order);
  const GLRule& half = gl_rule(std::max(4, cfg.quad.panel_rule_order / 2));
  for (int i = 0; i < dim; ++i) {
    double y = grid[i];
    double bi = combo_cutoff(nu_max, y);
    if (bi > b0) {
      // extension segment [B0, B(y)] for points whose beat expansion
      // needs a larger cutoff
      double plen = std::min(cfg.quad.panel_length,
                             M_PI / std::max(1.0, y));
      int np = static_cast<int>(std::ceil((bi - b0) / plen));
      double step = (bi - b0) / np;
      auto seg = [&](double a, double b, const GLRule& r) {
        double s = 0.0;
        for (size_t k = 0; k < r.x.size(); ++k) {
          double x = 0.5 * (a + b) + 0.5 * (b - a) * r.x[k];
          s += r.w[k] * fv(x) * hankel_kernel(alpha, x * y) *
               std::pow(x, 2.0 * alpha + 1.0);
        }
        return 0.5 * (b - a) * s;
      };
      for (int p = 0; p < np; ++p) {
        double a = b0 + p * step, b = a + step;
        double hi = seg(a, b, rule);
        out.values[i] += hi;
        out.errs[i] += std::abs(hi - seg(a, b, half));
      }
    }
    for (const auto& [n, c] : f.combo) {
      if (c == 0.0) continue;
      out.values[i] += c * combo_tail(alpha + 2.0 * n + 1.0, alpha, y, bi);
    }
  }
  return out;
}

double hankel(const FunctionSpec& f, const AlphaContext& ctx, double y,
              const HankelConfig& cfg) {
  if (!(y > 0.0)) bad_arg("transform point must be positive", y);
  Eigen::VectorXd grid(1);
  grid[0] = y;
  return hankel_grid(f, ctx, grid, cfg).values[0];
}

Eigen::VectorXd chebyshev_grid(int m, double lo, double hi) {
  if (m < 2) throw std::domain_error("hankel: grid needs at least 2 nodes");
  Eigen::VectorXd g(m);
  for (int i = 0; i < m; ++i) {
    double c = 0.5 * (1.0 - std::cos(M_PI * i / (m - 1)));
    g[i] = lo + (hi - lo) * c;
  }
  g[0] = lo;
  g[m - 1] = hi;
  return g;
}

namespace {

// second leg of the multiplier: transform the cut inner table back
TransformResult multiplier_outer(const TransformResult& inner,
                                 const AlphaContext& ctx,
                                 const Eigen::VectorXd& xgrid,
                                 const HankelConfig& cfg) {
  double inner_err = inner.errs.size() ? inner.errs.maxCoeff() : 0.0;

  QuadratureConfig q = cfg.quad;
  double xmax = xgrid[xgrid.size() - 1];
  q.panel_length = std::min(q.panel_length, M_PI / std::max(1.0, xmax));
  TailSpec tail;
  tail.support_upper = 1.0;

  int dim = static_cast<int>(xgrid.size());
  double alpha = ctx.alpha;
  VecIntegrand g = [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
    double gs = inner(s);
    for (int i = 0; i < dim; ++i)
      out[i] = gs * hankel_kernel(alpha, s * xgrid[i]);
  };
  VecIntegralResult res = integrate_mu_vec(dim, g, ctx, q, tail);
  if (!res.converged)
    throw quadrature_error("hankel: multiplier quadrature did not converge");

  TransformResult out;
  out.grid = xgrid;
  out.values = res.value;
  out.errs = Eigen::VectorXd::Constant(dim, res.err_estimate + inner_err);
  return out;
}

}  // namespace

TransformResult multiplier_grid_fn(const std::function<double(double)>& f,
                                   double support_upper,
                                   const AlphaContext& ctx,
                                   const Eigen::VectorXd& xgrid,
                                   const HankelConfig& cfg) {
  check_grid(xgrid);
  TransformResult inner = hankel_grid_fn(
      f, support_upper, ctx, chebyshev_grid(cfg.inner_grid_size, 0.0, 1.0),
      cfg);
  return multiplier_outer(inner, ctx, xgrid, cfg);
}

TransformResult multiplier_grid(const FunctionSpec& f, const AlphaContext& ctx,
                                const Eigen::VectorXd& xgrid,
                                const HankelConfig& cfg) {
  check_grid(xgrid);
  TransformResult inner = hankel_grid(
      f, ctx, chebyshev_grid(cfg.inner_grid_size, 0.0, 1.0), cfg);
  return multiplier_outer(inner, ctx, xgrid, cfg);
}

MultiplierResult multiplier_M(const FunctionSpec& f, const AlphaContext& ctx,
                              double x, const HankelConfig& cfg) {
  if (!(x >= 0.0)) bad_arg("multiplier point must be nonnegative", x);
  Eigen::VectorXd grid(1);
  grid[0] = x;
  TransformResult r = multiplier_grid(f, ctx, grid, cfg);
  return MultiplierResult{r.values[0], r.errs[0]};
}

LimitReport semigroup_limit_vs_M(const FunctionSpec& f, SemigroupKind kind,
                                 const AlphaContext& ctx,
                                 const Eigen::VectorXd& xgrid,
                                 const HankelConfig& cfg) {
  if (kind == SemigroupKind::Custom)
    throw std::domain_error("hankel: limit comparison needs Poisson or Heat");
  check_grid(xgrid);
  CoefficientVector c = f.kind == FunctionKind::BasisCombo
                            ? combo_coefficients(f, ctx.alpha)
                            : expand(f, 40, ctx, cfg.quad);
  TransformResult target = multiplier_grid(f, ctx, xgrid, cfg);

  LimitReport rep;
  rep.r_values.resize(8);
  rep.distances.resize(8);
  for (int k = 3; k <= 10; ++k) {
    double r = 1.0 - std::pow(2.0, -k);
    SemigroupSpec spec = kind == SemigroupKind::Poisson
                             ? SemigroupSpec::poisson(ctx.alpha, r)
                             : SemigroupSpec::heat(ctx.alpha, r);
    double dist = 0.0;
    for (int i = 0; i < xgrid.size(); ++i) {
      double v = eval_series(c, spec, xgrid[i]).value;
      dist = std::max(dist, std::abs(v - target.values[i]));
    }
    rep.r_values[k - 3] = r;
    rep.distances[k - 3] = dist;
  }
  rep.final_distance = rep.distances[7];
  rep.monotone_trend = true;
  for (int i = 1; i < 8; ++i)
    if (rep.distances[i] > rep.distances[i - 1] * 1.05 + 1e-12)
      rep.monotone_trend = false;
  rep.converged = rep.final_distance <= 5e-3;
  return rep;
}

}  // namespace fnx
