#include "fnx/basis.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "fnx/specfun.hpp"

namespace fnx {

namespace {

void check_basis_args(double alpha, int n, double x) {
  if (!(alpha > -1.0)) {
    std::ostringstream msg;
    msg << "alpha must exceed -1, got " << alpha;
    throw std::domain_error(msg.str());
  }
  if (n < 0) {
    std::ostringstream msg;
    msg << "basis index must be nonnegative, got " << n;
    throw std::domain_error(msg.str());
  }
  if (!(x >= 0.0)) {
    std::ostringstream msg;
    msg << "argument must be nonnegative, got " << x;
    throw std::domain_error(msg.str());
  }
}

// j_n with the weight folded into the series:
// j_n(x) = sqrt(2 nu) 2^{-(alpha+1)} sum_k (-1)^k q^{n+k} / (k! Gamma(nu+k+1)),
// q = x^2/4. Only positive powers of x appear, so x -> 0 is harmless.
double jn_small_x(double alpha, int n, double x) {
  const double nu = alpha + 2.0 * n + 1.0;
  const double norm = std::sqrt(2.0 * nu);
  if (x == 0.0) {
    if (n > 0) return 0.0;
    return norm * std::pow(2.0, -(alpha + 1.0)) / gamma_fn(alpha + 2.0);
  }
  const long double q = static_cast<long double>(x) * x / 4.0L;
  const long double lead = n * std::log(q) - (alpha + 1.0L) * 0.69314718055994530942L -
                           std::lgamma(static_cast<long double>(nu) + 1.0L);
  long double term = 1.0L;
  long double s = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (k * (nu + k));
    s += term;
    if (std::abs(term) < 1e-20L * std::abs(s)) break;
  }
  return static_cast<double>(norm * std::exp(lead) * s);
}

}  // namespace

double eval_jn(double alpha, int n, double x) {
  check_basis_args(alpha, n, x);
  if (x < 0.5) return jn_small_x(alpha, n, x);
  const double nu = alpha + 2.0 * n + 1.0;
  return std::sqrt(2.0 * nu) * bessel_j(nu, x) * std::pow(x, -(alpha + 1.0));
}

double apply_L_exact(double alpha, double x, double f, double fp, double fpp) {
  return x * x * fpp + (2.0 * alpha + 3.0) * x * fp +
         (x * x + (alpha + 1.0) * (alpha + 1.0)) * f;
}

double apply_L_jn(double alpha, int n, double x) {
  check_basis_args(alpha, n, x);
  if (x == 0.0) {
    throw std::domain_error("apply_L_jn requires x > 0");
  }
  const double nu = alpha + 2.0 * n + 1.0;
  const double c = std::sqrt(2.0 * nu);
  const double J = bessel_j(nu, x);
  const double Jp = bessel_j_dx(nu, x);
  // second derivative from the defining equation, valid for every nu here
  const double Jpp = -Jp / x - (1.0 - nu * nu / (x * x)) * J;
  const double w = std::pow(x, -(alpha + 1.0));
  const double a1 = alpha + 1.0;
  const double f = c * w * J;
  const double fp = c * w * (Jp - a1 * J / x);
  const double fpp =
      c * w * (Jpp - 2.0 * a1 * Jp / x + a1 * (a1 + 1.0) * J / (x * x));
  return apply_L_exact(alpha, x, f, fp, fpp);
}

ApplyLResult apply_L_fd(const std::function<double(double)>& f, double alpha,
                        double x, double h) {
  if (!(x > 0.0)) throw std::domain_error("apply_L_fd requires x > 0");
  if (h == 0.0) h = 1e-4 * std::max(1.0, x);
  h = std::min(h, x / 3.0);  // keep x - 2h away from the boundary

  auto stencil = [&](double hh) {
    const double fm2 = f(x - 2.0 * hh), fm1 = f(x - hh), f0 = f(x),
                 fp1 = f(x + hh), fp2 = f(x + 2.0 * hh);
    const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hh);
    const double d2 =
        (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * hh * hh);
    return apply_L_exact(alpha, x, f0, d1, d2);
  };

  const double v1 = stencil(h);
  const double v2 = stencil(0.5 * h);
  const double v3 = stencil(0.25 * h);
  const double d12 = std::abs(v1 - v2);
  const double d23 = std::abs(v2 - v3);

  ApplyLResult res;
  const double scale = std::max({1.0, std::abs(v1), std::abs(v3)});
  // a smooth f contracts the halving differences ~16x until they sink into
  // roundoff; only a difference that both stays significant and fails to
  // contract signals a genuinely rough f
  res.unstable = d23 > 3e-6 * scale && d23 > 0.5 * d12;
  res.value = (d23 < d12) ? v3 : v1;
  res.err_estimate = std::min(d12, d23);
  return res;
}

std::pair<double, double> p_range(double alpha) {
  const AlphaContext ctx = make_alpha_context(alpha);
  return {ctx.p0, ctx.p1};
}

double NormGrowthModel::value(int n) const {
  if (n < 2) {
    std::ostringstream msg;
    msg << "norm growth model needs n >= 2, got " << n;
    throw std::domain_error(msg.str());
  }
  double v = std::pow(static_cast<double>(n), exponent);
  if (has_log_factor) v *= std::pow(std::log(static_cast<double>(n)), 0.25);
  return v;
}

NormGrowthModel jn_norm_model(double alpha, double p) {
  const AlphaContext ctx = make_alpha_context(alpha);
  if (!(p > ctx.p0)) {
    std::ostringstream msg;
    msg << "norm growth model needs p > " << ctx.p0 << " at alpha = " << alpha
        << ", got p = " << p << " (the norm is infinite there)";
    throw std::domain_error(msg.str());
  }
  NormGrowthModel m;
  if (p < 4.0) {
    m.regime = NormRegime::Subcritical;
    m.exponent = -(alpha + 1.0) + 2.0 * (alpha + 1.0) / p;
    m.has_log_factor = false;
  } else if (p == 4.0) {
    m.regime = NormRegime::Critical;
    m.exponent = -(alpha + 1.0) / 2.0;
    m.has_log_factor = true;
  } else {
    m.regime = NormRegime::Supercritical;
    m.exponent = -(5.0 / 6.0 + alpha) + (6.0 * alpha + 4.0) / (3.0 * p);
    m.has_log_factor = false;
  }
  return m;
}

Eigen::MatrixXd gram_matrix(double alpha, int nmax,
                            const QuadratureConfig& cfg) {
  check_basis_args(alpha, nmax, 0.0);
  const AlphaContext ctx = make_alpha_context(alpha);
  const int nb = nmax + 1;
  const int dim = nb * (nb + 1) / 2;

  TailSpec tail;
  tail.sigma = 1.0;
  const double nu_max = alpha + 2.0 * nmax + 1.0;
  tail.start_hint = nu_max * nu_max;

  std::vector<double> jv(nb);
  auto integrand = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
    // one weight and nb Bessel evaluations serve all nb(nb+1)/2 products
    if (x < 0.5) {
      for (int n = 0; n < nb; ++n) jv[n] = eval_jn(alpha, n, x);
    } else {
      const double w = std::pow(x, -(alpha + 1.0));
      for (int n = 0; n < nb; ++n) {
        const double nu = alpha + 2.0 * n + 1.0;
        jv[n] = std::sqrt(2.0 * nu) * bessel_j(nu, x) * w;
      }
    }
    int k = 0;
    for (int i = 0; i < nb; ++i) {
      for (int j = i; j < nb; ++j) out[k++] = jv[i] * jv[j];
    }
  };

  VecIntegralResult r = integrate_mu_vec(dim, integrand, ctx, cfg, tail);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "Gram integration did not converge at alpha = " << alpha
        << " (estimate " << r.err_estimate << ")";
    throw quadrature_error(msg.str());
  }

  Eigen::MatrixXd g(nb, nb);
  int k = 0;
  for (int i = 0; i < nb; ++i) {
    for (int j = i; j < nb; ++j) {
      g(i, j) = r.value[k];
      g(j, i) = r.value[k];
      ++k;
    }
  }
  return g;
}

}  // namespace fnx
