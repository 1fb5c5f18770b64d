#include "fnx/measure.hpp"

#include "fnx/quadrule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fnx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// cutoff multipliers for the tail-extrapolation ladder
constexpr double kLadderMults[7] = {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
constexpr int kLadderPoints = 7;
constexpr int kLadderTerms = 6;  // corrections X^-(sigma) .. X^-(sigma+5)
constexpr int kMaxRestarts = 4;

struct Workspace {
  int dim;
  Eigen::VectorXd buf;
  Eigen::VectorXd refine_err;  // accumulated |GL_N - GL_{N/2}| per component
};

// Gauss-Legendre panel over [a, b] of the mu-weighted integrand.
Eigen::VectorXd panel_mu(const VecIntegrand& f, double expo, double a,
                         double b, int order, Workspace& ws) {
  const GLRule& rule = gl_rule(order);
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ws.dim);
  for (int i = 0; i < order; ++i) {
    const double x = mid + hal * rule.x[i];
    f(x, ws.buf);
    sum.noalias() += (rule.w[i] * std::pow(x, expo)) * ws.buf;
  }
  return hal * sum;
}

Eigen::VectorXd panel_mu_refined(const VecIntegrand& f, double expo, double a,
                                 double b, int order, Workspace& ws) {
  Eigen::VectorXd hi = panel_mu(f, expo, a, b, order, ws);
  Eigen::VectorXd lo = panel_mu(f, expo, a, b, std::max(4, order / 2), ws);
  ws.refine_err += (hi - lo).cwiseAbs();
  return hi;
}

// Substituted integrand for (0, c]: x = u^beta with beta = 1/(2 alpha + 2)
// absorbs the weight exactly, beta * f(u^beta) du.
Eigen::VectorXd panel_sub(const VecIntegrand& f, double beta, double a,
                          double b, int order, Workspace& ws) {
  const GLRule& rule = gl_rule(order);
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ws.dim);
  for (int i = 0; i < order; ++i) {
    const double u = mid + hal * rule.x[i];
    f(std::pow(u, beta), ws.buf);
    sum.noalias() += rule.w[i] * ws.buf;
  }
  return (hal * beta) * sum;
}

Eigen::VectorXd panel_sub_refined(const VecIntegrand& f, double beta, double a,
                                  double b, int order, Workspace& ws) {
  Eigen::VectorXd hi = panel_sub(f, beta, a, b, order, ws);
  Eigen::VectorXd lo = panel_sub(f, beta, a, b, std::max(4, order / 2), ws);
  ws.refine_err += (hi - lo).cwiseAbs();
  return hi;
}

// (0, c] with the weight absorbed by the power substitution, c <= 1. Dyadic
// levels in u descend until level sums are negligible; level sums that stop
// decreasing expose a non-integrable singularity.
Eigen::VectorXd singular_region(const VecIntegrand& f, const AlphaContext& ctx,
                                const QuadratureConfig& cfg,
                                const TailSpec& tail, double c,
                                Workspace& ws) {
  const double beta = 1.0 / (2.0 * ctx.alpha + 2.0);
  const double u_top = std::pow(c, 2.0 * ctx.alpha + 2.0);

  std::vector<double> ubreaks;
  for (double xb : tail.breaks) {
    if (xb > 0.0 && xb < c) {
      ubreaks.push_back(std::pow(xb, 2.0 * ctx.alpha + 2.0));
    }
  }
  std::sort(ubreaks.begin(), ubreaks.end());

  Eigen::VectorXd total = Eigen::VectorXd::Zero(ws.dim);
  double total_scale = 0.0;
  double prev_level = std::numeric_limits<double>::infinity();
  int flat_count = 0;

  // an integrand oscillating on the panel_length scale cancels less and
  // less as levels narrow, so its level sums may legitimately rise until a
  // level spans under a wavelength; only deeper levels can witness a
  // genuine singularity
  const int osc_levels = static_cast<int>(
      std::ceil(std::log2(std::max(2.0, c / cfg.panel_length))));

  for (int level = 0; level < 1000; ++level) {
    const double hi = u_top * std::ldexp(1.0, -level);
    const double lo = 0.5 * hi;
    if (lo < 1e-300) break;

    std::vector<double> edges = {lo};
    for (double ub : ubreaks) {
      if (ub > lo * (1.0 + 1e-12) && ub < hi * (1.0 - 1e-12)) {
        edges.push_back(ub);
      }
    }
    edges.push_back(hi);

    Eigen::VectorXd level_sum = Eigen::VectorXd::Zero(ws.dim);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      // sub-edges equally spaced in x (not u) so that integrands that
      // oscillate on the panel_length scale stay resolved; at the default
      // panel length this reduces to the plain two-panel split
      const double xa = std::pow(edges[e], beta);
      const double xb = std::pow(edges[e + 1], beta);
      const int nsub =
          std::max(2, (int)std::ceil((xb - xa) / cfg.panel_length - 1e-9));
      const double inv_beta = 2.0 * ctx.alpha + 2.0;
      double ua = edges[e];
      for (int s = 1; s <= nsub; ++s) {
        const double ub =
            s == nsub ? edges[e + 1]
                      : std::pow(xa + (xb - xa) * s / nsub, inv_beta);
        level_sum += panel_sub_refined(f, beta, ua, ub,
                                       cfg.panel_rule_order, ws);
        ua = ub;
      }
    }

    const double lvl = level_sum.cwiseAbs().maxCoeff();
    if (!std::isfinite(lvl)) {
      std::ostringstream msg;
      msg << "integrand is not finite near 0 (alpha=" << ctx.alpha
          << ", level " << level << " of the substituted dyadic refinement)";
      throw quadrature_error(msg.str());
    }
    total += level_sum;
    total_scale = std::max(total_scale, total.cwiseAbs().maxCoeff());

    if (lvl >= 0.999 * prev_level && lvl > cfg.abs_tol &&
        level > osc_levels) {
      if (++flat_count >= 4) {
        std::ostringstream msg;
        msg << "integrand appears non-integrable at 0: dyadic level sums "
               "stopped decreasing at magnitude "
            << lvl << " (alpha=" << ctx.alpha << ")";
        throw quadrature_error(msg.str());
      }
    } else {
      flat_count = 0;
    }
    prev_level = lvl;

    if (lvl <= 1e-4 * cfg.abs_tol) break;
    if (level >= 20 && lvl <= 1e-15 * total_scale) break;
  }
  return total;
}

// [a, b] with panel edges on multiples of panel_length plus any breaks.
Eigen::VectorXd osc_segment(const VecIntegrand& f, const AlphaContext& ctx,
                            const QuadratureConfig& cfg, const TailSpec& tail,
                            double a, double b, bool refined, Workspace& ws) {
  const double expo = 2.0 * ctx.alpha + 1.0;
  const double plen = cfg.panel_length;

  std::vector<double> edges = {a};
  for (long k = std::lround(std::ceil(a / plen + 1e-9));
       k * plen < b * (1.0 - 1e-12); ++k) {
    if (k * plen > a * (1.0 + 1e-12)) edges.push_back(k * plen);
  }
  for (double xb : tail.breaks) {
    if (xb > a * (1.0 + 1e-12) && xb < b * (1.0 - 1e-12)) {
      edges.push_back(xb);
    }
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ws.dim);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e];
    const double hi = edges[e + 1];
    if (hi - lo < 1e-12 * hi) continue;
    const int nsub = std::max(1, (int)std::ceil((hi - lo) / plen - 1e-9));
    for (int s = 0; s < nsub; ++s) {
      const double pa = lo + (hi - lo) * s / nsub;
      const double pb = lo + (hi - lo) * (s + 1) / nsub;
      sum += refined
                 ? panel_mu_refined(f, expo, pa, pb, cfg.panel_rule_order, ws)
                 : panel_mu(f, expo, pa, pb, cfg.panel_rule_order, ws);
    }
  }
  return sum;
}

// per-component max of |f(x) x^(2a+1)| over the nodes of [b - plen, b]
Eigen::VectorXd probe_magnitude(const VecIntegrand& f, const AlphaContext& ctx,
                                const QuadratureConfig& cfg, double b,
                                Workspace& ws) {
  const GLRule& rule = gl_rule(cfg.panel_rule_order);
  const double a = b - cfg.panel_length;
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(ws.dim);
  for (int i = 0; i < cfg.panel_rule_order; ++i) {
    const double x = mid + hal * rule.x[i];
    f(x, ws.buf);
    probe = probe.cwiseMax(ws.buf.cwiseAbs() *
                           std::pow(x, 2.0 * ctx.alpha + 1.0));
  }
  return probe;
}

}  // namespace

AlphaContext make_alpha_context(double alpha) {
  if (!(alpha > -1.0)) {
    std::ostringstream msg;
    msg << "alpha must exceed -1, got " << alpha;
    throw std::domain_error(msg.str());
  }
  AlphaContext ctx;
  ctx.alpha = alpha;
  if (alpha >= -0.5) {
    ctx.p0 = 4.0 * (alpha + 1.0) / (2.0 * alpha + 3.0);
    ctx.p1 = (alpha == -0.5)
                 ? std::numeric_limits<double>::infinity()
                 : 4.0 * (alpha + 1.0) / (2.0 * alpha + 1.0);
  } else {
    ctx.p0 = 1.0;
    ctx.p1 = std::numeric_limits<double>::infinity();
  }
  return ctx;
}

VecIntegralResult integrate_mu_vec(int dim, const VecIntegrand& f,
                                   const AlphaContext& ctx,
                                   const QuadratureConfig& cfg,
                                   const TailSpec& tail) {
  if (dim < 1) throw std::domain_error("integrand dimension must be >= 1");
  if (cfg.panel_rule_order < 16) {
    throw std::domain_error("panel_rule_order must be at least 16");
  }
  if (!(cfg.cutoff_x >= 1.0)) {
    throw std::domain_error("cutoff_x must be at least 1");
  }

  Workspace ws{dim, Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
  VecIntegralResult res;
  res.value = Eigen::VectorXd::Zero(dim);

  const double c_split = std::min(1.0, tail.support_upper);
  Eigen::VectorXd base = singular_region(f, ctx, cfg, tail, c_split, ws);

  // integrand supported inside the substituted region only
  if (tail.support_upper <= 1.0) {
    res.value = base;
    res.err_estimate = ws.refine_err.maxCoeff();
    res.converged = true;
    return res;
  }

  const double plen = cfg.panel_length;
  long K0 = std::lround(std::ceil(std::max(cfg.cutoff_x, 2.0) / plen));
  K0 = std::max(K0, std::lround(std::ceil(tail.start_hint / plen)));
  if (tail.fast_decay) {
    K0 = std::max(K0, std::lround(std::ceil(tail.decay_cutoff / plen)));
  }

  // finite support: integrate straight across, no tail handling
  if (std::isfinite(tail.support_upper)) {
    res.value = base + osc_segment(f, ctx, cfg, tail, 1.0, tail.support_upper,
                                   true, ws);
    res.err_estimate = ws.refine_err.maxCoeff();
    res.converged = true;
    return res;
  }

  double x0 = K0 * plen;
  base += osc_segment(f, ctx, cfg, tail, 1.0, x0, true, ws);

  // fast-path: last-panel magnitude shows the tail is already negligible
  Eigen::VectorXd probe = probe_magnitude(f, ctx, cfg, x0, ws);
  bool probe_ok = true;
  for (int c = 0; c < dim; ++c) {
    if (probe[c] * x0 >
        1e-3 * (cfg.abs_tol + cfg.rel_tol * std::abs(base[c]))) {
      probe_ok = false;
      break;
    }
  }
  if (probe_ok) {
    res.value = base;
    res.err_estimate = ws.refine_err.maxCoeff();
    res.tail_estimate = probe.maxCoeff() * x0;
    res.converged = true;
    return res;
  }

  // cumulative integral F(X) at pi-aligned cutoffs, grown lazily
  std::map<double, Eigen::VectorXd> fcum;
  fcum.emplace(x0, base);

  Eigen::VectorXd value = base;
  Eigen::VectorXd est = Eigen::VectorXd::Constant(
      dim, std::numeric_limits<double>::infinity());
  double tail_mag = 0.0;

  for (int attempt = 0;; ++attempt) {
    std::vector<double> xs(kLadderPoints);
    for (int j = 0; j < kLadderPoints; ++j) {
      xs[j] = plen * std::lround(kLadderMults[j] * (double)K0);
    }

    // extend the cumulative map to any missing ladder cutoffs
    for (double xt : xs) {
      if (fcum.count(xt)) continue;
      auto it = fcum.upper_bound(xt);
      --it;  // largest existing cutoff below xt; x0 is always present
      Eigen::VectorXd fv =
          it->second + osc_segment(f, ctx, cfg, tail, it->first, xt, false, ws);
      fcum.emplace(xt, std::move(fv));
    }

    // F_j = I - sum_t c_t X_j^-(sigma+t); solve for I, then re-solve with
    // one point and one term dropped, the difference is the uncertainty
    Eigen::MatrixXd A(kLadderPoints, kLadderPoints);
    Eigen::MatrixXd B(kLadderPoints, dim);
    for (int j = 0; j < kLadderPoints; ++j) {
      A(j, 0) = 1.0;
      for (int t = 0; t < kLadderTerms; ++t) {
        A(j, 1 + t) = -std::pow(xs[j] / xs[0], -(tail.sigma + t));
      }
      B.row(j) = fcum.at(xs[j]).transpose();
    }
    Eigen::MatrixXd sol = A.fullPivLu().solve(B);
    Eigen::MatrixXd sol_drop =
        A.topLeftCorner(kLadderPoints - 1, kLadderPoints - 1)
            .fullPivLu()
            .solve(B.topRows(kLadderPoints - 1));
    value = sol.row(0).transpose();
    est = (sol.row(0) - sol_drop.row(0)).cwiseAbs().transpose();

    bool ok = true;
    for (int c = 0; c < dim; ++c) {
      if (est[c] > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value[c]))) {
        ok = false;
        break;
      }
    }
    tail_mag = (value - fcum.at(xs[0])).cwiseAbs().maxCoeff();
    res.restarts = attempt;
    if (ok) {
      res.converged = true;
      break;
    }
    if (attempt == kMaxRestarts) {
      res.converged = false;
      break;
    }
    K0 *= 2;
  }

  res.value = value;
  res.err_estimate = est.maxCoeff() + ws.refine_err.maxCoeff();
  res.tail_estimate = tail_mag + est.maxCoeff();
  return res;
}

IntegralResult integrate_mu_result(const std::function<double(double)>& f,
                                   const AlphaContext& ctx,
                                   const QuadratureConfig& cfg,
                                   const TailSpec& tail) {
  VecIntegralResult v = integrate_mu_vec(
      1,
      [&f](double x, Eigen::Ref<Eigen::VectorXd> out) { out[0] = f(x); },
      ctx, cfg, tail);
  IntegralResult r;
  r.value = v.value[0];
  r.err_estimate = v.err_estimate;
  r.tail_estimate = v.tail_estimate;
  r.converged = v.converged;
  r.restarts = v.restarts;
  return r;
}

double integrate_mu(const std::function<double(double)>& f,
                    const AlphaContext& ctx, const QuadratureConfig& cfg,
                    const TailSpec& tail) {
  IntegralResult r = integrate_mu_result(f, ctx, cfg, tail);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "tail extrapolation did not converge (estimate " << r.err_estimate
        << " after " << r.restarts << " cutoff doublings); the integral may "
        << "diverge or need a larger cutoff_x";
    throw quadrature_error(msg.str());
  }
  return r.value;
}

double lp_norm(const std::function<double(double)>& f, double p,
               const AlphaContext& ctx, const QuadratureConfig& cfg,
               const TailSpec& tail) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "lp_norm requires finite p > 0, got " << p;
    throw std::domain_error(msg.str());
  }
  double v = integrate_mu(
      [&f, p](double x) { return std::pow(std::abs(f(x)), p); }, ctx, cfg,
      tail);
  return std::pow(std::max(v, 0.0), 1.0 / p);
}

}  // namespace fnx
