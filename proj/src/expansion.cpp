#include "fnx/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fnx/basis.hpp"
#include "fnx/specfun.hpp"

namespace fnx {

namespace {

[[noreturn]] void bad_spec(const std::string& what) {
  throw std::invalid_argument("function spec: " + what);
}

void check_interval(double a, double b) {
  if (!(a >= 0.0) || !(b > a)) {
    std::ostringstream msg;
    msg << "function spec: interval needs 0 <= a < b, got a=" << a
        << " b=" << b;
    throw std::invalid_argument(msg.str());
  }
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad_spec("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) bad_spec("trailing characters in number '" + s + "'");
  return v;
}

int parse_index(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    bad_spec("expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) bad_spec("trailing characters in integer '" + s + "'");
  if (v < 0) bad_spec("index must be nonnegative, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

void check_index_range(const CoefficientVector& c, int n) {
  if (n < 0 || n > c.N) {
    std::ostringstream msg;
    msg << "summation index " << n << " outside stored range 0.." << c.N;
    throw std::out_of_range(msg.str());
  }
}

void check_alpha_match(const CoefficientVector& c, const AlphaContext& ctx) {
  if (std::abs(c.alpha - ctx.alpha) > 1e-12) {
    std::ostringstream msg;
    msg << "coefficient vector was built for alpha = " << c.alpha
        << ", context has alpha = " << ctx.alpha;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

FunctionSpec FunctionSpec::basis_combo(
    std::vector<std::pair<int, double>> terms) {
  if (terms.empty()) bad_spec("basis combination needs at least one term");
  for (const auto& [n, w] : terms) {
    if (n < 0) bad_spec("basis index must be nonnegative");
    if (!std::isfinite(w)) bad_spec("weights must be finite");
  }
  FunctionSpec f;
  f.kind = FunctionKind::BasisCombo;
  f.combo = std::move(terms);
  return f;
}

FunctionSpec FunctionSpec::bump(double a, double b) {
  check_interval(a, b);
  FunctionSpec f;
  f.kind = FunctionKind::Bump;
  f.a = a;
  f.b = b;
  f.smooth = true;
  return f;
}

FunctionSpec FunctionSpec::indicator(double a, double b) {
  check_interval(a, b);
  FunctionSpec f;
  f.kind = FunctionKind::Indicator;
  f.a = a;
  f.b = b;
  f.smooth = false;
  return f;
}

FunctionSpec FunctionSpec::poly_exp(int k) {
  if (k < 0) bad_spec("polyexp power must be nonnegative");
  FunctionSpec f;
  f.kind = FunctionKind::PolyExp;
  f.k = k;
  return f;
}

int FunctionSpec::max_index() const {
  if (kind != FunctionKind::BasisCombo) return -1;
  int m = 0;
  for (const auto& [n, w] : combo) m = std::max(m, n);
  return m;
}

double evaluate(const FunctionSpec& f, double alpha, double x) {
  if (!(x > 0.0) && !(f.kind == FunctionKind::BasisCombo && x == 0.0)) {
    std::ostringstream msg;
    msg << "function specs are defined on (0, inf), got x = " << x;
    throw std::domain_error(msg.str());
  }
  switch (f.kind) {
    case FunctionKind::BasisCombo: {
      double s = 0.0;
      for (const auto& [n, w] : f.combo) s += w * eval_jn(alpha, n, x);
      return s;
    }
    case FunctionKind::Bump: {
      if (x <= f.a || x >= f.b) return 0.0;
      const double span = f.b - f.a;
      // peak value 1 at the midpoint, infinitely flat at both edges
      return std::exp(1.0 -
                      0.25 * span * span / ((x - f.a) * (f.b - x)));
    }
    case FunctionKind::PolyExp:
      return std::pow(x, f.k - alpha - 1.0) * std::exp(-0.5 * x * x);
    case FunctionKind::Indicator:
      return (x > f.a && x < f.b) ? 1.0 : 0.0;
  }
  throw std::logic_error("unreachable function kind");
}

std::function<double(double)> as_callable(const FunctionSpec& f,
                                          double alpha) {
  return [f, alpha](double x) { return evaluate(f, alpha, x); };
}

FunctionSpec parse_function(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) {
    bad_spec("missing ':' in '" + text + "'");
  }
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (rest.empty()) bad_spec("empty body in '" + text + "'");

  if (head == "jn") {
    std::vector<std::pair<int, double>> terms;
    for (const std::string& part : split(rest, ',')) {
      const std::size_t star = part.find('*');
      if (star == std::string::npos) {
        bad_spec("term '" + part + "' is not of the form n*w");
      }
      terms.emplace_back(parse_index(part.substr(0, star)),
                         parse_number(part.substr(star + 1)));
    }
    return FunctionSpec::basis_combo(std::move(terms));
  }
  if (head == "bump" || head == "indicator") {
    const std::vector<std::string> parts = split(rest, ',');
    if (parts.size() != 2) {
      bad_spec(head + " takes exactly two numbers, got '" + rest + "'");
    }
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    return head == "bump" ? FunctionSpec::bump(a, b)
                          : FunctionSpec::indicator(a, b);
  }
  if (head == "polyexp") {
    return FunctionSpec::poly_exp(parse_index(rest));
  }
  bad_spec("unknown kind '" + head + "'");
}

std::string describe(const FunctionSpec& f) {
  std::ostringstream out;
  out.precision(17);
  switch (f.kind) {
    case FunctionKind::BasisCombo: {
      out << "jn:";
      bool first = true;
      for (const auto& [n, w] : f.combo) {
        if (!first) out << ',';
        out << n << '*' << w;
        first = false;
      }
      return out.str();
    }
    case FunctionKind::Bump:
      out << "bump:" << f.a << ',' << f.b;
      return out.str();
    case FunctionKind::PolyExp:
      out << "polyexp:" << f.k;
      return out.str();
    case FunctionKind::Indicator:
      out << "indicator:" << f.a << ',' << f.b;
      return out.str();
  }
  throw std::logic_error("unreachable function kind");
}

TailSpec pairing_tail(const FunctionSpec& f, double alpha, double nu_max) {
  TailSpec t;
  switch (f.kind) {
    case FunctionKind::BasisCombo: {
      const double nu_f = alpha + 2.0 * f.max_index() + 1.0;
      const double nu = std::max(nu_f, nu_max);
      t.sigma = 1.0;
      t.start_hint = nu * nu;
      return t;
    }
    case FunctionKind::Bump:
    case FunctionKind::Indicator:
      t.support_upper = f.b;
      if (f.a > 0.0) t.breaks.push_back(f.a);
      t.breaks.push_back(f.b);
      return t;
    case FunctionKind::PolyExp:
      t.fast_decay = true;
      t.decay_cutoff = 13.0 + f.k;
      return t;
  }
  throw std::logic_error("unreachable function kind");
}

TailSpec norm_tail(const FunctionSpec& f, double alpha, double p) {
  TailSpec t;
  switch (f.kind) {
    case FunctionKind::BasisCombo: {
      const double nu_f = alpha + 2.0 * f.max_index() + 1.0;
      t.sigma = p * (alpha + 1.5) - 2.0 * alpha - 2.0;
      t.start_hint = nu_f * nu_f;
      return t;
    }
    case FunctionKind::Bump:
    case FunctionKind::Indicator:
      t.support_upper = f.b;
      if (f.a > 0.0) t.breaks.push_back(f.a);
      t.breaks.push_back(f.b);
      return t;
    case FunctionKind::PolyExp:
      t.fast_decay = true;
      t.decay_cutoff = 13.0 + f.k;
      return t;
  }
  throw std::logic_error("unreachable function kind");
}

double lp_norm_spec(const FunctionSpec& f, double p, const AlphaContext& ctx,
                    const QuadratureConfig& cfg) {
  return lp_norm(as_callable(f, ctx.alpha), p, ctx, cfg,
                 norm_tail(f, ctx.alpha, p));
}

double coefficient(const FunctionSpec& f, int n, const AlphaContext& ctx,
                   const QuadratureConfig& cfg) {
  if (n < 0) throw std::domain_error("coefficient index must be nonnegative");
  const double alpha = ctx.alpha;
  const double nu = alpha + 2.0 * n + 1.0;
  auto g = [&f, alpha, n](double x) {
    return evaluate(f, alpha, x) * eval_jn(alpha, n, x);
  };
  return integrate_mu(g, ctx, cfg, pairing_tail(f, alpha, nu));
}

CoefficientVector expand(const FunctionSpec& f, int N, const AlphaContext& ctx,
                         const QuadratureConfig& cfg) {
  if (N < 0) throw std::domain_error("expansion order must be nonnegative");
  const double alpha = ctx.alpha;
  const double nu_top = alpha + 2.0 * N + 1.0;

  auto integrand = [&f, alpha, N](double x, Eigen::Ref<Eigen::VectorXd> out) {
    const double fv = evaluate(f, alpha, x);
    if (fv == 0.0) {
      out.setZero();
      return;
    }
    if (x < 0.5) {
      for (int n = 0; n <= N; ++n) out[n] = fv * eval_jn(alpha, n, x);
      return;
    }
    const double w = std::pow(x, -(alpha + 1.0));
    for (int n = 0; n <= N; ++n) {
      const double nu = alpha + 2.0 * n + 1.0;
      out[n] = fv * std::sqrt(2.0 * nu) * bessel_j(nu, x) * w;
    }
  };

  VecIntegralResult r = integrate_mu_vec(N + 1, integrand, ctx, cfg,
                                         pairing_tail(f, alpha, nu_top));
  if (!r.converged) {
    std::ostringstream msg;
    msg << "coefficient quadrature did not converge for '" << describe(f)
        << "' at alpha = " << alpha << " (estimate " << r.err_estimate << ")";
    throw quadrature_error(msg.str());
  }
  CoefficientVector c;
  c.alpha = alpha;
  c.coeffs = r.value;
  c.N = N;
  c.quadrature_error = r.err_estimate;
  return c;
}

CoefficientVector combo_coefficients(const FunctionSpec& f, double alpha,
                                     int N) {
  if (f.kind != FunctionKind::BasisCombo) {
    throw std::domain_error(
        "exact coefficients exist only for basis combinations, got '" +
        describe(f) + "'");
  }
  const int m = f.max_index();
  if (N < 0) N = m;
  if (N < m) {
    std::ostringstream msg;
    msg << "requested order " << N << " drops a combination term at index "
        << m;
    throw std::domain_error(msg.str());
  }
  CoefficientVector c;
  c.alpha = alpha;
  c.N = N;
  c.coeffs = Eigen::VectorXd::Zero(N + 1);
  for (const auto& [n, w] : f.combo) c.coeffs[n] += w;
  c.quadrature_error = 0.0;
  return c;
}

double partial_sum(const CoefficientVector& c, int n, double x) {
  check_index_range(c, n);
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (c.coeffs[k] != 0.0) s += c.coeffs[k] * eval_jn(c.alpha, k, x);
  }
  return s;
}

double cesaro(const CoefficientVector& c, int n, double x) {
  check_index_range(c, n);
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (c.coeffs[k] == 0.0) continue;
    const double w = 1.0 - static_cast<double>(k) / (n + 1.0);
    s += w * c.coeffs[k] * eval_jn(c.alpha, k, x);
  }
  return s;
}

double rmean(const CoefficientVector& c, int n, const AlphaContext& ctx,
             double x) {
  check_index_range(c, n);
  check_alpha_match(c, ctx);
  // (sum_k rho_k S_k) / (sum_k rho_k) collapses to suffix-sum weights on the
  // coefficients: coefficient k is scaled by sum_{m >= k} rho_m / sum rho_m
  std::vector<double> rho(n + 1);
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    rho[k] = 2.0 * (c.alpha + 2.0 * k + 2.0);
    total += rho[k];
  }
  double suffix = 0.0;
  double s = 0.0;
  for (int k = n; k >= 0; --k) {
    suffix += rho[k];
    if (c.coeffs[k] != 0.0) {
      s += (suffix / total) * c.coeffs[k] * eval_jn(c.alpha, k, x);
    }
  }
  return s;
}

UniformBoundReport uniform_bound_probe(const std::vector<FunctionSpec>& corpus,
                                       int n_max, double p,
                                       const AlphaContext& ctx,
                                       const QuadratureConfig& cfg) {
  if (!(p > ctx.p0) || !(p < ctx.p1)) {
    std::ostringstream msg;
    msg << "probe exponent p = " << p << " outside (" << ctx.p0 << ", "
        << ctx.p1 << ") at alpha = " << ctx.alpha;
    throw std::domain_error(msg.str());
  }
  if (n_max < 3) throw std::domain_error("probe needs n_max >= 3");

  UniformBoundReport rep;
  rep.ratios.resize(static_cast<int>(corpus.size()), n_max + 1);

  for (std::size_t fi = 0; fi < corpus.size(); ++fi) {
    const FunctionSpec& f = corpus[fi];
    rep.labels.push_back(describe(f));
    const CoefficientVector c =
        (f.kind == FunctionKind::BasisCombo)
            ? combo_coefficients(f, ctx.alpha, n_max)
            : expand(f, n_max, ctx, cfg);
    const double fnorm = lp_norm_spec(f, p, ctx, cfg);

    if (p == 2.0) {
      // orthonormality turns every mean norm into coefficient arithmetic
      for (int n = 0; n <= n_max; ++n) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
          const double w = 1.0 - static_cast<double>(k) / (n + 1.0);
          s += w * w * c.coeffs[k] * c.coeffs[k];
        }
        rep.ratios(fi, n) = std::sqrt(s) / fnorm;
      }
      continue;
    }

    // all n in one pass: each node evaluates the basis once
    TailSpec tail;
    tail.sigma = p * (ctx.alpha + 1.5) - 2.0 * ctx.alpha - 2.0;
    const double nu_top = ctx.alpha + 2.0 * n_max + 1.0;
    tail.start_hint = nu_top * nu_top;
    std::vector<double> jv(n_max + 1);
    auto integrand = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
      for (int k = 0; k <= n_max; ++k) jv[k] = eval_jn(ctx.alpha, k, x);
      for (int n = 0; n <= n_max; ++n) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
          s += (1.0 - static_cast<double>(k) / (n + 1.0)) * c.coeffs[k] *
               jv[k];
        }
        out[n] = std::pow(std::abs(s), p);
      }
    };
    VecIntegralResult r =
        integrate_mu_vec(n_max + 1, integrand, ctx, cfg, tail);
    if (!r.converged) {
      throw quadrature_error("mean-norm quadrature did not converge for '" +
                             rep.labels.back() + "'");
    }
    for (int n = 0; n <= n_max; ++n) {
      rep.ratios(fi, n) = std::pow(std::max(r.value[n], 0.0), 1.0 / p) / fnorm;
    }
  }

  // boundedness of the n-sequence after maxing over the corpus
  Eigen::VectorXd seq = rep.ratios.colwise().maxCoeff();
  rep.worst_ratio = seq.maxCoeff();
  const int q = (n_max + 1) / 4;
  const double head = seq.head(std::max(1, q)).maxCoeff();
  const double tail_max = seq.tail(std::max(1, q)).maxCoeff();
  rep.bounded = tail_max <= 1.2 * head;
  return rep;
}

}  // namespace fnx
