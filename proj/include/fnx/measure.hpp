#pragma once

// Integration on (0, inf) against d(mu_alpha) = x^(2 alpha + 1) dx, and
// L^p(d mu_alpha) norms. The integrand family here oscillates like Bessel
// functions and decays only algebraically, so plain truncation at any desk
// scale cutoff is hopeless; the engine combines
//   - an exact power substitution x = u^(1/(2 alpha + 2)) on (0, 1] that
//     absorbs the endpoint weight,
//   - pi-aligned Gauss-Legendre panels on the oscillatory range, and
//   - a tail extrapolation: with pi-multiple cutoffs X the oscillatory
//     residue phase freezes and F(inf) - F(X) is a polynomial in 1/X,
//     solved from a short ladder of cutoffs.
// Integrands are vector-valued so that families sharing Bessel evaluations
// (Gram pairs, whole coefficient vectors) integrate in one pass.

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fnx {

struct AlphaContext {
  double alpha = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;  // +infinity below alpha = -1/2
};

// Throws std::domain_error unless alpha > -1. At alpha = -1/2 the two case
// branches for (p0, p1) coincide at (1, inf); the alpha >= -1/2 formulas are
// taken as authoritative.
AlphaContext make_alpha_context(double alpha);

struct QuadratureConfig {
  int panel_rule_order = 32;
  double cutoff_x = 64.0 * 3.14159265358979323846;
  double panel_length = 3.14159265358979323846;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
};

class quadrature_error : public std::runtime_error {
 public:
  explicit quadrature_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Hints about the integrand's behavior beyond the panel region.
struct TailSpec {
  // leading exponent of the truncation residue: F(inf) - F(X) ~ X^(-sigma).
  // 1 for products of two basis functions; p(alpha+3/2) - 2 alpha - 2 for
  // |j_n|^p integrands.
  double sigma = 1.0;
  // the 1/X tail model only converges for X beyond roughly nu_max^2; callers
  // integrating order-nu Bessel content should pass nu_max^2 here
  double start_hint = 0.0;
  // jump/kink locations of the integrand (panel edges are aligned to these)
  std::vector<double> breaks;
  // integrand vanishes identically beyond this point
  double support_upper = std::numeric_limits<double>::infinity();
  // superpolynomial decay: extend the panel region to decay_cutoff and let
  // the last-panel probe skip the ladder
  bool fast_decay = false;
  double decay_cutoff = 0.0;
};

using VecIntegrand = std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>;

struct VecIntegralResult {
  Eigen::VectorXd value;
  double err_estimate = 0.0;   // worst-component extrapolation uncertainty
  double tail_estimate = 0.0;  // worst-component tail correction magnitude
  bool converged = false;
  int restarts = 0;
};

struct IntegralResult {
  double value = 0.0;
  double err_estimate = 0.0;
  double tail_estimate = 0.0;
  bool converged = false;
  int restarts = 0;
};

// Core engine. Throws quadrature_error if the integrand is non-integrable
// at 0 at the sampled resolution; nonconvergence is reported via the flag.
VecIntegralResult integrate_mu_vec(int dim, const VecIntegrand& f,
                                   const AlphaContext& ctx,
                                   const QuadratureConfig& cfg = {},
                                   const TailSpec& tail = {});

IntegralResult integrate_mu_result(const std::function<double(double)>& f,
                                   const AlphaContext& ctx,
                                   const QuadratureConfig& cfg = {},
                                   const TailSpec& tail = {});

// Value-only convenience; throws quadrature_error on nonconvergence.
double integrate_mu(const std::function<double(double)>& f,
                    const AlphaContext& ctx, const QuadratureConfig& cfg = {},
                    const TailSpec& tail = {});

// (integral of |f|^p d mu)^(1/p). The TailSpec describes |f|^p, not f.
double lp_norm(const std::function<double(double)>& f, double p,
               const AlphaContext& ctx, const QuadratureConfig& cfg = {},
               const TailSpec& tail = {});

}  // namespace fnx
