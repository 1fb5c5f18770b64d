#pragma once

// Symbolic input functions, their coefficients against the orthonormal
// family, partial sums, Cesaro means of order one, and the rho-weighted
// summation mean.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fnx/measure.hpp"

namespace fnx {

enum class FunctionKind { BasisCombo, Bump, PolyExp, Indicator };

// Evaluable description of an input function on (0, inf). Kinds:
//   BasisCombo  weighted finite sum of basis members j_n
//   Bump        smooth bump supported on (a, b)
//   PolyExp     x^k e^{-x^2/2} x^{-alpha-1}, no normalization
//   Indicator   characteristic function of (a, b)
struct FunctionSpec {
  FunctionKind kind = FunctionKind::BasisCombo;
  std::vector<std::pair<int, double>> combo;  // BasisCombo: (index, weight)
  double a = 0.0;                             // Bump / Indicator support
  double b = 1.0;
  bool smooth = true;  // Bump: edges are infinitely flat
  int k = 0;           // PolyExp power

  static FunctionSpec basis_combo(std::vector<std::pair<int, double>> terms);
  static FunctionSpec bump(double a, double b);
  static FunctionSpec indicator(double a, double b);
  static FunctionSpec poly_exp(int k);

  int max_index() const;  // largest basis index in a BasisCombo, -1 otherwise
};

double evaluate(const FunctionSpec& f, double alpha, double x);
std::function<double(double)> as_callable(const FunctionSpec& f, double alpha);

// text grammar: jn:n1*w1,n2*w2,... | bump:a,b | indicator:a,b | polyexp:k
// throws std::invalid_argument on malformed input
FunctionSpec parse_function(const std::string& text);
std::string describe(const FunctionSpec& f);

// quadrature hints for integrals of f times Bessel content of order up to
// nu_max (coefficient pairings)
TailSpec pairing_tail(const FunctionSpec& f, double alpha, double nu_max);
// hints for integrals of |f|^p
TailSpec norm_tail(const FunctionSpec& f, double alpha, double p);

// || f ||_p with the tail hints norm_tail derives from the input kind
double lp_norm_spec(const FunctionSpec& f, double p, const AlphaContext& ctx,
                    const QuadratureConfig& cfg = {});

struct CoefficientVector {
  double alpha = 0.0;
  Eigen::VectorXd coeffs;  // c_0 .. c_N
  int N = 0;
  double quadrature_error = 0.0;
};

// c_n(f) = integral of f j_n d mu
double coefficient(const FunctionSpec& f, int n, const AlphaContext& ctx,
                   const QuadratureConfig& cfg = {});

// coefficients 0..N in one quadrature pass (identical nodes for every n)
CoefficientVector expand(const FunctionSpec& f, int N, const AlphaContext& ctx,
                         const QuadratureConfig& cfg = {});

// exact coefficients of a BasisCombo read off its weights, no quadrature;
// N = -1 sizes the vector by the largest index present
CoefficientVector combo_coefficients(const FunctionSpec& f, double alpha,
                                     int N = -1);

// S_n f(x); requires 0 <= n <= c.N
double partial_sum(const CoefficientVector& c, int n, double x);

// C_n f(x) = (S_0 + ... + S_n)/(n+1), evaluated in the equivalent
// coefficient-weighted form sum_k (1 - k/(n+1)) c_k j_k(x)
double cesaro(const CoefficientVector& c, int n, double x);

// weighted mean with rho_k = 2(alpha + 2k + 2)
double rmean(const CoefficientVector& c, int n, const AlphaContext& ctx,
             double x);

struct UniformBoundReport {
  std::vector<std::string> labels;  // corpus entries, row order
  Eigen::MatrixXd ratios;           // ||C_n f||_p / ||f||_p, corpus x (n+1)
  double worst_ratio = 0.0;
  bool bounded = false;  // last-quartile max <= 1.2 * first-quartile max
};

UniformBoundReport uniform_bound_probe(const std::vector<FunctionSpec>& corpus,
                                       int n_max, double p,
                                       const AlphaContext& ctx,
                                       const QuadratureConfig& cfg = {});

}  // namespace fnx
