#include "fnx/quadrule.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace fnx {

const GLRule& gl_rule(int order) {
  static std::map<int, GLRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  constexpr double kPi = 3.14159265358979323846264338327950288;
  GLRule r;
  r.x.resize(order);
  r.w.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n starting from the Chebyshev guess
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[order - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[order - 1 - i] = r.w[i];
  }
  auto [ins, ok] = cache.emplace(order, std::move(r));
  (void)ok;
  return ins->second;
}

}  // namespace fnx
