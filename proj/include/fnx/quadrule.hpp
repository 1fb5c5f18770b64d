#pragma once

// Cached Gauss-Legendre rules on [-1, 1].

#include <vector>

namespace fnx {

struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Thread-safe; rules are computed once per order and cached.
const GLRule& gl_rule(int order);

}  // namespace fnx
