// Acceptance runner: executes the fourteen verification suites with their
// pinned parameters, one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fnx/verify.hpp"

namespace {

// wall-clock caps, seconds; 0 means uncapped
const double kCaps[14] = {60, 0, 0, 0, 0, 10, 0, 0, 0, 0, 0, 0, 300, 600};

}  // namespace

int main() {
  const std::vector<std::string>& names = fnx::verify_suite_names();
  int failed = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    fnx::SuiteResult res;
    try {
      res = fnx::run_verify_suite(names[i]);
    } catch (const std::exception& e) {
      std::printf("[FAIL] %2zu %-20s exception: %s\n", i + 1,
                  names[i].c_str(), e.what());
      ++failed;
      continue;
    }

    // tightest margin across the suite's checks, for the summary line
    const fnx::CheckResult* worst = nullptr;
    const fnx::CheckResult* first_fail = nullptr;
    for (const fnx::CheckResult& c : res.checks) {
      if (!c.pass && first_fail == nullptr) first_fail = &c;
      if (c.limit <= 0.0) continue;  // equality-style checks have no margin
      if (worst == nullptr || c.value / c.limit > worst->value / worst->limit)
        worst = &c;
    }

    bool pass = res.pass;
    const double cap = kCaps[i];
    const bool overtime = cap > 0.0 && res.seconds > cap;
    if (overtime) pass = false;

    if (pass) {
      if (worst != nullptr) {
        std::printf("[PASS] %2zu %-20s %zu checks, tightest %.3g of allowed "
                    "%.3g (%s), %.1f s\n",
                    i + 1, names[i].c_str(), res.checks.size(), worst->value,
                    worst->limit, worst->name.c_str(), res.seconds);
      } else {
        std::printf("[PASS] %2zu %-20s %zu checks, %.1f s\n", i + 1,
                    names[i].c_str(), res.checks.size(), res.seconds);
      }
    } else {
      ++failed;
      if (first_fail != nullptr) {
        std::printf("[FAIL] %2zu %-20s %s: computed %.6g exceeds allowed "
                    "%.6g, %.1f s\n",
                    i + 1, names[i].c_str(), first_fail->name.c_str(),
                    first_fail->value, first_fail->limit, res.seconds);
      } else {
        std::printf("[FAIL] %2zu %-20s runtime %.1f s exceeds cap %.0f s\n",
                    i + 1, names[i].c_str(), res.seconds, cap);
      }
    }
  }
  if (failed > 0) std::printf("%d of 14 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
