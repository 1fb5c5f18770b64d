#pragma once

// Named verification suites, one per acceptance property, shared by the
// command line front end and the acceptance runner. Every suite pins its
// own parameters and tolerances; options only widen or narrow the sweep
// where a suite documents it.

#include <cstdint>
#include <string>
#include <vector>

namespace fnx {

struct CheckResult {
  std::string name;
  double value = 0.0;  // measured deviation or quantity
  double limit = 0.0;  // largest value that passes
  bool pass = false;   // value <= limit and finite
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = false;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 12345;  // randomized suites draw from this
  // non-empty: replaces the alpha sweep in suites that have one
  std::vector<double> alphas;
  // >= 0: replaces the index cap in suites that have one
  int nmax = -1;
};

// the fourteen suite names in acceptance order
const std::vector<std::string>& verify_suite_names();

// throws std::invalid_argument for an unknown name
SuiteResult run_verify_suite(const std::string& name,
                             const VerifyOptions& opt = {});

std::vector<SuiteResult> run_all_suites(const VerifyOptions& opt = {});

}  // namespace fnx
