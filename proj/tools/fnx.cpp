// Command line front end: CSV emission for the expansion, semigroup,
// solver, fractional, and transform machinery, plus the verification
// suites. Output is deterministic: fixed column order, 17 significant
// digits, LF line endings, rows assembled in input order.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fnx/basis.hpp"
#include "fnx/expansion.hpp"
#include "fnx/fractional.hpp"
#include "fnx/hankel.hpp"
#include "fnx/measure.hpp"
#include "fnx/semigroup.hpp"
#include "fnx/verify.hpp"

namespace {

// everything a subcommand run needs in one place
struct RunConfig {
  double alpha = 0.0;
  double p = 2.0;
  std::string function;
  int nmax = 40;
  std::vector<double> grid;
  std::vector<double> schedule;  // r values after any t -> e^{-t} mapping
  std::string output;            // empty: stdout
  fnx::QuadratureConfig quad;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

// grid text: either a comma list "0.5,1,2" or a range "lo:hi:count"
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
        count < 2) {
      throw std::invalid_argument("range spec must be lo:hi:count with count >= 2");
    }
    for (int i = 0; i < count; ++i)
      out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    std::size_t used = 0;
    const std::string tok = text.substr(pos, next - pos);
    try {
      out.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in list: '" + tok + "'");
    }
    if (used != tok.size())
      throw std::invalid_argument("bad number in list: '" + tok + "'");
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

// rows are computed concurrently but written in input order, in one pass
struct Emitter {
  std::string header;
  std::vector<std::string> rows;

  void write(const std::string& path) const {
    std::FILE* f = stdout;
    if (!path.empty()) {
      f = std::fopen(path.c_str(), "wb");
      if (f == nullptr)
        throw std::invalid_argument("cannot open output file: " + path);
    }
    std::fputs(header.c_str(), f);
    std::fputc('\n', f);
    for (const std::string& r : rows) {
      std::fputs(r.c_str(), f);
      std::fputc('\n', f);
    }
    if (f != stdout) std::fclose(f);
  }
};

void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::min({n, workers > 0 ? workers : 1, 8});
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err = nullptr;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// combos carry their coefficients exactly; everything else is expanded
fnx::CoefficientVector load_coefficients(const RunConfig& cfg,
                                         const fnx::AlphaContext& ctx) {
  fnx::FunctionSpec f = fnx::parse_function(cfg.function);
  if (f.kind == fnx::FunctionKind::BasisCombo)
    return fnx::combo_coefficients(f, ctx.alpha);
  return fnx::expand(f, cfg.nmax, ctx, cfg.quad);
}

int cmd_basis(const RunConfig& cfg) {
  fnx::make_alpha_context(cfg.alpha);  // validates alpha > -1
  Emitter out;
  out.header = "x";
  for (int n = 0; n <= cfg.nmax; ++n) out.header += ",j" + std::to_string(n);
  out.rows.resize(cfg.grid.size());
  parallel_for(static_cast<int>(cfg.grid.size()), [&](int i) {
    std::string row = g17(cfg.grid[i]);
    for (int n = 0; n <= cfg.nmax; ++n)
      row += "," + g17(fnx::eval_jn(cfg.alpha, n, cfg.grid[i]));
    out.rows[i] = std::move(row);
  });
  out.write(cfg.output);
  return 0;
}

int cmd_coeffs(const RunConfig& cfg) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  fnx::FunctionSpec f = fnx::parse_function(cfg.function);
  fnx::CoefficientVector c = fnx::expand(f, cfg.nmax, ctx, cfg.quad);
  Emitter out;
  out.header = "n,coefficient";
  for (int n = 0; n <= c.N; ++n)
    out.rows.push_back(std::to_string(n) + "," + g17(c.coeffs[n]));
  out.write(cfg.output);
  return 0;
}

int cmd_semigroup(const RunConfig& cfg, bool heat) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  fnx::CoefficientVector c = load_coefficients(cfg, ctx);
  Emitter out;
  out.header = "r,x,value,tail_certificate";
  const int nx = static_cast<int>(cfg.grid.size());
  out.rows.resize(cfg.schedule.size() * cfg.grid.size());
  parallel_for(static_cast<int>(out.rows.size()), [&](int i) {
    const double r = cfg.schedule[i / nx];
    const double x = cfg.grid[i % nx];
    fnx::SemigroupSpec s = heat ? fnx::SemigroupSpec::heat(cfg.alpha, r)
                                : fnx::SemigroupSpec::poisson(cfg.alpha, r);
    fnx::SeriesResult res = fnx::eval_series(c, s, x);
    out.rows[i] = g17(r) + "," + g17(x) + "," + g17(res.value) + "," +
                  g17(res.tail_certificate);
  });
  out.write(cfg.output);
  return 0;
}

int cmd_solve(const RunConfig& cfg, bool heat) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  fnx::CoefficientVector c = load_coefficients(cfg, ctx);
  Emitter out;
  out.header = "t,x,value,residual,scale,plus_variant";
  const int nx = static_cast<int>(cfg.grid.size());
  out.rows.resize(cfg.schedule.size() * cfg.grid.size());
  parallel_for(static_cast<int>(out.rows.size()), [&](int i) {
    const double t = cfg.schedule[i / nx];
    const double x = cfg.grid[i % nx];
    fnx::SemigroupSpec s = heat
                               ? fnx::SemigroupSpec::heat(cfg.alpha, std::exp(-t))
                               : fnx::SemigroupSpec::poisson(cfg.alpha,
                                                             std::exp(-t));
    const double value = fnx::eval_series(c, s, x).value;
    fnx::ResidualResult res = heat ? fnx::residual_heat(c, t, x, ctx)
                                   : fnx::residual_poisson(c, t, x, ctx);
    out.rows[i] = g17(t) + "," + g17(x) + "," + g17(value) + "," +
                  g17(res.residual) + "," + g17(res.scale) + "," +
                  g17(res.plus_variant);
  });
  out.write(cfg.output);
  return 0;
}

int cmd_fracint(const RunConfig& cfg, double lambda) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  fnx::CoefficientVector c = load_coefficients(cfg, ctx);
  Emitter out;
  out.header = "x,series,quadrature,difference";
  out.rows.resize(cfg.grid.size());
  parallel_for(static_cast<int>(cfg.grid.size()), [&](int i) {
    const double x = cfg.grid[i];
    const double s = fnx::frac_series(c, lambda, ctx, x);
    const double q = fnx::frac_quadrature(c, lambda, ctx, x, cfg.quad);
    out.rows[i] = g17(x) + "," + g17(s) + "," + g17(q) + "," + g17(s - q);
  });
  out.write(cfg.output);
  return 0;
}

int cmd_hankel(const RunConfig& cfg, bool multiplier) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  fnx::FunctionSpec f = fnx::parse_function(cfg.function);
  Eigen::VectorXd grid(static_cast<int>(cfg.grid.size()));
  for (std::size_t i = 0; i < cfg.grid.size(); ++i)
    grid[static_cast<int>(i)] = cfg.grid[i];
  fnx::HankelConfig hc;
  hc.quad = cfg.quad;
  fnx::TransformResult res = multiplier
                                 ? fnx::multiplier_grid(f, ctx, grid, hc)
                                 : fnx::hankel_grid(f, ctx, grid, hc);
  Emitter out;
  out.header = "y,value,err_estimate";
  for (int i = 0; i < grid.size(); ++i)
    out.rows.push_back(g17(grid[i]) + "," + g17(res.values[i]) + "," +
                       g17(res.errs[i]));
  out.write(cfg.output);
  return 0;
}

int cmd_normtable(const RunConfig& cfg, int nmin, bool force) {
  fnx::AlphaContext ctx = fnx::make_alpha_context(cfg.alpha);
  if (!force && !(cfg.p > ctx.p0 && cfg.p < ctx.p1)) {
    std::fprintf(stderr,
                 "p=%g is outside the admissible range (%g, %g) for "
                 "alpha=%g; pass --force to proceed anyway\n",
                 cfg.p, ctx.p0, ctx.p1, cfg.alpha);
    return 2;
  }
  fnx::NormGrowthModel model = fnx::jn_norm_model(cfg.alpha, cfg.p);
  Emitter out;
  out.header = "n,norm,model,ratio";
  const int lo = nmin, hi = cfg.nmax;
  out.rows.resize(hi - lo + 1);
  parallel_for(hi - lo + 1, [&](int i) {
    const int n = lo + i;
    const double norm = fnx::lp_norm_spec(
        fnx::FunctionSpec::basis_combo({{n, 1.0}}), cfg.p, ctx, cfg.quad);
    const double m = model.value(n);
    out.rows[i] = std::to_string(n) + "," + g17(norm) + "," + g17(m) + "," +
                  g17(norm / m);
  });
  out.write(cfg.output);
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::vector<std::string> suites,
               bool all, const fnx::VerifyOptions& opt) {
  std::fprintf(stderr, "seed: %llu\n",
               static_cast<unsigned long long>(opt.seed));
  if (all) suites = fnx::verify_suite_names();
  if (suites.empty()) {
    std::fprintf(stderr, "verify needs --suite NAME (repeatable) or --all\n");
    return 2;
  }
  Emitter out;
  out.header = "suite,check,value,limit,pass";
  const fnx::CheckResult* first_fail = nullptr;
  std::vector<fnx::SuiteResult> results;
  results.reserve(suites.size());
  for (const std::string& s : suites) results.push_back(fnx::run_verify_suite(s, opt));
  for (const fnx::SuiteResult& res : results) {
    for (const fnx::CheckResult& c : res.checks) {
      out.rows.push_back(res.suite + "," + c.name + "," + g17(c.value) + "," +
                         g17(c.limit) + "," + (c.pass ? "1" : "0"));
      if (!c.pass && first_fail == nullptr) first_fail = &c;
    }
  }
  out.write(cfg.output);
  if (first_fail != nullptr) {
    std::fprintf(stderr, "verify failure: %s: computed %.17g exceeds allowed %.17g\n",
                 first_fail->name.c_str(), first_fail->value,
                 first_fail->limit);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Neumann expansion toolkit: orthonormal Bessel-type "
               "basis, semigroups, fractional powers, Hankel multiplier"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  RunConfig cfg;
  app.add_option("--output", cfg.output, "write CSV to this path (default stdout)");
  app.add_option("--rel-tol", cfg.quad.rel_tol, "quadrature relative tolerance");
  app.add_option("--abs-tol", cfg.quad.abs_tol, "quadrature absolute tolerance");

  std::string grid_text, r_text, t_text;
  double lambda = 1.0;
  int nmin = 2;
  bool heat = false, multiplier = false, force = false, all_suites = false;
  std::uint64_t seed = 12345;
  std::vector<std::string> suites;

  CLI::App* basis = app.add_subcommand("basis", "tabulate the orthonormal family");
  basis->add_option("--alpha", cfg.alpha, "family parameter, > -1")->required();
  basis->add_option("--nmax", cfg.nmax, "largest index")->default_val(8);
  basis->add_option("--grid", grid_text, "x list or lo:hi:count")->required();

  CLI::App* coeffs = app.add_subcommand("coeffs", "expansion coefficients by quadrature");
  coeffs->add_option("--alpha", cfg.alpha)->required();
  coeffs->add_option("--function", cfg.function,
                     "jn:n*w,... | bump:a,b | indicator:a,b | polyexp:k")->required();
  coeffs->add_option("--nmax", cfg.nmax)->default_val(8);

  CLI::App* semi = app.add_subcommand("semigroup", "Poisson or heat semigroup values");
  semi->add_option("--alpha", cfg.alpha)->required();
  semi->add_option("--function", cfg.function)->required();
  semi->add_option("--kind", [&heat](const std::vector<std::string>& v) {
    if (v[0] == "poisson") { heat = false; return true; }
    if (v[0] == "heat") { heat = true; return true; }
    return false;
  }, "poisson | heat")->required()->expected(1);
  semi->add_option("--r", r_text, "r values in (0,1), comma list");
  semi->add_option("--t", t_text, "times, mapped to r = exp(-t)");
  semi->add_option("--grid", grid_text)->required();
  semi->add_option("--nmax", cfg.nmax, "expansion length for non-combo inputs");

  CLI::App* solve = app.add_subcommand("solve", "initial value problems with residuals");
  solve->add_option("--alpha", cfg.alpha)->required();
  solve->add_option("--function", cfg.function, "initial datum")->required();
  solve->add_option("--equation", [&heat](const std::vector<std::string>& v) {
    if (v[0] == "poisson") { heat = false; return true; }
    if (v[0] == "heat") { heat = true; return true; }
    return false;
  }, "heat | poisson")->required()->expected(1);
  solve->add_option("--t", t_text, "times, comma list")->required();
  solve->add_option("--grid", grid_text)->required();
  solve->add_option("--nmax", cfg.nmax);

  CLI::App* frac = app.add_subcommand("fracint", "negative fractional power of the operator");
  frac->add_option("--alpha", cfg.alpha)->required();
  frac->add_option("--function", cfg.function)->required();
  frac->add_option("--lambda", lambda, "power, > 0")->required();
  frac->add_option("--grid", grid_text)->required();
  frac->add_option("--nmax", cfg.nmax);

  CLI::App* hankel = app.add_subcommand("hankel", "modified Hankel transform or multiplier");
  hankel->add_option("--alpha", cfg.alpha)->required();
  hankel->add_option("--function", cfg.function)->required();
  hankel->add_option("--grid", grid_text, "strictly increasing, nonnegative")->required();
  hankel->add_flag("--multiplier", multiplier, "apply the band-limiting multiplier");

  CLI::App* normtable = app.add_subcommand("normtable", "Lp norms against the growth model");
  normtable->add_option("--alpha", cfg.alpha)->required();
  normtable->add_option("--p", cfg.p, "exponent, inside the admissible range")->required();
  normtable->add_option("--nmin", nmin)->default_val(2);
  normtable->add_option("--nmax", cfg.nmax)->default_val(20);
  normtable->add_flag("--force", force, "skip the admissible-range guard");

  CLI::App* verify = app.add_subcommand("verify", "named verification suites");
  verify->add_option("--suite", suites, "suite name, repeatable");
  verify->add_flag("--all", all_suites, "run every suite in order");
  verify->add_option("--seed", seed, "seed for randomized suites");
  std::vector<double> verify_alphas;
  int verify_nmax = -1;
  verify->add_option("--alpha", verify_alphas, "replace a suite's alpha sweep");
  verify->add_option("--nmax", verify_nmax, "replace a suite's index cap");

  // let --output / --rel-tol / --abs-tol appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    if (!r_text.empty() && !t_text.empty())
      throw std::invalid_argument("give either --r or --t, not both");
    if (!r_text.empty()) cfg.schedule = parse_grid(r_text);
    if (!t_text.empty()) {
      for (double t : parse_grid(t_text)) cfg.schedule.push_back(std::exp(-t));
    }

    if (basis->parsed()) return cmd_basis(cfg);
    if (coeffs->parsed()) return cmd_coeffs(cfg);
    if (semi->parsed()) {
      if (cfg.schedule.empty())
        throw std::invalid_argument("semigroup needs --r or --t");
      return cmd_semigroup(cfg, heat);
    }
    if (solve->parsed()) {
      // solve reports in t; recover the times from the r mapping
      std::vector<double> ts;
      for (double r : cfg.schedule) ts.push_back(-std::log(r));
      cfg.schedule = ts;
      return cmd_solve(cfg, heat);
    }
    if (frac->parsed()) return cmd_fracint(cfg, lambda);
    if (hankel->parsed()) return cmd_hankel(cfg, multiplier);
    if (normtable->parsed()) return cmd_normtable(cfg, nmin, force);
    if (verify->parsed()) {
      fnx::VerifyOptions opt;
      opt.seed = seed;
      opt.alphas = verify_alphas;
      opt.nmax = verify_nmax;
      return cmd_verify(cfg, suites, all_suites, opt);
    }
  } catch (const fnx::quadrature_error& e) {
    std::fprintf(stderr, "quadrature did not converge: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
