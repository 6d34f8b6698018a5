// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: single solves with optional per-iteration traces,
// benchmark matrix runs, gradient checks, and problem listing.
//
// Exit codes: 0 success, 1 unsatisfied solve or failed gradient check,
// 2 usage or configuration error.

#include "nqn/harness.hpp"
#include "nqn/problems.hpp"
#include "nqn/solver.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* ls_status_name(nqn::LineSearchStatus s) {
  switch (s) {
    case nqn::LineSearchStatus::WolfeStep: return "wolfe";
    case nqn::LineSearchStatus::DecreaseOnly: return "decrease_only";
    case nqn::LineSearchStatus::NoDirection: return "no_direction";
    case nqn::LineSearchStatus::SearchError: return "search_error";
  }
  return "?";
}

nqn::RunResult to_run_result(const std::string& problem, nqn::Index n, std::uint64_t seed,
                             nqn::Variant variant, const nqn::RunRecord& rec) {
  nqn::RunResult r;
  r.problem = problem;
  r.dim = n;
  r.seed = seed;
  r.variant = variant;
  r.termination = rec.termination;
  r.best_f = rec.best_f;
  r.grad_evals = rec.grad_evals;
  r.wall_time = rec.wall_time;
  r.f_history = rec.f_history;
  r.evals_at.push_back(1);
  for (std::size_t k = 1; k < rec.f_history.size(); ++k)
    r.evals_at.push_back(rec.iterations[k - 1].grad_evals);
  return r;
}

struct SolveOptions {
  std::string problem;
  nqn::Index n = 100;
  std::uint64_t seed = 1;
  std::string variant = "V3";
  double budget_mult = 100.0;
  double eps = 1e-4;
  std::optional<double> fstar;
  nqn::Index memory = 20;
  nqn::Index history = 20;
  bool trace = false;
  bool verbose = false;
};

int run_solve(const SolveOptions& opt) {
  const nqn::ProblemInstance prob = nqn::make_instance(opt.problem, opt.n);
  const nqn::Vector x0 = nqn::make_start(prob.bounds, opt.seed);
  nqn::SolverConfig cfg;
  cfg.variant = nqn::variant_from_name(opt.variant);
  cfg.memory = opt.memory;
  cfg.history = opt.history;
  cfg.budget = static_cast<std::int64_t>(opt.budget_mult * static_cast<double>(opt.n));

  const nqn::RunRecord rec = nqn_solve(prob, x0, cfg);

  if (opt.trace)
    for (const auto& it : rec.iterations)
      std::cout << it.k << "," << fmt(it.f) << "," << it.a_init_size << "," << it.a_final_size
                << "," << fmt(it.alpha) << "," << ls_status_name(it.ls_status) << ","
                << it.grad_evals << "\n";

  // The summary goes to stderr under --trace so traces stay machine-readable.
  std::ostream& out = opt.trace ? std::cerr : std::cout;

  std::optional<double> fstar = opt.fstar;
  std::string fstar_origin = "--fstar";
  if (!fstar && prob.f_star_hint) {
    fstar = prob.f_star_hint;
    fstar_origin = "problem registry";
  }
  nqn::Flag flag;
  std::string flag_origin;
  if (fstar) {
    const nqn::RunResult r = to_run_result(opt.problem, opt.n, opt.seed, cfg.variant, rec);
    flag = nqn::classify(r, *fstar, opt.eps);
    flag_origin = "eps = " + fmt(opt.eps) + ", f_star = " + fmt(*fstar) + " from " + fstar_origin;
  } else {
    switch (rec.termination) {
      case nqn::Termination::Stationary: flag = nqn::Flag::Ok; break;
      case nqn::Termination::BudgetExhausted: flag = nqn::Flag::Max; break;
      default: flag = nqn::Flag::Other; break;
    }
    flag_origin = "from termination status, no f_star available";
  }

  out << "problem: " << opt.problem << "\n";
  out << "n: " << opt.n << "\n";
  out << "seed: " << opt.seed << "\n";
  out << "variant: " << opt.variant << "\n";
  out << "termination: " << nqn::termination_name(rec.termination) << "\n";
  out << "iterations: " << rec.iterations.size() << "\n";
  out << "grad_evals: " << rec.grad_evals << "\n";
  out << "best_f: " << fmt(rec.best_f) << "\n";
  out << "flag: " << nqn::flag_name(flag) << " (" << flag_origin << ")\n";
  if (opt.verbose) {
    out << "qp_fallbacks: " << rec.qp_fallbacks << "\n";
    out << "skipped_pairs: " << rec.skipped_pairs << "\n";
    out << "memory_resets: " << rec.memory_resets << "\n";
    out << "final_active_set: " << rec.final_active_set.size() << " of " << opt.n << "\n";
    out << "wall_time: " << fmt(rec.wall_time) << "\n";
  }
  return flag == nqn::Flag::Other ? 1 : 0;
}

struct BenchOptions {
  std::string spec_path;
  std::string out_dir;
  int jobs = 1;
  bool timing = false;
  bool verbose = false;
};

int run_bench(const BenchOptions& opt) {
  nqn::RunMatrixSpec spec;
  std::string spec_origin = "built-in default matrix";
  if (!opt.spec_path.empty()) {
    std::ifstream in(opt.spec_path, std::ios::binary);
    if (!in.good()) throw std::invalid_argument("nqn: cannot read spec file '" + opt.spec_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    spec = nqn::parse_run_spec(text.str());
    spec_origin = "file '" + opt.spec_path + "'";
  } else {
    spec = nqn::default_matrix();
  }

  std::string out_origin = !opt.spec_path.empty() ? "spec file" : "default";
  if (const char* env = std::getenv("NQN_OUT_DIR"); env && *env) {
    spec.output_dir = env;
    out_origin = "NQN_OUT_DIR";
  }
  if (!opt.out_dir.empty()) {
    spec.output_dir = opt.out_dir;
    out_origin = "--out";
  }
  if (opt.timing) spec.record_wall_time = true;

  if (opt.verbose) {
    std::cout << "spec: " << spec_origin << "\n";
    std::cout << "output_dir: " << spec.output_dir << " (" << out_origin << ")\n";
    std::cout << "jobs: " << opt.jobs << "\n";
    std::cout << "record_wall_time: " << (spec.record_wall_time ? "true" : "false")
              << (opt.timing ? " (--timing)" : "") << "\n";
  }

  const auto results = nqn::run_matrix(spec, opt.jobs);
  nqn::emit_outputs(results, spec);
  std::cout << "wrote " << results.size() << " runs to " << spec.output_dir << "\n";
  if (opt.verbose) {
    std::ifstream summary(spec.output_dir + "/summary.txt");
    std::cout << summary.rdbuf();
  }
  return 0;
}

struct CheckOptions {
  std::string problem;  // empty = all
  nqn::Index n = 50;
  int points = 100;
  std::uint64_t seed = 7;
  double tol = 1e-6;
};

int run_check(const CheckOptions& opt) {
  std::vector<std::string> names =
      opt.problem.empty() ? nqn::problem_names() : std::vector<std::string>{opt.problem};
  bool all_ok = true;
  for (const auto& name : names) {
    const nqn::ProblemInstance prob = nqn::make_instance(name, opt.n);
    double worst = 0.0;
    for (int pt = 0; pt < opt.points; ++pt) {
      const nqn::Vector x =
          nqn::fd_sample_point(prob, opt.seed, static_cast<std::uint64_t>(pt));
      worst = std::max(worst, nqn::fd_check(prob, x, 1e-5).max_rel_error);
    }
    const bool ok = worst <= opt.tol;
    all_ok = all_ok && ok;
    std::cout << name << ": max_rel_error " << fmt(worst) << " over " << opt.points
              << " points " << (ok ? "[ok]" : "[FAIL]") << "\n";
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bound-constrained nonsmooth quasi-Newton solver"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "run one solver instance");
  solve->add_option("problem", solve_opt.problem, "problem name (see list-problems)")->required();
  solve->add_option("--n", solve_opt.n, "dimension")->check(CLI::Range(2, 1000000));
  solve->add_option("--seed", solve_opt.seed, "start-point seed");
  solve->add_option("--variant", solve_opt.variant, "active-set variant V1..V4");
  solve->add_option("--budget-mult", solve_opt.budget_mult, "gradient budget per dimension");
  solve->add_option("--eps", solve_opt.eps, "accuracy level for the flag");
  solve->add_option("--fstar", solve_opt.fstar, "reference optimal value");
  solve->add_option("--memory", solve_opt.memory, "curvature pairs kept");
  solve->add_option("--history", solve_opt.history, "gradient history window");
  solve->add_flag("--trace", solve_opt.trace,
                  "per-iteration k,f,a_init,a_final,alpha,ls_status,grad_evals on stdout");
  solve->add_flag("--verbose", solve_opt.verbose, "extra run statistics");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "run a benchmark matrix and write reports");
  bench->add_option("--spec", bench_opt.spec_path, "run spec file (key = value lines)");
  bench->add_option("--out", bench_opt.out_dir, "output directory (overrides NQN_OUT_DIR)");
  bench->add_option("--jobs", bench_opt.jobs, "worker threads")->check(CLI::Range(1, 1024));
  bench->add_flag("--timing", bench_opt.timing, "record wall times (output no longer byte-stable)");
  bench->add_flag("--verbose", bench_opt.verbose, "print config provenance and summary");

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check-grads", "finite-difference gradient validation");
  check->add_option("--problem", check_opt.problem, "single problem (default: all)");
  check->add_option("--n", check_opt.n, "dimension")->check(CLI::Range(2, 1000000));
  check->add_option("--points", check_opt.points, "sample points per problem")
      ->check(CLI::Range(1, 1000000));
  check->add_option("--seed", check_opt.seed, "sampling seed");
  check->add_option("--tol", check_opt.tol, "max relative error accepted");

  auto* list = app.add_subcommand("list-problems", "print the problem suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(solve_opt);
    if (app.got_subcommand(bench)) return run_bench(bench_opt);
    if (app.got_subcommand(check)) return run_check(check_opt);
    if (app.got_subcommand(list)) {
      for (const auto& name : nqn::problem_names()) std::cout << name << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
