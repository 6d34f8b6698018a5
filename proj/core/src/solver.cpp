// SPDX-License-Identifier: Apache-2.0
#include "nqn/solver.hpp"

#include "nqn/box.hpp"
#include "nqn/correction.hpp"
#include "nqn/lbfgs.hpp"

#include <chrono>
#include <utility>

namespace nqn {

ActiveSetChoice select_active_set(Variant variant, const Vector& x, const Vector& g,
                                  const Bounds& b, const GradientHistory& history) {
  ActiveSetChoice choice{ActiveSet(x.size()), false};
  if (variant == Variant::V1 || variant == Variant::V3) {
    choice.set = binding_set(x, g, b);
    return choice;
  }
  const MinNormResult mn = min_norm_combination(history);
  if (mn.converged) {
    choice.set = predict_active_set(x, g, mn.combination, b);
  } else {
    choice.qp_fallback = true;
    choice.set = predict_active_set(x, g, g, b);
  }
  return choice;
}

namespace {

// Re-derives the accepted-step conditions from scratch. Every failed check
// counts one violation; oracle calls made here are not budgeted.
std::int64_t recheck_step(const ProblemInstance& prob, const Vector& x, double f,
                          const Vector& g, const Vector& p, const Bounds& b,
                          const LineSearchConfig& ls_cfg, const LineSearchOutcome& ls) {
  std::int64_t bad = 0;
  const Vector pbar = t_operator(x, p, b);
  const double d0 = g.dot(pbar);
  const Vector expect_x = project(x + ls.alpha * pbar, b);
  if (!b.contains(ls.x_new)) ++bad;
  if (!(ls.x_new.array() == expect_x.array()).all()) ++bad;
  Vector g_fresh(x.size());
  const double f_fresh = prob.evaluate(ls.x_new, g_fresh);
  if (f_fresh != ls.f_new) ++bad;
  if (!(g_fresh.array() == ls.g_new.array()).all()) ++bad;
  if (!(ls.f_new <= f + ls.alpha * ls_cfg.c1 * d0)) ++bad;
  if (ls.status == LineSearchStatus::WolfeStep) {
    if (!(ls.g_new.dot(t_operator(ls.x_new, p, b)) >= ls_cfg.c2 * d0)) ++bad;
  }
  if (!(ls.f_new <= f)) ++bad;
  return bad;
}

}  // namespace

RunRecord nqn_solve(const ProblemInstance& prob, const Vector& x0, const SolverConfig& cfg) {
  NQN_CHECK(cfg.valid(), "solver config invalid");
  const Bounds& b = prob.bounds;
  NQN_CHECK(x0.size() == prob.dim, "start has wrong dimension");
  NQN_CHECK(b.contains(x0), "start is infeasible");
  const auto t0 = std::chrono::steady_clock::now();

  const Index n = prob.dim;
  const std::int64_t budget = cfg.budget < 0 ? 100 * static_cast<std::int64_t>(n) : cfg.budget;

  RunRecord rec;
  Vector x = x0;
  Vector g(n);
  std::int64_t evals = 0;
  const auto oracle = [&](const Vector& xq, Vector& gq) {
    ++evals;
    return prob.evaluate(xq, gq);
  };
  double f = oracle(x, g);

  GradientHistory history(n, cfg.history);
  history.push(x, g);
  LbfgsMemory memory(n, cfg.memory);

  rec.f_history.push_back(f);
  rec.best_f = f;
  rec.best_x = x;
  ActiveSet last_final(n);
  rec.termination = Termination::BudgetExhausted;

  const bool corrects = cfg.variant == Variant::V3 || cfg.variant == Variant::V4;
  for (int k = 1;; ++k) {
    if (stationarity_residual(x, g, b).lpNorm<Eigen::Infinity>() <= cfg.stationarity_tol) {
      rec.termination = Termination::Stationary;
      break;
    }
    if (evals > budget) {
      rec.termination = Termination::BudgetExhausted;
      break;
    }

    memory.set_theta(theta_init(g));
    const ActiveSetChoice choice = select_active_set(cfg.variant, x, g, b, history);
    if (choice.qp_fallback) ++rec.qp_fallbacks;

    Vector p;
    ActiveSet a_final(n);
    SolveStatus dir_status = SolveStatus::Ok;
    const auto compute_direction = [&] {
      if (corrects) {
        CorrectionOutcome out = correct(x, g, b, choice.set, memory);
        dir_status = out.status;
        p = std::move(out.direction);
        a_final = std::move(out.final_set);
        const auto tight = static_cast<std::int64_t>(tight_set(x, b).size());
        std::int64_t adding_rounds = 0;
        for (const auto& round : out.added_per_round)
          if (!round.empty()) ++adding_rounds;
        if (adding_rounds > tight || out.loop_count > tight + 1)
          ++rec.correction_round_violations;
      } else {
        SubspaceSolveReport rep = memory.subspace_solve(g, choice.set);
        dir_status = rep.status;
        p = std::move(rep.direction);
        a_final = choice.set;
      }
    };
    compute_direction();
    if (dir_status == SolveStatus::Breakdown && memory.size() > 0) {
      // Degenerate pair set (typical once steps shrink to rounding level):
      // drop it and redo the iteration on the plain scaled-identity model.
      ++rec.memory_resets;
      memory.clear();
      compute_direction();
    }
    last_final = a_final;
    if (dir_status == SolveStatus::Breakdown) {
      rec.termination = Termination::NumericalBreakdown;
      break;
    }

    const LineSearchOutcome ls = modified_wolfe(x, f, g, p, b, oracle, cfg.line_search);

    IterationRecord ir;
    ir.k = k;
    ir.f = f;
    ir.a_init_size = choice.set.size();
    ir.a_final_size = a_final.size();
    ir.alpha = ls.alpha;
    ir.ls_status = ls.status;
    ir.grad_evals = evals;
    ir.a_final_hash = a_final.hash();
    rec.iterations.push_back(ir);

    if (ls.status == LineSearchStatus::NoDirection) {
      rec.termination = Termination::NoDirection;
      break;
    }
    if (ls.status == LineSearchStatus::SearchError) {
      rec.termination = Termination::LineSearchError;
      break;
    }

    if (cfg.validate_steps)
      rec.contract_violations += recheck_step(prob, x, f, g, p, b, cfg.line_search, ls);

    const Vector s = ls.x_new - x;
    const Vector y = ls.g_new - g;
    if (!memory.update(s, y, cfg.eps_skip)) ++rec.skipped_pairs;

    x = ls.x_new;
    f = ls.f_new;
    g = ls.g_new;
    history.push(x, g);
    rec.f_history.push_back(f);
    if (f < rec.best_f) {
      rec.best_f = f;
      rec.best_x = x;
    }
  }

  rec.grad_evals = evals;
  rec.final_active_set = last_final;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace nqn
