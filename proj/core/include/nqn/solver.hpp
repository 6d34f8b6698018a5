// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/line_search.hpp"
#include "nqn/problems.hpp"
#include "nqn/subgradient.hpp"
#include "nqn/types.hpp"

#include <cstdint>
#include <vector>

namespace nqn {

/// Active-set policies. V1/V2 solve once on their predicted set; V3/V4 run
/// the iterative correction starting from it.
///   V1: binding set of the plain gradient, no correction
///   V2: binding set of the smoothed direction united with V1's, no correction
///   V3: correction seeded with V1's set
///   V4: correction seeded with V2's set
enum class Variant : std::uint8_t { V1 = 1, V2 = 2, V3 = 3, V4 = 4 };

enum class Termination : std::uint8_t {
  Stationary,          // stationarity residual within tolerance
  BudgetExhausted,     // gradient-evaluation budget exceeded
  NoDirection,         // projected direction vanished at a non-stationary point
  LineSearchError,     // bracket collapsed without an acceptable step
  NumericalBreakdown,  // subspace system too ill-conditioned to factor
};

struct SolverConfig {
  Variant variant = Variant::V3;
  Index memory = 20;            // curvature pairs kept (m)
  Index history = 20;           // gradient history window (M)
  double eps_skip = 1e-8;       // curvature-pair acceptance threshold
  double stationarity_tol = 0.0;  // sup-norm residual tolerance; 0 = exact
  std::int64_t budget = -1;     // gradient evaluations; -1 selects 100*n
  LineSearchConfig line_search{};
  // Re-derives the accepted-step conditions from fresh oracle calls (not
  // counted against the budget) and tallies violations.
  bool validate_steps = false;

  bool valid() const {
    return memory >= 1 && history >= 1 && eps_skip >= 0.0 && stationarity_tol >= 0.0 &&
           line_search.valid();
  }
};

struct IterationRecord {
  int k = 0;
  double f = 0.0;            // objective at the iterate the step started from
  Index a_init_size = 0;     // predicted active set
  Index a_final_size = 0;    // active set actually used for the direction
  double alpha = 0.0;
  LineSearchStatus ls_status = LineSearchStatus::SearchError;
  std::int64_t grad_evals = 0;  // cumulative, at the end of the iteration
  std::uint64_t a_final_hash = 0;
};

struct RunRecord {
  Termination termination = Termination::BudgetExhausted;
  std::vector<double> f_history;  // objective at each accepted iterate, start first
  std::vector<IterationRecord> iterations;
  double best_f = 0.0;
  Vector best_x;
  std::int64_t grad_evals = 0;
  std::int64_t qp_fallbacks = 0;       // smoothing QP cap hits (plain gradient used)
  std::int64_t skipped_pairs = 0;      // curvature pairs rejected by the filter
  std::int64_t memory_resets = 0;      // pair sets dropped after a factorization failure
  std::int64_t contract_violations = 0;        // validate_steps failures
  std::int64_t correction_round_violations = 0;  // rounds exceeding the tight count
  ActiveSet final_active_set;
  double wall_time = 0.0;  // seconds
};

struct ActiveSetChoice {
  ActiveSet set;
  bool qp_fallback = false;
};

/// The predicted active set for a variant at (x, g). V2/V4 smooth the
/// gradient over `history`; a QP cap hit falls back to the plain gradient and
/// is reported through `qp_fallback`.
ActiveSetChoice select_active_set(Variant variant, const Vector& x, const Vector& g,
                                  const Bounds& b, const GradientHistory& history);

/// Runs the bound-constrained quasi-Newton iteration from x0 (which must be
/// feasible) until stationarity, budget exhaustion, or a terminal line-search
/// condition. Deterministic: identical inputs produce identical records.
RunRecord nqn_solve(const ProblemInstance& prob, const Vector& x0, const SolverConfig& cfg);

}  // namespace nqn
