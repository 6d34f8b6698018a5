// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/types.hpp"

#include <functional>

namespace nqn {

/// Evaluation oracle: returns f(x) and fills the gradient (a subgradient at
/// kinks, chosen by a fixed tie-break). Must be deterministic.
using Oracle = std::function<double(const Vector&, Vector&)>;

struct LineSearchConfig {
  double c1 = 1e-8;       // sufficient-decrease slope fraction
  double c2 = 0.9;        // curvature slope fraction, c1 < c2 < 1
  double eps_abs = 1e-16; // bracket width floor
  double eps_rel = 1e-6;  // bracket width floor relative to the lower end
  int max_trials = 200;   // hard cap backstopping bracket stagnation

  bool valid() const {
    return 0.0 < c1 && c1 < c2 && c2 < 1.0 && eps_abs >= 0.0 && eps_rel >= 0.0 &&
           max_trials > 0;
  }
};

enum class LineSearchStatus : std::uint8_t {
  WolfeStep,     // sufficient decrease and curvature both hold at alpha
  DecreaseOnly,  // bracket collapsed; alpha gives sufficient decrease only
  NoDirection,   // the projected direction is identically zero; no trials
  SearchError,   // bracket collapsed at zero or the trial cap was reached
};

struct LineSearchOutcome {
  LineSearchStatus status = LineSearchStatus::SearchError;
  double alpha = 0.0;
  int trial_count = 0;
  // Cached evaluation at the accepted point P(x + alpha * pbar); valid for
  // WolfeStep and DecreaseOnly.
  Vector x_new;
  double f_new = 0.0;
  Vector g_new;
};

/// Largest breakpoint of the ray x + alpha*p inside the box: the maximum over
/// coordinates of the step at which coordinate i reaches its facing bound,
/// taken as a positive magnitude; coordinates that never hit a bound (p_i = 0,
/// an infinite bound, or already pinned at the bound p_i pushes into)
/// contribute +infinity.
double max_breakpoint(const Vector& x, const Vector& p, const Bounds& b);

/// Bracketing weak-Wolfe search along the projected arc P(x + alpha * pbar),
/// pbar = T(x, p). Trial steps test
///   sufficient decrease:  f(trial) <= f(x) + alpha * c1 * grad(x)^T pbar,
///   curvature:            grad(trial)^T T(trial, p) >= c2 * grad(x)^T pbar,
/// shrinking [L, U] on failures: a decrease failure lowers U, a curvature
/// failure raises L. The step bisects once U has moved below the largest
/// breakpoint and otherwise grows by min(2L, U). When the bracket width
/// falls under eps_abs + eps_rel*L the search returns the last
/// decrease-satisfying step (DecreaseOnly), or SearchError if none exists.
/// With an unbounded box this reduces to Lewis-Overton bisection exactly.
LineSearchOutcome modified_wolfe(const Vector& x, double f0, const Vector& g0,
                                 const Vector& p, const Bounds& b, const Oracle& oracle,
                                 const LineSearchConfig& cfg);

}  // namespace nqn
