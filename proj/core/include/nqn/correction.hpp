// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/lbfgs.hpp"
#include "nqn/types.hpp"

#include <vector>

namespace nqn {

struct CorrectionOutcome {
  ActiveSet final_set;
  Vector direction;
  int loop_count = 0;  // subspace solves performed; at most |tight set| + 1
  std::vector<std::vector<Index>> added_per_round;  // offending sets, in order
  SolveStatus status = SolveStatus::Ok;
};

/// Iterative active-set correction. Starting from `initial` (a subset of the
/// coordinates tight at x), repeatedly solve the restricted quasi-Newton
/// system and move every tight coordinate whose direction component points
/// out of the box (p_i < 0 at a lower bound, p_i > 0 at an upper bound) into
/// the working set. The working sets are nested, each round adds at least one
/// coordinate, and the loop stops as soon as the direction is instantaneously
/// feasible, so at most |tight| rounds add members. If no coordinate is tight
/// the single unrestricted solve is returned with an empty final set.
CorrectionOutcome correct(const Vector& x, const Vector& g, const Bounds& b,
                          const ActiveSet& initial, const LbfgsMemory& memory);

/// Diagnostic for the zero-direction guarantee: with the binding set as the
/// initial working set, a zero corrected direction certifies first-order
/// stationarity. Returns true when the guarantee holds at (x, g).
bool lemma1_check(const Vector& x, const Vector& g, const Bounds& b,
                  const LbfgsMemory& memory);

}  // namespace nqn
