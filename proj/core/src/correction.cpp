// SPDX-License-Identifier: Apache-2.0
#include "nqn/correction.hpp"

#include "nqn/box.hpp"

namespace nqn {

CorrectionOutcome correct(const Vector& x, const Vector& g, const Bounds& b,
                          const ActiveSet& initial, const LbfgsMemory& memory) {
  NQN_CHECK(b.valid(), "correct: invalid bounds");
  NQN_CHECK(x.size() == b.dimension() && g.size() == x.size(), "correct: dimension mismatch");
  NQN_CHECK(memory.dimension() == x.size(), "correct: memory dimension mismatch");
  NQN_CHECK(b.contains(x), "correct: x not feasible");

  const ActiveSet tight = tight_set(x, b);
  NQN_CHECK(initial.subset_of(tight), "correct: initial set must be a subset of the tight set");

  CorrectionOutcome out;
  if (tight.empty()) {
    SubspaceSolveReport rep = memory.subspace_solve(g, ActiveSet(x.size()));
    out.final_set = ActiveSet(x.size());
    out.direction = std::move(rep.direction);
    out.loop_count = 1;
    out.status = rep.status;
    return out;
  }

  const std::vector<Index> tight_idx = tight.indices();
  ActiveSet working = initial;
  while (true) {
    SubspaceSolveReport rep = memory.subspace_solve(g, working);
    ++out.loop_count;
    if (rep.status != SolveStatus::Ok) {
      out.status = rep.status;
      out.final_set = std::move(working);
      out.direction = std::move(rep.direction);  // zero vector; unusable either way
      return out;
    }
    std::vector<Index> offending;
    for (Index i : tight_idx) {
      if (working.contains(i)) continue;
      const double pi = rep.direction[i];
      // Literal T(x, p)_i != p_i: the step leaves the box at coordinate i.
      // Both clauses can apply when l_i == u_i.
      const bool outward =
          (x[i] == b.lower[i] && pi < 0.0) || (x[i] == b.upper[i] && pi > 0.0);
      if (outward) offending.push_back(i);
    }
    if (offending.empty()) {
      out.final_set = std::move(working);
      out.direction = std::move(rep.direction);
      return out;
    }
    for (Index i : offending) working.insert(i, tight.side(i));
    out.added_per_round.push_back(std::move(offending));
  }
}

bool lemma1_check(const Vector& x, const Vector& g, const Bounds& b,
                  const LbfgsMemory& memory) {
  const CorrectionOutcome out = correct(x, g, b, binding_set(x, g, b), memory);
  if (out.status != SolveStatus::Ok) return false;
  if (!out.direction.isZero(0.0)) return true;
  return stationarity_residual(x, g, b).isZero(0.0);
}

}  // namespace nqn
