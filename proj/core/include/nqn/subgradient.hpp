// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/types.hpp"

#include <deque>
#include <utility>

namespace nqn {

/// Gradients of the most recent accepted iterates, newest last. Capacity is
/// the approximation window; pushing at capacity evicts the oldest entry.
class GradientHistory {
 public:
  GradientHistory(Index n, Index capacity);

  Index dimension() const { return n_; }
  Index capacity() const { return capacity_; }
  Index size() const { return static_cast<Index>(entries_.size()); }

  void push(const Vector& x, const Vector& g);

  /// i = 0 is the oldest entry, size()-1 the newest.
  const Vector& iterate(Index i) const { return entries_.at(static_cast<std::size_t>(i)).first; }
  const Vector& gradient(Index i) const { return entries_.at(static_cast<std::size_t>(i)).second; }

 private:
  Index n_;
  Index capacity_;
  std::deque<std::pair<Vector, Vector>> entries_;
};

struct SimplexQpResult {
  Vector lambda;             // simplex weights, sum 1, nonnegative
  double kkt_residual = 0.0; // max stationarity/complementarity violation
  bool converged = true;
  int iterations = 0;
};

/// Minimizes (1/2) lambda^T Q lambda over the unit simplex, where Q is the
/// Gram matrix of the bundle, via the min-norm-point active-set method: grow
/// a working set from the most violating vertex, solve the affine problem on
/// it, and step back along feasible segments when weights go negative.
/// Terminates at machine-precision optimality for the sizes used here
/// (l <= history capacity). `max_iterations < 0` applies the default cap
/// 10*l^2 + 100; hitting the cap returns converged = false with the best
/// feasible weights seen.
SimplexQpResult min_norm_simplex(const Matrix& gram, int max_iterations = -1);

struct MinNormResult {
  Vector combination;  // shortest vector in the convex hull of the bundle
  Vector lambda;       // weights aligned with history order, oldest first
  double kkt_residual = 0.0;
  bool converged = true;
};

/// Shortest convex combination of the gradients held in `history`.
/// On a cap hit (converged = false) the caller is expected to fall back to
/// the plain gradient.
MinNormResult min_norm_combination(const GradientHistory& history, int max_iterations = -1);

/// Active-set prediction: binding set of the smoothed direction united with
/// the binding set of the plain gradient, tags taken from the bound the
/// coordinate sits at.
ActiveSet predict_active_set(const Vector& x, const Vector& g, const Vector& g_tilde,
                             const Bounds& b);

}  // namespace nqn
