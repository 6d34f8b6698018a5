// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nqn {

/// A benchmark problem at a fixed dimension with its default box. Gradients
/// are hand-coded; at kinks a fixed tie-break applies (sign(0) = +1, max-type
/// terms pick the lowest attaining index), so `evaluate` is a deterministic
/// function of x.
struct ProblemInstance {
  std::string name;
  Index dim = 0;
  Bounds bounds;
  Vector x_star_uncon;  // unconstrained minimizer, used to place the bounds
  // Proven optimal value subject to the default bounds, where one is
  // derivable in closed form. Used as a classification reference when no
  // better value is known.
  std::optional<double> f_star_hint;
  std::function<double(const Vector&, Vector&)> evaluate;
  // Distance proxy to the nearest gradient tie (kink); the finite-difference
  // checker resamples when this is smaller than its tie tolerance.
  std::function<double(const Vector&)> kink_gap;
};

/// The twelve catalog problem names, in canonical (alphabetical) order.
const std::vector<std::string>& problem_names();

/// Builds a catalog problem at dimension n (n >= 2) with default bounds.
/// Unknown names throw with the list of valid names in the message.
ProblemInstance make_instance(const std::string& name, Index n);

/// Default box around the unconstrained minimizer: counting coordinates from
/// one, even coordinates get [x*_i - 5.5, x*_i - 0.5] (which excludes x*),
/// odd coordinates get [-100, 100].
Bounds make_bounds(const Vector& x_star_uncon);

struct StartSpec {
  std::uint64_t seed = 1;
  int count = 10;
};

/// One starting point per seed value: coordinate i is the box midpoint plus a
/// uniform draw from [-2, 2) at stream position i of the counter generator,
/// projected into the box. Infinite midpoints fall back to zero before the
/// projection.
Vector make_start(const Bounds& b, std::uint64_t seed);

/// Starts for seeds spec.seed, spec.seed + 1, ..., spec.seed + count - 1.
std::vector<Vector> make_starts(const Bounds& b, const StartSpec& spec);

struct FdReport {
  double max_rel_error = 0.0;
  bool resampled = false;
  Vector point;  // the point actually checked
};

/// Central-difference check of the hand-coded gradient at x with step
/// h*(1 + |x_i|) per coordinate. Points within 1e-7 of a gradient tie are
/// nudged away first (flagged via `resampled`). The error is componentwise
/// |fd_i - g_i| / max(1, |g_i|), maximized over i.
FdReport fd_check(const ProblemInstance& prob, const Vector& x, double h = 1e-6);

/// Deterministic sample point for gradient checks, coordinates uniform in
/// [-1, 1] (the gradient does not depend on the box, so neither does the
/// sample). Draws are rejected until the point clears every kink by
/// 1e-3 * (1 + |g|_inf), a margin wide enough that no central-difference
/// stencil straddles a kink; gives up after 64 redraws and returns the last
/// draw. Distinct `index` values use disjoint RNG streams.
Vector fd_sample_point(const ProblemInstance& prob, std::uint64_t seed, std::uint64_t index);

}  // namespace nqn
