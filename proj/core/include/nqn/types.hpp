// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nqn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Caller-contract check. These guard argument errors (size mismatches,
// infeasible inputs), not recoverable runtime conditions.
#define NQN_CHECK(cond, msg)                                        \
  do {                                                              \
    if (!(cond)) {                                                  \
      throw std::invalid_argument(std::string("nqn: ") + (msg));    \
    }                                                               \
  } while (0)

enum class BoundSide : std::uint8_t { None = 0, Lower = 1, Upper = 2 };

/// Componentwise box [lower, upper]. Entries may be -inf/+inf for coordinates
/// that are unconstrained on that side.
struct Bounds {
  Vector lower;
  Vector upper;

  Bounds() = default;
  Bounds(Vector l, Vector u) : lower(std::move(l)), upper(std::move(u)) {}

  static Bounds unbounded(Index n);

  Index dimension() const { return lower.size(); }

  /// Sizes match, no NaN entries, lower <= upper componentwise.
  bool valid() const;

  /// lower <= x <= upper componentwise. Comparisons are exact; the solver
  /// writes bound values bit-exactly when a coordinate is tight.
  bool contains(const Vector& x) const;
};

/// A set of coordinates pinned at a bound, each tagged with the side it is
/// pinned to. Stored as dense per-coordinate tags so membership is O(1).
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(Index n) : side_(static_cast<std::size_t>(n), BoundSide::None) {}

  Index dimension() const { return static_cast<Index>(side_.size()); }
  Index size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(Index i) const { return side_.at(static_cast<std::size_t>(i)) != BoundSide::None; }
  BoundSide side(Index i) const { return side_.at(static_cast<std::size_t>(i)); }

  /// Adds i with the given tag (side != None). Re-inserting an existing member
  /// overwrites its tag.
  void insert(Index i, BoundSide side);

  /// Set union. On a conflicting tag the tag already in *this wins; callers
  /// build both operands from the same point, so conflicts do not arise there.
  void merge(const ActiveSet& other);

  bool subset_of(const ActiveSet& other) const;

  /// Members in increasing index order.
  std::vector<Index> indices() const;

  /// FNV-1a over (index, tag) pairs; equal sets hash equally.
  std::uint64_t hash() const;

  friend bool operator==(const ActiveSet& a, const ActiveSet& b) {
    return a.side_ == b.side_;
  }

 private:
  std::vector<BoundSide> side_;
  Index count_ = 0;
};

}  // namespace nqn
