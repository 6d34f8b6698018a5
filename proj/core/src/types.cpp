// SPDX-License-Identifier: Apache-2.0
#include "nqn/types.hpp"

#include <cmath>
#include <limits>

namespace nqn {

Bounds Bounds::unbounded(Index n) {
  const double inf = std::numeric_limits<double>::infinity();
  return Bounds(Vector::Constant(n, -inf), Vector::Constant(n, inf));
}

bool Bounds::valid() const {
  if (lower.size() != upper.size()) return false;
  for (Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i])) return false;
    if (!(lower[i] <= upper[i])) return false;
  }
  return true;
}

bool Bounds::contains(const Vector& x) const {
  if (x.size() != lower.size()) return false;
  for (Index i = 0; i < x.size(); ++i) {
    if (!(lower[i] <= x[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

void ActiveSet::insert(Index i, BoundSide side) {
  NQN_CHECK(side != BoundSide::None, "ActiveSet::insert requires a bound tag");
  auto& slot = side_.at(static_cast<std::size_t>(i));
  if (slot == BoundSide::None) ++count_;
  slot = side;
}

void ActiveSet::merge(const ActiveSet& other) {
  NQN_CHECK(dimension() == other.dimension(), "ActiveSet::merge dimension mismatch");
  for (std::size_t i = 0; i < side_.size(); ++i) {
    if (side_[i] == BoundSide::None && other.side_[i] != BoundSide::None) {
      side_[i] = other.side_[i];
      ++count_;
    }
  }
}

bool ActiveSet::subset_of(const ActiveSet& other) const {
  if (dimension() != other.dimension()) return false;
  for (std::size_t i = 0; i < side_.size(); ++i) {
    if (side_[i] != BoundSide::None && other.side_[i] == BoundSide::None) return false;
  }
  return true;
}

std::vector<Index> ActiveSet::indices() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (std::size_t i = 0; i < side_.size(); ++i) {
    if (side_[i] != BoundSide::None) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::uint64_t ActiveSet::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (std::size_t i = 0; i < side_.size(); ++i) {
    if (side_[i] != BoundSide::None) {
      mix(static_cast<std::uint64_t>(i));
      mix(static_cast<std::uint64_t>(side_[i]));
    }
  }
  return h;
}

}  // namespace nqn
