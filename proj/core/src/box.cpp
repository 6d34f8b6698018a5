// SPDX-License-Identifier: Apache-2.0
#include "nqn/box.hpp"

#include <algorithm>

namespace nqn {

namespace {

void check_pair(const Vector& x, const Bounds& b, const char* who) {
  NQN_CHECK(b.valid(), std::string(who) + ": invalid bounds");
  NQN_CHECK(x.size() == b.dimension(), std::string(who) + ": dimension mismatch");
}

}  // namespace

Vector project(const Vector& x, const Bounds& b) {
  check_pair(x, b, "project");
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    // min/max propagate the bound value exactly; infinities never win.
    out[i] = std::min(std::max(x[i], b.lower[i]), b.upper[i]);
  }
  return out;
}

Vector t_operator(const Vector& x, const Vector& p, const Bounds& b) {
  check_pair(x, b, "t_operator");
  NQN_CHECK(p.size() == x.size(), "t_operator: direction dimension mismatch");
  NQN_CHECK(b.contains(x), "t_operator: x not feasible");
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    // Both clamps apply when lower_i = upper_i: a pinned coordinate admits no
    // motion, so the component is zeroed in either direction.
    double v = p[i];
    if (x[i] == b.lower[i]) v = std::max(v, 0.0);
    if (x[i] == b.upper[i]) v = std::min(v, 0.0);
    out[i] = v;
  }
  return out;
}

ActiveSet binding_set(const Vector& x, const Vector& g, const Bounds& b) {
  check_pair(x, b, "binding_set");
  NQN_CHECK(g.size() == x.size(), "binding_set: gradient dimension mismatch");
  NQN_CHECK(b.contains(x), "binding_set: x not feasible");
  ActiveSet set(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == b.lower[i] && g[i] >= 0.0) {
      set.insert(i, BoundSide::Lower);
    } else if (x[i] == b.upper[i] && g[i] <= 0.0) {
      set.insert(i, BoundSide::Upper);
    }
  }
  return set;
}

ActiveSet tight_set(const Vector& x, const Bounds& b) {
  check_pair(x, b, "tight_set");
  NQN_CHECK(b.contains(x), "tight_set: x not feasible");
  ActiveSet set(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == b.lower[i]) {
      set.insert(i, BoundSide::Lower);
    } else if (x[i] == b.upper[i]) {
      set.insert(i, BoundSide::Upper);
    }
  }
  return set;
}

Vector stationarity_residual(const Vector& x, const Vector& g, const Bounds& b) {
  return t_operator(x, -g, b);
}

}  // namespace nqn
