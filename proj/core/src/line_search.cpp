// SPDX-License-Identifier: Apache-2.0
#include "nqn/line_search.hpp"

#include "nqn/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nqn {

double max_breakpoint(const Vector& x, const Vector& p, const Bounds& b) {
  NQN_CHECK(b.valid(), "max_breakpoint: invalid bounds");
  NQN_CHECK(x.size() == b.dimension() && p.size() == x.size(),
            "max_breakpoint: dimension mismatch");
  NQN_CHECK(b.contains(x), "max_breakpoint: x not feasible");
  const double inf = std::numeric_limits<double>::infinity();
  double u = -inf;
  for (Index i = 0; i < x.size(); ++i) {
    double gamma = inf;
    if (p[i] > 0.0 && x[i] != b.upper[i]) {
      gamma = (b.upper[i] - x[i]) / p[i];
    } else if (p[i] < 0.0 && x[i] != b.lower[i]) {
      gamma = (x[i] - b.lower[i]) / (-p[i]);
    }
    u = std::max(u, gamma);
  }
  return u;
}

LineSearchOutcome modified_wolfe(const Vector& x, double f0, const Vector& g0,
                                 const Vector& p, const Bounds& b, const Oracle& oracle,
                                 const LineSearchConfig& cfg) {
  NQN_CHECK(cfg.valid(), "modified_wolfe: invalid config");
  NQN_CHECK(b.valid(), "modified_wolfe: invalid bounds");
  NQN_CHECK(x.size() == b.dimension() && p.size() == x.size() && g0.size() == x.size(),
            "modified_wolfe: dimension mismatch");
  NQN_CHECK(b.contains(x), "modified_wolfe: x not feasible");
  NQN_CHECK(std::isfinite(f0), "modified_wolfe: f0 not finite");

  LineSearchOutcome out;
  const Vector pbar = t_operator(x, p, b);
  if (pbar.isZero(0.0)) {
    out.status = LineSearchStatus::NoDirection;
    return out;
  }

  const double gamma_max = max_breakpoint(x, p, b);
  const double d0 = g0.dot(pbar);  // directional derivative along the clipped ray

  double lo = 0.0;
  double hi = gamma_max;
  double alpha = std::min(1.0, hi);

  // Cache of the best decrease-satisfying trial, reported on DecreaseOnly.
  bool have_lo = false;
  Vector x_lo, g_lo;
  double f_lo = 0.0;

  Vector g_t(x.size());
  for (int trial = 0; trial < cfg.max_trials; ++trial) {
    Vector x_t = project(x + alpha * pbar, b);
    const double f_t = oracle(x_t, g_t);
    ++out.trial_count;

    if (!(f_t <= f0 + alpha * cfg.c1 * d0)) {
      hi = alpha;  // insufficient decrease (or non-finite f): shrink from above
    } else if (g_t.dot(t_operator(x_t, p, b)) >= cfg.c2 * d0) {
      out.status = LineSearchStatus::WolfeStep;
      out.alpha = alpha;
      out.x_new = std::move(x_t);
      out.f_new = f_t;
      out.g_new = g_t;
      return out;
    } else {
      lo = alpha;  // decrease holds, curvature does not: grow from below
      have_lo = true;
      x_lo = std::move(x_t);
      f_lo = f_t;
      g_lo = g_t;
    }

    alpha = (hi < gamma_max) ? 0.5 * (hi + lo) : std::min(2.0 * lo, hi);

    if (hi - lo < cfg.eps_abs + cfg.eps_rel * lo) {
      if (lo > 0.0 && have_lo) {
        out.status = LineSearchStatus::DecreaseOnly;
        out.alpha = lo;
        out.x_new = std::move(x_lo);
        out.f_new = f_lo;
        out.g_new = std::move(g_lo);
        return out;
      }
      out.status = LineSearchStatus::SearchError;
      return out;
    }
  }
  out.status = LineSearchStatus::SearchError;
  return out;
}

}  // namespace nqn
