// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// recompute derived quantities along routes the library never takes (dense
// materialization plus a dense factorization, exhaustive simplex grids), so
// agreement between the two is evidence rather than tautology.

#include "nqn/box.hpp"
#include "nqn/lbfgs.hpp"
#include "nqn/line_search.hpp"
#include "nqn/rng.hpp"
#include "nqn/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace nqn_test {

using nqn::ActiveSet;
using nqn::Bounds;
using nqn::BoundSide;
using nqn::Index;
using nqn::LbfgsMemory;
using nqn::Matrix;
using nqn::Vector;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double max_abs_diff(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Two-variable kinked model used across the suites:
///   f(x) = |x1 - x2| + (1/2)(x1 + 0.1 x2)^2,  x1 <= -1/2.
/// The constrained minimizer is (-1/2, -1/2); the kink line x1 = x2 passes
/// through it, and the sign(0) = +1 tie-break picks the plus branch there.
/// Both branch gradients at the minimizer, their shortest convex combination,
/// and its weights are known in closed form, which makes this the frozen
/// fixture for the smoothing and prediction tests.
struct Kinked2d {
  Bounds bounds{Vector{{-kInf, -kInf}}, Vector{{-0.5, kInf}}};

  double evaluate(const Vector& x, Vector& g) const {
    const double d = x[0] - x[1];
    const double sg = d >= 0.0 ? 1.0 : -1.0;
    const double u = x[0] + 0.1 * x[1];
    g.resize(2);
    g[0] = sg + u;
    g[1] = -sg + 0.1 * u;
    return std::abs(d) + 0.5 * u * u;
  }

  nqn::Oracle oracle() const {
    return [this](const Vector& x, Vector& g) { return evaluate(x, g); };
  }

  // f at the constrained minimizer (-1/2, -1/2): (1/2) * 0.55^2.
  static constexpr double f_star = 0.15125;
};

/// Dense-route restricted solve: materialize the full model (n <= 64 per the
/// oracle contract), cut out the free block, factor it densely, and embed the
/// solution with zeros on the active coordinates.
inline Vector dense_subspace_oracle(const LbfgsMemory& mem, const Vector& g,
                                    const ActiveSet& active) {
  const Index n = mem.dimension();
  const Matrix b = mem.dense_materialize();
  std::vector<Index> free_idx;
  for (Index i = 0; i < n; ++i)
    if (!active.contains(i)) free_idx.push_back(i);
  const Index nf = static_cast<Index>(free_idx.size());
  Vector p = Vector::Zero(n);
  if (nf == 0) return p;
  Matrix bff(nf, nf);
  Vector gf(nf);
  for (Index r = 0; r < nf; ++r) {
    gf[r] = g[free_idx[static_cast<std::size_t>(r)]];
    for (Index c = 0; c < nf; ++c)
      bff(r, c) = b(free_idx[static_cast<std::size_t>(r)], free_idx[static_cast<std::size_t>(c)]);
  }
  const Vector pf = bff.llt().solve(-gf);
  for (Index r = 0; r < nf; ++r) p[free_idx[static_cast<std::size_t>(r)]] = pf[r];
  return p;
}

struct GridQpResult {
  double value = 0.0;
  Vector lambda;
};

/// Exhaustive minimizer of (1/2) t^T Q t over the unit simplex by walking a
/// regular barycentric grid with the given weight step. Only sizes 1 to 3 are
/// supported; larger grids would be too slow to be useful as an oracle.
inline GridQpResult brute_force_simplex(const Matrix& q, double step) {
  const Index l = q.rows();
  auto value_at = [&](const Vector& t) { return 0.5 * t.dot(q * t); };
  GridQpResult best;
  best.value = kInf;
  auto consider = [&](const Vector& t) {
    const double v = value_at(t);
    if (v < best.value) {
      best.value = v;
      best.lambda = t;
    }
  };
  if (l == 1) {
    consider(Vector::Ones(1));
    return best;
  }
  const int cells = static_cast<int>(std::lround(1.0 / step));
  if (l == 2) {
    for (int i = 0; i <= cells; ++i) {
      const double a = static_cast<double>(i) / cells;
      consider(Vector{{a, 1.0 - a}});
    }
    return best;
  }
  NQN_CHECK(l == 3, "brute_force_simplex: only sizes 1 to 3 are supported");
  for (int i = 0; i <= cells; ++i) {
    for (int j = 0; j <= cells - i; ++j) {
      const double a = static_cast<double>(i) / cells;
      const double b = static_cast<double>(j) / cells;
      consider(Vector{{a, b, 1.0 - a - b}});
    }
  }
  return best;
}

/// Random Gram matrix of `l` bundle members drawn from R^d, entries in
/// [-1, 1). Positive semidefinite by construction.
inline Matrix random_gram(Index l, Index d, std::uint64_t seed) {
  Matrix basis(d, l);
  std::uint64_t ctr = 0;
  for (Index j = 0; j < l; ++j)
    for (Index i = 0; i < d; ++i)
      basis(i, j) = nqn::uniform_at(seed, ctr++, -1.0, 1.0);
  return basis.transpose() * basis;
}

/// Well-conditioned random curvature pairs: s has entries in [-1, 1) and
/// y = s + (1/4) r, redrawn until the pair clears the curvature filter with a
/// wide margin. Every stored pair therefore keeps the model positive definite
/// and the subspace factorization far from its pivot floor.
inline LbfgsMemory random_memory(Index n, Index m, Index pairs, std::uint64_t seed,
                                 double theta = 1.0) {
  LbfgsMemory mem(n, m);
  mem.set_theta(theta);
  std::uint64_t ctr = 0;
  for (Index j = 0; j < pairs; ++j) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vector s(n), r(n);
      for (Index i = 0; i < n; ++i) s[i] = nqn::uniform_at(seed, ctr++, -1.0, 1.0);
      for (Index i = 0; i < n; ++i) r[i] = nqn::uniform_at(seed, ctr++, -1.0, 1.0);
      const Vector y = s + 0.25 * r;
      if (s.dot(y) > 0.1 * s.norm() * y.norm() && mem.update(s, y, 1e-8)) break;
    }
  }
  return mem;
}

struct BoxedState {
  Bounds bounds;
  Vector x;
  Vector g;
};

/// Random box with a mix of two-sided, one-sided, unbounded, and pinned
/// coordinates. x sits exactly on a bound for roughly half of the bounded
/// coordinates (bit-exact placement, so tightness tests fire), and the
/// gradient carries occasional exact zeros to exercise the non-strict
/// binding comparisons.
inline BoxedState random_boxed_state(Index n, std::uint64_t seed) {
  BoxedState st;
  st.bounds.lower = Vector::Constant(n, -kInf);
  st.bounds.upper = Vector::Constant(n, kInf);
  st.x = Vector::Zero(n);
  st.g = Vector::Zero(n);
  std::uint64_t ctr = 0;
  auto draw = [&](double lo, double hi) { return nqn::uniform_at(seed, ctr++, lo, hi); };
  for (Index i = 0; i < n; ++i) {
    const std::uint64_t kind = nqn::splitmix64_at(seed, ctr++) % 8;
    const double a = draw(-5.0, 5.0);
    const double w = draw(0.5, 4.0);
    switch (kind) {
      case 0:  // unbounded
        st.x[i] = a;
        break;
      case 1:  // two-sided, at the lower bound
        st.bounds.lower[i] = a;
        st.bounds.upper[i] = a + w;
        st.x[i] = st.bounds.lower[i];
        break;
      case 2:  // two-sided, at the upper bound
        st.bounds.lower[i] = a;
        st.bounds.upper[i] = a + w;
        st.x[i] = st.bounds.upper[i];
        break;
      case 3:  // pinned
        st.bounds.lower[i] = a;
        st.bounds.upper[i] = a;
        st.x[i] = a;
        break;
      case 4:  // two-sided, interior
        st.bounds.lower[i] = a;
        st.bounds.upper[i] = a + w;
        st.x[i] = a + 0.5 * w;
        break;
      case 5:  // lower-sided, at the bound
        st.bounds.lower[i] = a;
        st.x[i] = a;
        break;
      case 6:  // upper-sided, at the bound
        st.bounds.upper[i] = a;
        st.x[i] = a;
        break;
      default:  // lower-sided, interior
        st.bounds.lower[i] = a;
        st.x[i] = a + w;
        break;
    }
    const double gv = draw(-3.0, 3.0);
    st.g[i] = (nqn::splitmix64_at(seed, ctr++) % 8 == 0) ? 0.0 : gv;
  }
  return st;
}

/// Random feasible point of a box, for feasibility-based value checks.
inline Vector random_feasible_point(const Bounds& b, std::uint64_t seed) {
  const Index n = b.dimension();
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double l = b.lower[i];
    const double u = b.upper[i];
    const double t = nqn::uniform01_at(seed, static_cast<std::uint64_t>(i));
    if (std::isfinite(l) && std::isfinite(u)) {
      x[i] = l + t * (u - l);
    } else if (std::isfinite(l)) {
      x[i] = l + 10.0 * t;
    } else if (std::isfinite(u)) {
      x[i] = u - 10.0 * t;
    } else {
      x[i] = 20.0 * t - 10.0;
    }
  }
  return x;
}

}  // namespace nqn_test
