// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/types.hpp"

#include <cstdint>

namespace nqn {

/// Scale for the initial Hessian approximation theta*I:
/// clamp(||g||_inf, 1, 1e8). Recomputed from the current gradient at every
/// outer iteration.
double theta_init(const Vector& g);

enum class SolveStatus : std::uint8_t { Ok, Breakdown };

struct SubspaceSolveReport {
  Vector direction;            // full length; zero on active coordinates
  Index free_dimension = 0;
  double flop_estimate = 0.0;  // rough operation count, for inspection only
  SolveStatus status = SolveStatus::Ok;
};

/// Limited-memory BFGS model in compact form,
///
///   B = theta*I - W Mi^{-1} W^T,  W = [Y  theta*S],
///   Mi = [ -D   L^T          ]
///        [  L   theta*S^T S  ],
///
/// where S, Y hold the stored curvature pairs columnwise (oldest first),
/// D = diag(s_i^T y_i) and L is the strictly lower triangle of S^T Y.
/// The Gram blocks S^T S, S^T Y, Y^T Y are cached and refreshed in O(mn)
/// per update, so a solve restricted to an active set A costs
/// O(m^2 |A| + m n + m^3).
class LbfgsMemory {
 public:
  LbfgsMemory(Index n, Index m);

  Index dimension() const { return n_; }
  Index capacity() const { return m_; }
  Index size() const { return k_; }

  double theta() const { return theta_; }
  /// theta must lie in [1, 1e8]; see theta_init.
  void set_theta(double theta);

  std::int64_t skip_count() const { return skips_; }

  /// Stores the pair (s, y) if it passes the curvature filter
  ///   s^T y > eps_skip * ||s|| * ||y||   (and s^T y > 0),
  /// evicting the oldest pair at capacity. Returns false and records a skip
  /// otherwise; a skipped pair leaves the model bit-identical.
  bool update(const Vector& s, const Vector& y, double eps_skip);

  /// Drops every stored pair, falling back to the theta * I model. Counters
  /// and theta are kept. Used to recover when the pair set has degenerated
  /// so far that the subspace factorization fails.
  void clear();

  /// Solves B_FF p_F = -g_F on the free coordinates F (complement of
  /// `active`) through the Sherman-Morrison-Woodbury identity
  ///   B_FF^{-1} = (1/theta) I + (1/theta^2) W_F K^{-1} W_F^T,
  ///   K = Mi - (1/theta) W_F^T W_F,
  /// and returns the direction embedded in R^n with zeros on `active`.
  /// K is eliminated blockwise: the (1,1) block is -(D + Y_F^T Y_F / theta),
  /// symmetric negative definite, and its Schur complement is symmetric
  /// positive definite, so two Cholesky factorizations suffice. An
  /// elimination pivot below 1e-12 reports Breakdown (caller treats the
  /// direction as unusable).
  SubspaceSolveReport subspace_solve(const Vector& g, const ActiveSet& active) const;

  /// Dense n*n model built by applying the rank-two BFGS update to theta*I,
  /// oldest pair first. Test oracle; requires n <= 64.
  Matrix dense_materialize() const;

 private:
  Index n_ = 0;
  Index m_ = 0;
  Index k_ = 0;  // stored pairs, columns [0, k_) of s_/y_, newest last
  double theta_ = 1.0;
  std::int64_t skips_ = 0;
  Matrix s_, y_;         // n x m
  Matrix ss_, sy_, yy_;  // m x m Gram caches: S^T S, S^T Y, Y^T Y
};

}  // namespace nqn
