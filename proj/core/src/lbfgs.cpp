// SPDX-License-Identifier: Apache-2.0
#include "nqn/lbfgs.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace nqn {

namespace {

constexpr double kPivotFloor = 1e-12;

// Cholesky with an explicit elimination-pivot floor. Eigen's LLT reports
// NumericalIssue only on outright failure; near-singular pivots must also be
// rejected so a garbage direction never reaches the line search.
bool llt_with_pivot_check(const Matrix& a, Eigen::LLT<Matrix>& llt) {
  llt.compute(a);
  if (llt.info() != Eigen::Success) return false;
  const auto& l = llt.matrixLLT();
  for (Index i = 0; i < a.rows(); ++i) {
    const double pivot = l(i, i) * l(i, i);
    if (!(pivot >= kPivotFloor)) return false;
  }
  return true;
}

}  // namespace

double theta_init(const Vector& g) {
  NQN_CHECK(g.size() > 0, "theta_init: empty gradient");
  const double scale = g.cwiseAbs().maxCoeff();
  NQN_CHECK(std::isfinite(scale), "theta_init: gradient not finite");
  return std::max(1.0, std::min(scale, 1e8));
}

LbfgsMemory::LbfgsMemory(Index n, Index m) : n_(n), m_(m) {
  NQN_CHECK(n >= 1, "LbfgsMemory: dimension must be positive");
  NQN_CHECK(m >= 1, "LbfgsMemory: capacity must be positive");
  s_.setZero(n_, m_);
  y_.setZero(n_, m_);
  ss_.setZero(m_, m_);
  sy_.setZero(m_, m_);
  yy_.setZero(m_, m_);
}

void LbfgsMemory::set_theta(double theta) {
  NQN_CHECK(theta >= 1.0 && theta <= 1e8, "set_theta: theta outside [1, 1e8]");
  theta_ = theta;
}

void LbfgsMemory::clear() { k_ = 0; }

bool LbfgsMemory::update(const Vector& s, const Vector& y, double eps_skip) {
  NQN_CHECK(s.size() == n_ && y.size() == n_, "update: pair dimension mismatch");
  NQN_CHECK(eps_skip >= 0.0, "update: eps_skip must be nonnegative");
  const double sty = s.dot(y);
  const double gate = eps_skip * s.norm() * y.norm();
  if (!std::isfinite(sty) || !(sty > gate) || !(sty > 0.0)) {
    ++skips_;
    return false;
  }

  if (k_ == m_) {
    // Evict the oldest pair: shift columns left and Gram blocks up-left.
    const Index k = m_ - 1;
    s_.leftCols(k) = s_.rightCols(k).eval();
    y_.leftCols(k) = y_.rightCols(k).eval();
    ss_.topLeftCorner(k, k) = ss_.bottomRightCorner(k, k).eval();
    sy_.topLeftCorner(k, k) = sy_.bottomRightCorner(k, k).eval();
    yy_.topLeftCorner(k, k) = yy_.bottomRightCorner(k, k).eval();
    k_ = k;
  }

  const Index k = k_;
  s_.col(k) = s;
  y_.col(k) = y;
  // New Gram row/column against all stored pairs including the new one.
  const Vector sts = s_.leftCols(k + 1).transpose() * s;
  const Vector yty = y_.leftCols(k + 1).transpose() * y;
  const Vector sty_col = s_.leftCols(k + 1).transpose() * y;  // S^T y_new
  const Vector yts_col = y_.leftCols(k + 1).transpose() * s;  // Y^T s_new
  ss_.col(k).head(k + 1) = sts;
  ss_.row(k).head(k + 1) = sts.transpose();
  yy_.col(k).head(k + 1) = yty;
  yy_.row(k).head(k + 1) = yty.transpose();
  sy_.col(k).head(k + 1) = sty_col;
  sy_.row(k).head(k + 1) = yts_col.transpose();  // s_new^T Y
  sy_(k, k) = sty;
  ++k_;
  return true;
}

SubspaceSolveReport LbfgsMemory::subspace_solve(const Vector& g, const ActiveSet& active) const {
  NQN_CHECK(g.size() == n_, "subspace_solve: gradient dimension mismatch");
  NQN_CHECK(active.dimension() == n_, "subspace_solve: active set dimension mismatch");

  SubspaceSolveReport rep;
  rep.direction = Vector::Zero(n_);
  rep.free_dimension = n_ - active.size();
  if (rep.free_dimension == 0) return rep;

  const Index k = k_;
  // Gradient masked to the free coordinates; the active block of the
  // direction stays zero throughout.
  Vector gm = g;
  std::vector<Index> act;
  act.reserve(static_cast<std::size_t>(active.size()));
  for (Index i = 0; i < n_; ++i) {
    if (active.contains(i)) {
      gm[i] = 0.0;
      act.push_back(i);
    }
  }

  if (k == 0) {
    for (Index i = 0; i < n_; ++i) rep.direction[i] = -gm[i] / theta_;
    rep.flop_estimate = static_cast<double>(n_);
    return rep;
  }

  const auto s = s_.leftCols(k);
  const auto y = y_.leftCols(k);
  const Index t = static_cast<Index>(act.size());

  // Gram blocks of the active rows only; free-row Grams follow by
  // subtraction from the cached full Grams.
  Matrix ass = Matrix::Zero(k, k);  // S_A^T S_A
  Matrix asy = Matrix::Zero(k, k);  // S_A^T Y_A
  Matrix ayy = Matrix::Zero(k, k);  // Y_A^T Y_A
  for (Index j : act) {
    const auto srow = s.row(j);
    const auto yrow = y.row(j);
    ass.noalias() += srow.transpose() * srow;
    asy.noalias() += srow.transpose() * yrow;
    ayy.noalias() += yrow.transpose() * yrow;
  }

  // K = Mi - W_F^T W_F / theta, blocked as [ -E  C ; C^T  G ] with
  //   E = D + Y_F^T Y_F / theta            (SPD),
  //   C = L^T - Y_F^T S_F,
  //   G = theta * S_A^T S_A               (PSD),
  // and Schur complement G + C^T E^{-1} C (SPD by inertia of K).
  const Matrix syk = sy_.topLeftCorner(k, k);
  Matrix lmat = syk;
  lmat.triangularView<Eigen::Upper>().setZero();  // keep the strictly lower triangle
  Matrix e = Matrix(syk.diagonal().asDiagonal()) + (yy_.topLeftCorner(k, k) - ayy) / theta_;
  Matrix c = lmat.transpose() - syk.transpose() + asy.transpose();

  Eigen::LLT<Matrix> e_llt;
  if (!llt_with_pivot_check(e, e_llt)) {
    rep.status = SolveStatus::Breakdown;
    return rep;
  }

  const Vector r1 = y.transpose() * gm;
  const Vector r2 = theta_ * (s.transpose() * gm);

  const Matrix einv_c = e_llt.solve(c);
  const Vector einv_r1 = e_llt.solve(r1);
  Matrix schur = theta_ * ass;
  schur.noalias() += c.transpose() * einv_c;

  Eigen::LLT<Matrix> schur_llt;
  if (!llt_with_pivot_check(schur, schur_llt)) {
    rep.status = SolveStatus::Breakdown;
    return rep;
  }

  const Vector z2 = schur_llt.solve(r2 + c.transpose() * einv_r1);
  const Vector z1 = einv_c * z2 - einv_r1;

  Vector wz = y * z1;
  wz.noalias() += theta_ * (s * z2);

  const double inv_theta = 1.0 / theta_;
  for (Index i = 0; i < n_; ++i) {
    rep.direction[i] = -(gm[i] * inv_theta + wz[i] * inv_theta * inv_theta);
  }
  for (Index j : act) rep.direction[j] = 0.0;

  const double dk = static_cast<double>(k);
  rep.flop_estimate = 6.0 * dk * dk * static_cast<double>(t) +
                      8.0 * dk * static_cast<double>(n_) +
                      16.0 * dk * dk * dk / 3.0;
  return rep;
}

Matrix LbfgsMemory::dense_materialize() const {
  NQN_CHECK(n_ <= 64, "dense_materialize: test oracle restricted to n <= 64");
  Matrix b = theta_ * Matrix::Identity(n_, n_);
  for (Index j = 0; j < k_; ++j) {
    const Vector s = s_.col(j);
    const Vector y = y_.col(j);
    const double sty = s.dot(y);
    NQN_CHECK(sty > 0.0, "dense_materialize: stored pair violates curvature");
    const Vector bs = b * s;
    const double stbs = s.dot(bs);
    NQN_CHECK(stbs > 0.0, "dense_materialize: model lost positive definiteness");
    b.noalias() -= (bs * bs.transpose()) / stbs;
    b.noalias() += (y * y.transpose()) / sty;
  }
  return b;
}

}  // namespace nqn
