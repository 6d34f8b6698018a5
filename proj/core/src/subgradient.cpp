// SPDX-License-Identifier: Apache-2.0
#include "nqn/subgradient.hpp"

#include "nqn/box.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <vector>

namespace nqn {

GradientHistory::GradientHistory(Index n, Index capacity) : n_(n), capacity_(capacity) {
  NQN_CHECK(n >= 1, "GradientHistory: dimension must be positive");
  NQN_CHECK(capacity >= 1, "GradientHistory: capacity must be positive");
}

void GradientHistory::push(const Vector& x, const Vector& g) {
  NQN_CHECK(x.size() == n_ && g.size() == n_, "GradientHistory::push: dimension mismatch");
  if (static_cast<Index>(entries_.size()) == capacity_) entries_.pop_front();
  entries_.emplace_back(x, g);
}

namespace {

// Affine subproblem: minimize (1/2) mu^T Q_SS mu subject to sum(mu) = 1,
// signs unconstrained. Solved through the KKT system; a rank-deficient
// system (affinely dependent bundle members) is handled by the
// least-squares path, which still returns a consistent solution.
Vector affine_weights(const Matrix& gram, const std::vector<Index>& support) {
  const Index sz = static_cast<Index>(support.size());
  Matrix kkt(sz + 1, sz + 1);
  for (Index a = 0; a < sz; ++a) {
    for (Index b = 0; b < sz; ++b) kkt(a, b) = gram(support[a], support[b]);
    kkt(a, sz) = 1.0;
    kkt(sz, a) = 1.0;
  }
  kkt(sz, sz) = 0.0;
  Vector rhs = Vector::Zero(sz + 1);
  rhs[sz] = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(sz);
}

double kkt_residual_of(const Matrix& gram, const Vector& lambda) {
  const Vector d = gram * lambda;
  const double nu = lambda.dot(d);
  double resid = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    resid = std::max(resid, nu - d[i]);                   // stationarity: d_i >= nu
    resid = std::max(resid, std::abs(lambda[i] * (d[i] - nu)));  // complementarity
  }
  return std::max(resid, 0.0);
}

}  // namespace

SimplexQpResult min_norm_simplex(const Matrix& gram, int max_iterations) {
  const Index l = gram.rows();
  NQN_CHECK(l >= 1 && gram.cols() == l, "min_norm_simplex: Gram matrix must be square");
  NQN_CHECK(gram.allFinite(), "min_norm_simplex: Gram matrix must be finite");
  const int cap = max_iterations >= 0 ? max_iterations
                                      : static_cast<int>(10 * l * l + 100);

  SimplexQpResult res;
  res.lambda = Vector::Zero(l);

  // Start from the vertex of smallest norm (lowest index on ties).
  Index start = 0;
  for (Index i = 1; i < l; ++i) {
    if (gram(i, i) < gram(start, start)) start = i;
  }
  res.lambda[start] = 1.0;
  std::vector<Index> support{start};

  const double scale = 1.0 + gram.cwiseAbs().maxCoeff();
  const double tol = 1e-13 * scale;

  bool optimal = false;
  int it = 0;
  while (it < cap) {
    ++it;
    const Vector d = gram * res.lambda;
    const double nu = res.lambda.dot(d);
    Index j = 0;
    for (Index i = 1; i < l; ++i) {
      if (d[i] < d[j]) j = i;
    }
    if (d[j] >= nu - tol) {
      optimal = true;
      break;
    }
    if (std::find(support.begin(), support.end(), j) != support.end()) {
      // The most violating vertex is already in the support: the affine
      // solve cannot improve further, so we are at numerical optimality.
      optimal = true;
      break;
    }
    support.push_back(j);

    // Minor cycle: pull the weights toward the affine minimizer over the
    // support, dropping members whose weight hits zero.
    while (it < cap) {
      const Vector mu = affine_weights(gram, support);
      double mu_min = mu.minCoeff();
      if (mu_min > -1e-12) {
        Vector next = Vector::Zero(l);
        for (std::size_t a = 0; a < support.size(); ++a) {
          next[support[a]] = std::max(mu[static_cast<Index>(a)], 0.0);
        }
        next /= next.sum();
        res.lambda = next;
        break;
      }
      ++it;
      // Largest feasible step from lambda toward mu.
      double beta = 1.0;
      for (std::size_t a = 0; a < support.size(); ++a) {
        const double lam = res.lambda[support[a]];
        const double m = mu[static_cast<Index>(a)];
        if (m < lam) {
          const double step = lam / (lam - m);
          beta = std::min(beta, step);
        }
      }
      Vector next = Vector::Zero(l);
      for (std::size_t a = 0; a < support.size(); ++a) {
        const double v = (1.0 - beta) * res.lambda[support[a]] + beta * mu[static_cast<Index>(a)];
        next[support[a]] = std::max(v, 0.0);
      }
      next /= next.sum();
      res.lambda = next;
      std::vector<Index> kept;
      for (Index i : support) {
        if (res.lambda[i] > 0.0) kept.push_back(i);
      }
      if (kept.empty()) kept.push_back(support.front());
      support = std::move(kept);
    }
  }

  res.lambda /= res.lambda.sum();
  res.iterations = it;
  res.converged = optimal;
  res.kkt_residual = kkt_residual_of(gram, res.lambda);
  return res;
}

MinNormResult min_norm_combination(const GradientHistory& history, int max_iterations) {
  const Index l = history.size();
  NQN_CHECK(l >= 1, "min_norm_combination: empty history");
  MinNormResult out;
  if (l == 1) {
    out.combination = history.gradient(0);
    out.lambda = Vector::Ones(1);
    return out;
  }

  Matrix g(history.dimension(), l);
  for (Index i = 0; i < l; ++i) g.col(i) = history.gradient(i);
  const Matrix gram = g.transpose() * g;

  const SimplexQpResult qp = min_norm_simplex(gram, max_iterations);
  out.lambda = qp.lambda;
  out.combination = g * qp.lambda;
  out.kkt_residual = qp.kkt_residual;
  out.converged = qp.converged;
  return out;
}

ActiveSet predict_active_set(const Vector& x, const Vector& g, const Vector& g_tilde,
                             const Bounds& b) {
  ActiveSet predicted = binding_set(x, g_tilde, b);
  predicted.merge(binding_set(x, g, b));
  return predicted;
}

}  // namespace nqn
