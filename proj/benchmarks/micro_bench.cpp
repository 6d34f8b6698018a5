// SPDX-License-Identifier: Apache-2.0
#include "nqn/box.hpp"
#include "nqn/correction.hpp"
#include "nqn/lbfgs.hpp"
#include "nqn/problems.hpp"
#include "nqn/rng.hpp"
#include "nqn/subgradient.hpp"

#include <benchmark/benchmark.h>

namespace {

using nqn::Index;
using nqn::Vector;

Vector random_vector(std::uint64_t seed, Index n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v[i] = nqn::uniform_at(seed, static_cast<std::uint64_t>(i), lo, hi);
  return v;
}

nqn::LbfgsMemory filled_memory(Index n, Index m, std::uint64_t seed) {
  nqn::LbfgsMemory mem(n, m);
  for (Index k = 0; k < m; ++k) {
    const Vector s = random_vector(seed + 2 * static_cast<std::uint64_t>(k), n);
    Vector y = s + 0.5 * random_vector(seed + 2 * static_cast<std::uint64_t>(k) + 1, n);
    if (s.dot(y) <= 0) y = 2.0 * s;
    mem.update(s, y, 1e-8);
  }
  return mem;
}

void BM_SubspaceSolve(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto m = static_cast<Index>(state.range(1));
  const Index active = n * state.range(2) / 100;
  const nqn::LbfgsMemory mem = filled_memory(n, m, 11);
  const Vector g = random_vector(99, n);
  nqn::ActiveSet a(n);
  for (Index i = 0; i < active; ++i) a.insert(i, nqn::BoundSide::Lower);
  for (auto _ : state) {
    auto rep = mem.subspace_solve(g, a);
    benchmark::DoNotOptimize(rep.direction.data());
  }
}
BENCHMARK(BM_SubspaceSolve)
    ->Args({100, 5, 0})
    ->Args({100, 20, 0})
    ->Args({100, 20, 50})
    ->Args({1000, 20, 50})
    ->Args({1000, 20, 90});

void BM_MinNormSimplex(benchmark::State& state) {
  const auto l = static_cast<Index>(state.range(0));
  const Index d = l + 5;
  nqn::Matrix basis(d, l);
  for (Index j = 0; j < l; ++j)
    basis.col(j) = random_vector(31 + static_cast<std::uint64_t>(j), d);
  const nqn::Matrix gram = basis.transpose() * basis;
  for (auto _ : state) {
    auto res = nqn::min_norm_simplex(gram);
    benchmark::DoNotOptimize(res.lambda.data());
  }
}
BENCHMARK(BM_MinNormSimplex)->Arg(5)->Arg(10)->Arg(20);

void BM_Correction(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  nqn::Bounds b;
  b.lower = Vector::Zero(n);
  b.upper = Vector::Ones(n);
  Vector x = Vector::Constant(n, 0.5);
  for (Index i = 0; i < n / 2; ++i) x[i] = 0.0;
  const Vector g = random_vector(55, n);
  const nqn::LbfgsMemory mem = filled_memory(n, 10, 77);
  const nqn::ActiveSet init = nqn::binding_set(x, g, b);
  for (auto _ : state) {
    auto out = nqn::correct(x, g, b, init, mem);
    benchmark::DoNotOptimize(out.direction.data());
  }
}
BENCHMARK(BM_Correction)->Arg(100)->Arg(1000);

void BM_Oracle(benchmark::State& state) {
  const auto names = nqn::problem_names();
  const auto& name = names[static_cast<std::size_t>(state.range(0))];
  const auto prob = nqn::make_instance(name, 200);
  const Vector x = nqn::make_start(prob.bounds, 3);
  Vector g(prob.dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prob.evaluate(x, g));
    benchmark::DoNotOptimize(g.data());
  }
  state.SetLabel(name);
}
BENCHMARK(BM_Oracle)->DenseRange(0, 11);

}  // namespace

BENCHMARK_MAIN();
