// SPDX-License-Identifier: Apache-2.0
#include "nqn/problems.hpp"

#include "nqn/box.hpp"
#include "nqn/rng.hpp"
#include "nqn/types.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace nqn;

namespace {

// Evaluates problem `name` at a fixed point and returns (f, g).
double eval(const std::string& name, const Vector& x, Vector& g) {
  const ProblemInstance p = make_instance(name, x.size());
  return p.evaluate(x, g);
}

}  // namespace

TEST_CASE("catalog names are alphabetical and constructible") {
  const auto& names = problem_names();
  REQUIRE(names.size() == 12);
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const auto& name : names) {
    const ProblemInstance p = make_instance(name, 6);
    CHECK(p.name == name);
    CHECK(p.dim == 6);
    CHECK(p.bounds.valid());
    CHECK(p.x_star_uncon.size() == 6);
    CHECK(static_cast<bool>(p.evaluate));
    CHECK(static_cast<bool>(p.kink_gap));
  }
  CHECK_THROWS_AS(make_instance("No_Such_Problem", 4), std::invalid_argument);
  CHECK_THROWS_AS(make_instance("L1", 1), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_instance("l1", 4),
                       doctest::Contains("valid names"), std::invalid_argument);
}

TEST_CASE("frozen values: separable norms") {
  Vector g(4);
  CHECK(eval("L1", Vector{{1.0, -2.0, 3.0, -4.0}}, g) == 10.0);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == -1.0);
  CHECK(g[3] == -1.0);
  // sign(0) = +1 at the kink.
  CHECK(eval("L1", Vector::Zero(4), g) == 0.0);
  CHECK((g.array() == 1.0).all());

  CHECK(eval("L2", Vector{{3.0, 4.0, 0.0, 0.0}}, g) == 5.0);
  CHECK(g[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(eval("L2", Vector::Zero(4), g) == 0.0);
  CHECK(g[0] == 1.0);  // fixed unit subgradient at the origin
  CHECK(g[1] == 0.0);
}

TEST_CASE("frozen values: max-type terms break ties at the lowest index") {
  Vector g(2);
  // MAXQ with x_1^2 = x_2^2: the first coordinate wins.
  CHECK(eval("MAXQ", Vector{{2.0, -2.0}}, g) == 4.0);
  CHECK(g[0] == 4.0);
  CHECK(g[1] == 0.0);
  CHECK(eval("MAXQ", Vector{{1.0, -3.0}}, g) == 9.0);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == -6.0);

  // Nesterov piecewise-linear chain: terms |x_1|, |x_1 - x_2|, |x_2 - x_3|.
  Vector g3(3);
  CHECK(eval("Nesterov_3", Vector{{1.0, 3.0, 0.0}}, g3) == 3.0);
  CHECK(g3[0] == 0.0);
  CHECK(g3[1] == 1.0);
  CHECK(g3[2] == -1.0);
  // Three-way tie: the |x_1| term wins.
  CHECK(eval("Nesterov_3", Vector{{2.0, 0.0, 2.0}}, g3) == 2.0);
  CHECK(g3[0] == 1.0);
  CHECK(g3[1] == 0.0);

  // Active faces: a coordinate term tied with the sum term wins.
  CHECK(eval("Active_Faces", Vector{{2.0, 0.0}}, g) == doctest::Approx(std::log(3.0)));
  CHECK(g[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g[1] == 0.0);
  // Sum term strictly largest: constant gradient with the sum's sign.
  CHECK(eval("Active_Faces", Vector{{1.0, 1.0}}, g) == doctest::Approx(std::log(3.0)));
  CHECK(g[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(eval("Active_Faces", Vector{{1.0, -3.0}}, g) == doctest::Approx(std::log(4.0)));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == -0.25);
}

TEST_CASE("frozen values: Hilbert image norms") {
  Vector g(2);
  // Image of (1, 0) is (1, 1/2); its largest entry sits at row 0.
  CHECK(eval("MAXHILB", Vector{{1.0, 0.0}}, g) == 1.0);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 0.5);

  CHECK(eval("L1HILB", Vector{{1.0, 0.0}}, g) == 1.5);
  CHECK(g[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("frozen values: chained max terms") {
  Vector g(2);
  CHECK(eval("Chained_LQ", Vector{{1.0, 1.0}}, g) == -1.0);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 1.0);
  CHECK(eval("Chained_LQ", Vector{{0.5, 0.5}}, g) == -1.0);
  CHECK(g[0] == -1.0);
  // On the circle the tie picks the linear branch.
  CHECK(eval("Chained_LQ", Vector{{1.0, 0.0}}, g) == -1.0);
  CHECK(g[0] == -1.0);
  CHECK(g[1] == -1.0);

  CHECK(eval("Chained_CB3_1", Vector{{2.0, 2.0}}, g) == 20.0);
  CHECK(g[0] == 32.0);
  CHECK(g[1] == 4.0);
  CHECK(eval("Chained_CB3_1", Vector{{0.0, 0.0}}, g) == 8.0);
  CHECK(g[0] == -4.0);
  CHECK(g[1] == -4.0);
  // At (1, 1) all three branches equal 2; the quartic branch wins.
  CHECK(eval("Chained_CB3_1", Vector{{1.0, 1.0}}, g) == 2.0);
  CHECK(g[0] == 4.0);
  CHECK(g[1] == 2.0);
}

TEST_CASE("frozen values: myopic chains and the exponential-brown term") {
  Vector g(4);
  // Decoupled pairs (1,2) and (3,5): terms 2.44 and 14.25.
  CHECK(eval("Myopic_Decoupled", Vector{{1.0, 2.0, 3.0, 5.0}}, g) ==
        doctest::Approx(16.69).epsilon(1e-15));
  CHECK(g[0] == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(1.24).epsilon(1e-15));
  CHECK(g[2] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(g[3] == doctest::Approx(1.7).epsilon(1e-15));

  Vector g3(3);
  CHECK(eval("Myopic_Coupled", Vector{{1.0, 2.0, 3.0}}, g3) ==
        doctest::Approx(8.73).epsilon(1e-15));
  CHECK(g3[0] == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(g3[1] == doctest::Approx(4.84).epsilon(1e-15));
  CHECK(g3[2] == doctest::Approx(1.46).epsilon(1e-15));

  Vector g2(2);
  // Exponents a = x_2^2 + 1 = 5 and b = x_1^2 + 1 = 2:
  // f = 1^5 + 2^2, g = (5 + 8 ln 2, 4).
  CHECK(eval("Nonsmooth_Brown", Vector{{1.0, 2.0}}, g2) == 5.0);
  CHECK(g2[0] == doctest::Approx(5.0 + 8.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(g2[1] == 4.0);
  CHECK(eval("Nonsmooth_Brown", Vector::Zero(2), g2) == 0.0);
  CHECK(g2[0] == 1.0);  // plus-branch subgradient of |x|^1 at zero
  CHECK(g2[1] == 1.0);
}

TEST_CASE("default box: odd coordinates wide, even coordinates exclude the minimizer") {
  const Bounds b = make_bounds(Vector::Zero(5));
  for (Index i = 0; i < 5; ++i) {
    if ((i + 1) % 2 == 0) {
      CHECK(b.lower[i] == -5.5);
      CHECK(b.upper[i] == -0.5);
    } else {
      CHECK(b.lower[i] == -100.0);
      CHECK(b.upper[i] == 100.0);
    }
  }
  // The box is placed relative to the unconstrained minimizer.
  const ProblemInstance cb = make_instance("Chained_CB3_1", 4);
  CHECK((cb.x_star_uncon.array() == 1.0).all());
  CHECK(cb.bounds.lower[1] == -4.5);
  CHECK(cb.bounds.upper[1] == 0.5);
  CHECK_FALSE(cb.bounds.contains(cb.x_star_uncon));
  const ProblemInstance lq = make_instance("Chained_LQ", 4);
  CHECK(lq.x_star_uncon[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("starts are deterministic, feasible, and follow the midpoint rule") {
  const Bounds b = make_bounds(Vector::Zero(6));
  const Vector s1 = make_start(b, 42);
  const Vector s2 = make_start(b, 42);
  CHECK(nqn_test::max_abs_diff(s1, s2) == 0.0);
  CHECK(b.contains(s1));
  CHECK(nqn_test::max_abs_diff(s1, make_start(b, 43)) > 0.0);

  // Coordinate recomputation: midpoint plus the counter draw, projected.
  for (Index i = 0; i < 6; ++i) {
    const double mid = 0.5 * (b.lower[i] + b.upper[i]);
    const double raw = mid + uniform_at(42, static_cast<std::uint64_t>(i), -2.0, 2.0);
    const double expect = std::min(std::max(raw, b.lower[i]), b.upper[i]);
    CHECK(s1[i] == expect);
  }

  const auto starts = make_starts(b, StartSpec{7, 3});
  REQUIRE(starts.size() == 3);
  CHECK(nqn_test::max_abs_diff(starts[0], make_start(b, 7)) == 0.0);
  CHECK(nqn_test::max_abs_diff(starts[2], make_start(b, 9)) == 0.0);
}

TEST_CASE("optimal-value hints are feasible-value lower bounds") {
  // Independent feasibility oracle: no sampled feasible point may undercut a
  // closed-form hint. 200 random points per problem.
  for (const auto& name : problem_names()) {
    const ProblemInstance p = make_instance(name, 10);
    if (!p.f_star_hint) continue;
    Vector g(10);
    for (std::uint64_t s = 1; s <= 200; ++s) {
      const Vector x = nqn_test::random_feasible_point(p.bounds, s * 977);
      REQUIRE(p.bounds.contains(x));
      CHECK(p.evaluate(x, g) >= *p.f_star_hint - 1e-12);
    }
  }
}

TEST_CASE("hints are attained by the known constrained minimizers") {
  // Myopic pairs at (-0.45, -0.5): each term contributes exactly 0.3.
  const ProblemInstance dec = make_instance("Myopic_Decoupled", 6);
  REQUIRE(dec.f_star_hint);
  CHECK(*dec.f_star_hint == doctest::Approx(0.9).epsilon(1e-15));
  Vector x(6), g(6);
  for (Index i = 0; i < 6; i += 2) {
    x[i] = -0.45;
    x[i + 1] = -0.5;
  }
  REQUIRE(dec.bounds.contains(x));
  CHECK(dec.evaluate(x, g) == doctest::Approx(0.9).epsilon(1e-14));

  // MAXQ at even coordinates -0.5, odd coordinates 0.
  const ProblemInstance mq = make_instance("MAXQ", 6);
  REQUIRE(mq.f_star_hint);
  x.setZero();
  for (Index i = 1; i < 6; i += 2) x[i] = -0.5;
  REQUIRE(mq.bounds.contains(x));
  CHECK(mq.evaluate(x, g) == *mq.f_star_hint);

  // Active faces balances the forced even coordinates with free odd ones.
  const ProblemInstance af = make_instance("Active_Faces", 6);
  REQUIRE(af.f_star_hint);
  for (Index i = 0; i < 6; i += 2) {
    x[i] = 0.5;
    x[i + 1] = -0.5;
  }
  REQUIRE(af.bounds.contains(x));
  CHECK(af.evaluate(x, g) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
}

TEST_CASE("kink gaps measure the distance to the nearest gradient tie") {
  const ProblemInstance p = make_instance("L1", 3);
  CHECK(p.kink_gap(Vector{{0.5, -2.0, 1.0}}) == 0.5);
  CHECK(p.kink_gap(Vector{{0.0, -2.0, 1.0}}) == 0.0);
  const ProblemInstance mq = make_instance("MAXQ", 3);
  CHECK(mq.kink_gap(Vector{{2.0, 1.0, 0.0}}) == 3.0);  // top two squares 4 and 1
  CHECK(mq.kink_gap(Vector{{2.0, -2.0, 0.0}}) == 0.0);
}

TEST_CASE("hand-coded gradients agree with central differences") {
  for (const auto& name : problem_names()) {
    const ProblemInstance p = make_instance(name, 10);
    double worst = 0.0;
    for (std::uint64_t idx = 0; idx < 3; ++idx) {
      const Vector x = fd_sample_point(p, 3, idx);
      const FdReport rep = fd_check(p, x, 1e-5);
      worst = std::max(worst, rep.max_rel_error);
    }
    INFO("problem ", name);
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("fd_check nudges off gradient ties and reports it") {
  const ProblemInstance p = make_instance("L1", 4);
  Vector x{{0.0, -2.0, 1.0, 3.0}};  // exactly on the kink in coordinate 0
  const FdReport rep = fd_check(p, x, 1e-5);
  CHECK(rep.resampled);
  CHECK(rep.max_rel_error <= 1e-6);
  CHECK(nqn_test::max_abs_diff(rep.point, x) > 0.0);
}
