// SPDX-License-Identifier: Apache-2.0
#include "nqn/problems.hpp"

#include "nqn/box.hpp"
#include "nqn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nqn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Subgradient sign convention at kinks: sign(0) = +1.
double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

// --- Myopic pair term: |x_a - x_b| + (x_a + 0.1 x_b)^2 ------------------

double myopic_term(double xa, double xb, double& ga, double& gb) {
  const double t = xa - xb;
  const double u = xa + 0.1 * xb;
  const double sg = sign_plus(t);
  ga += sg + 2.0 * u;
  gb += -sg + 0.2 * u;
  return std::abs(t) + u * u;
}

ProblemInstance myopic_decoupled(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i + 1 < n; i += 2) f += myopic_term(x[i], x[i + 1], g[i], g[i + 1]);
    return f;
  };
  p.kink_gap = [n](const Vector& x) {
    double gap = kInf;
    for (Index i = 0; i + 1 < n; i += 2) gap = std::min(gap, std::abs(x[i] - x[i + 1]));
    return gap;
  };
  // Each decoupled pair attains 0.3 at (-0.45, -0.5) under the default box.
  p.f_star_hint = 0.3 * static_cast<double>(n / 2);
  return p;
}

ProblemInstance myopic_coupled(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i + 1 < n; ++i) f += myopic_term(x[i], x[i + 1], g[i], g[i + 1]);
    return f;
  };
  p.kink_gap = [n](const Vector& x) {
    double gap = kInf;
    for (Index i = 0; i + 1 < n; ++i) gap = std::min(gap, std::abs(x[i] - x[i + 1]));
    return gap;
  };
  return p;
}

// --- max{|x_1|, |x_{i-1} - x_i|} ----------------------------------------

ProblemInstance nesterov_3(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double best = std::abs(x[0]);
    Index win = 0;
    for (Index i = 1; i < n; ++i) {
      const double v = std::abs(x[i - 1] - x[i]);
      if (v > best) {
        best = v;
        win = i;
      }
    }
    if (win == 0) {
      g[0] = sign_plus(x[0]);
    } else {
      const double sg = sign_plus(x[win - 1] - x[win]);
      g[win - 1] = sg;
      g[win] = -sg;
    }
    return best;
  };
  p.kink_gap = [n](const Vector& x) {
    double top1 = -kInf, top2 = -kInf;
    for (Index i = 0; i < n; ++i) {
      const double v = (i == 0) ? std::abs(x[0]) : std::abs(x[i - 1] - x[i]);
      if (v > top1) {
        top2 = top1;
        top1 = v;
      } else {
        top2 = std::max(top2, v);
      }
    }
    return std::min(top1, top1 - top2);
  };
  p.f_star_hint = 0.25;  // |x_1| and the first difference cannot both be smaller
  return p;
}

// --- separable norms ----------------------------------------------------

ProblemInstance l1(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.resize(n);
    for (Index i = 0; i < n; ++i) g[i] = sign_plus(x[i]);
    return x.cwiseAbs().sum();
  };
  p.kink_gap = [](const Vector& x) { return x.cwiseAbs().minCoeff(); };
  p.f_star_hint = 0.5 * static_cast<double>(n / 2);
  return p;
}

ProblemInstance l2(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    const double f = x.norm();
    if (f == 0.0) {
      g.setZero(n);
      g[0] = 1.0;  // an arbitrary unit subgradient at the origin
    } else {
      g = x / f;
    }
    return f;
  };
  p.kink_gap = [](const Vector& x) { return x.norm(); };
  p.f_star_hint = std::sqrt(0.25 * static_cast<double>(n / 2));
  return p;
}

ProblemInstance maxq(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    Index win = 0;
    for (Index i = 1; i < n; ++i) {
      if (x[i] * x[i] > x[win] * x[win]) win = i;
    }
    g[win] = 2.0 * x[win];
    return x[win] * x[win];
  };
  p.kink_gap = [n](const Vector& x) {
    double top1 = -kInf, top2 = -kInf;
    for (Index i = 0; i < n; ++i) {
      const double v = x[i] * x[i];
      if (v > top1) {
        top2 = top1;
        top1 = v;
      } else {
        top2 = std::max(top2, v);
      }
    }
    return top1 - top2;
  };
  p.f_star_hint = 0.25;
  return p;
}

// --- Hilbert-matrix image norms -----------------------------------------

Vector hilbert_image(const Vector& x) {
  const Index n = x.size();
  Vector s(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) acc += x[j] / static_cast<double>(i + j + 1);
    s[i] = acc;
  }
  return s;
}

ProblemInstance maxhilb(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    const Vector s = hilbert_image(x);
    Index win = 0;
    for (Index i = 1; i < n; ++i) {
      if (std::abs(s[i]) > std::abs(s[win])) win = i;
    }
    const double sg = sign_plus(s[win]);
    g.resize(n);
    for (Index j = 0; j < n; ++j) g[j] = sg / static_cast<double>(win + j + 1);
    return std::abs(s[win]);
  };
  p.kink_gap = [](const Vector& x) {
    const Vector s = hilbert_image(x);
    double top1 = -kInf, top2 = -kInf;
    for (Index i = 0; i < s.size(); ++i) {
      const double v = std::abs(s[i]);
      if (v > top1) {
        top2 = top1;
        top1 = v;
      } else {
        top2 = std::max(top2, v);
      }
    }
    return std::min(top1, top1 - top2);
  };
  return p;
}

ProblemInstance l1hilb(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    const Vector s = hilbert_image(x);
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double sg = sign_plus(s[i]);
      f += std::abs(s[i]);
      for (Index j = 0; j < n; ++j) g[j] += sg / static_cast<double>(i + j + 1);
    }
    return f;
  };
  p.kink_gap = [](const Vector& x) { return hilbert_image(x).cwiseAbs().minCoeff(); };
  return p;
}

// --- chained max terms --------------------------------------------------

ProblemInstance chained_lq(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
      const double a = -x[i] - x[i + 1];
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1] - 1.0;
      if (q > 0.0) {  // second branch strictly larger; ties pick the first
        f += a + q;
        g[i] += -1.0 + 2.0 * x[i];
        g[i + 1] += -1.0 + 2.0 * x[i + 1];
      } else {
        f += a;
        g[i] += -1.0;
        g[i + 1] += -1.0;
      }
    }
    return f;
  };
  p.kink_gap = [n](const Vector& x) {
    double gap = kInf;
    for (Index i = 0; i + 1 < n; ++i) {
      gap = std::min(gap, std::abs(x[i] * x[i] + x[i + 1] * x[i + 1] - 1.0));
    }
    return gap;
  };
  p.x_star_uncon = Vector::Constant(n, 1.0 / std::sqrt(2.0));
  return p;
}

ProblemInstance chained_cb3_1(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
      const double t1 = std::pow(x[i], 4) + x[i + 1] * x[i + 1];
      const double t2 = (2.0 - x[i]) * (2.0 - x[i]) + (2.0 - x[i + 1]) * (2.0 - x[i + 1]);
      const double t3 = 2.0 * std::exp(x[i + 1] - x[i]);
      if (t1 >= t2 && t1 >= t3) {
        f += t1;
        g[i] += 4.0 * x[i] * x[i] * x[i];
        g[i + 1] += 2.0 * x[i + 1];
      } else if (t2 >= t3) {
        f += t2;
        g[i] += -2.0 * (2.0 - x[i]);
        g[i + 1] += -2.0 * (2.0 - x[i + 1]);
      } else {
        f += t3;
        g[i] += -t3;
        g[i + 1] += t3;
      }
    }
    return f;
  };
  p.kink_gap = [n](const Vector& x) {
    double gap = kInf;
    for (Index i = 0; i + 1 < n; ++i) {
      const double t1 = std::pow(x[i], 4) + x[i + 1] * x[i + 1];
      const double t2 = (2.0 - x[i]) * (2.0 - x[i]) + (2.0 - x[i + 1]) * (2.0 - x[i + 1]);
      const double t3 = 2.0 * std::exp(x[i + 1] - x[i]);
      double top1 = std::max({t1, t2, t3});
      double top2 = std::min({std::max(t1, t2), std::max(t1, t3), std::max(t2, t3)});
      gap = std::min(gap, top1 - top2);
    }
    return gap;
  };
  p.x_star_uncon = Vector::Constant(n, 1.0);
  return p;
}

// --- nonsmooth Brown ----------------------------------------------------

ProblemInstance nonsmooth_brown(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    g.setZero(n);
    double f = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
      const double a = x[i + 1] * x[i + 1] + 1.0;  // exponent on |x_i|
      const double b = x[i] * x[i] + 1.0;          // exponent on |x_{i+1}|
      const double xi = std::abs(x[i]);
      const double xj = std::abs(x[i + 1]);
      f += std::pow(xi, a) + std::pow(xj, b);
      g[i] += a * std::pow(xi, a - 1.0) * sign_plus(x[i]);
      g[i + 1] += b * std::pow(xj, b - 1.0) * sign_plus(x[i + 1]);
      // d/dx of the exponent: |.|^e * ln|.|; the limit at |.| = 0 is zero.
      if (xj > 0.0) g[i] += std::pow(xj, b) * std::log(xj) * 2.0 * x[i];
      if (xi > 0.0) g[i + 1] += std::pow(xi, a) * std::log(xi) * 2.0 * x[i + 1];
    }
    return f;
  };
  p.kink_gap = [](const Vector& x) { return x.cwiseAbs().minCoeff(); };
  return p;
}

// --- active faces: max{ln(|x_i| + 1), ln(|sum| + 1)} --------------------

ProblemInstance active_faces(Index n) {
  ProblemInstance p;
  p.evaluate = [n](const Vector& x, Vector& g) {
    const double s = x.sum();
    double best = std::log(std::abs(s) + 1.0);
    Index win = n;  // index n stands for the sum term
    for (Index i = 0; i < n; ++i) {
      const double v = std::log(std::abs(x[i]) + 1.0);
      if (v > best || (v == best && i < win)) {
        best = v;
        win = i;
      }
    }
    g.setZero(n);
    if (win < n) {
      g[win] = sign_plus(x[win]) / (std::abs(x[win]) + 1.0);
    } else {
      const double c = -sign_plus(-s) / (std::abs(s) + 1.0);
      g.setConstant(c);
    }
    return best;
  };
  p.kink_gap = [n](const Vector& x) {
    const double s = x.sum();
    double top1 = -kInf, top2 = -kInf, arg_win = std::abs(s);
    for (Index i = 0; i <= n; ++i) {
      const double arg = (i < n) ? std::abs(x[i]) : std::abs(s);
      const double v = std::log(arg + 1.0);
      if (v > top1) {
        top2 = top1;
        top1 = v;
        arg_win = arg;
      } else {
        top2 = std::max(top2, v);
      }
    }
    return std::min(arg_win, top1 - top2);
  };
  p.f_star_hint = std::log(1.5);
  return p;
}

ProblemInstance build(const std::string& name, Index n) {
  if (name == "Active_Faces") return active_faces(n);
  if (name == "Chained_CB3_1") return chained_cb3_1(n);
  if (name == "Chained_LQ") return chained_lq(n);
  if (name == "L1") return l1(n);
  if (name == "L1HILB") return l1hilb(n);
  if (name == "L2") return l2(n);
  if (name == "MAXHILB") return maxhilb(n);
  if (name == "MAXQ") return maxq(n);
  if (name == "Myopic_Coupled") return myopic_coupled(n);
  if (name == "Myopic_Decoupled") return myopic_decoupled(n);
  if (name == "Nesterov_3") return nesterov_3(n);
  if (name == "Nonsmooth_Brown") return nonsmooth_brown(n);
  std::string msg = "unknown problem '" + name + "'; valid names:";
  for (const auto& p : problem_names()) msg += " " + p;
  throw std::invalid_argument("nqn: " + msg);
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "Active_Faces",  "Chained_CB3_1", "Chained_LQ",      "L1",
      "L1HILB",        "L2",            "MAXHILB",         "MAXQ",
      "Myopic_Coupled", "Myopic_Decoupled", "Nesterov_3", "Nonsmooth_Brown",
  };
  return names;
}

ProblemInstance make_instance(const std::string& name, Index n) {
  NQN_CHECK(n >= 2, "make_instance: dimension must be at least 2");
  ProblemInstance p = build(name, n);
  p.name = name;
  p.dim = n;
  if (p.x_star_uncon.size() == 0) p.x_star_uncon = Vector::Zero(n);
  p.bounds = make_bounds(p.x_star_uncon);
  return p;
}

Bounds make_bounds(const Vector& x_star_uncon) {
  const Index n = x_star_uncon.size();
  NQN_CHECK(n >= 1, "make_bounds: empty reference point");
  Vector lower(n), upper(n);
  for (Index i = 0; i < n; ++i) {
    if ((i + 1) % 2 == 0) {  // even coordinate, counting from one
      lower[i] = x_star_uncon[i] - 5.5;
      upper[i] = x_star_uncon[i] - 0.5;
    } else {
      lower[i] = -100.0;
      upper[i] = 100.0;
    }
  }
  return Bounds(std::move(lower), std::move(upper));
}

Vector make_start(const Bounds& b, std::uint64_t seed) {
  NQN_CHECK(b.valid(), "make_start: invalid bounds");
  const Index n = b.dimension();
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    double mid = 0.5 * (b.lower[i] + b.upper[i]);
    if (!std::isfinite(mid)) mid = 0.0;
    x[i] = mid + uniform_at(seed, static_cast<std::uint64_t>(i), -2.0, 2.0);
  }
  return project(x, b);
}

std::vector<Vector> make_starts(const Bounds& b, const StartSpec& spec) {
  NQN_CHECK(spec.count >= 1, "make_starts: count must be positive");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    out.push_back(make_start(b, spec.seed + static_cast<std::uint64_t>(i)));
  }
  return out;
}

FdReport fd_check(const ProblemInstance& prob, const Vector& x, double h) {
  NQN_CHECK(static_cast<Index>(x.size()) == prob.dim, "fd_check: dimension mismatch");
  NQN_CHECK(h > 0.0, "fd_check: step must be positive");

  FdReport rep;
  rep.point = x;
  // Nudge off gradient ties; the perturbation is deterministic in the
  // attempt number so reports are reproducible.
  if (prob.kink_gap) {
    for (std::uint64_t attempt = 0; attempt < 32 && prob.kink_gap(rep.point) < 1e-7;
         ++attempt) {
      rep.resampled = true;
      for (Index i = 0; i < rep.point.size(); ++i) {
        const double off = uniform_at(0x5eedf00d + attempt, static_cast<std::uint64_t>(i),
                                      -0.05, 0.05);
        rep.point[i] = x[i] + off * (1.0 + std::abs(x[i]));
      }
    }
  }

  Vector g(prob.dim), scratch(prob.dim);
  prob.evaluate(rep.point, g);
  Vector xp = rep.point;
  for (Index i = 0; i < prob.dim; ++i) {
    const double hi = h * (1.0 + std::abs(rep.point[i]));
    xp[i] = rep.point[i] + hi;
    const double fp = prob.evaluate(xp, scratch);
    xp[i] = rep.point[i] - hi;
    const double fm = prob.evaluate(xp, scratch);
    xp[i] = rep.point[i];
    const double fd = (fp - fm) / (2.0 * hi);
    const double err = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
    rep.max_rel_error = std::max(rep.max_rel_error, err);
  }
  return rep;
}

Vector fd_sample_point(const ProblemInstance& prob, std::uint64_t seed, std::uint64_t index) {
  const Index n = prob.dim;
  Vector x(n), g(n);
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t base = (index * 64 + attempt) * static_cast<std::uint64_t>(n);
    for (Index i = 0; i < n; ++i)
      x[i] = uniform_at(seed, base + static_cast<std::uint64_t>(i), -1.0, 1.0);
    prob.evaluate(x, g);
    const double margin = 1e-3 * (1.0 + g.lpNorm<Eigen::Infinity>());
    if (!prob.kink_gap || prob.kink_gap(x) >= margin) break;
  }
  return x;
}

}  // namespace nqn
