// SPDX-License-Identifier: Apache-2.0
#include "nqn/harness.hpp"

#include "nqn/problems.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace nqn {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    NQN_CHECK(!item.empty(), "run spec: empty list element");
    out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  NQN_CHECK(res.ec == std::errc() && res.ptr == end,
            "run spec: bad number '" + token + "'");
  return v;
}

template <typename T>
T parse_integer(const std::string& token) {
  T v = 0;
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, v);
  NQN_CHECK(res.ec == std::errc() && res.ptr == end,
            "run spec: bad integer '" + token + "'");
  return v;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  NQN_CHECK(out.good(), "cannot open '" + path.string() + "' for writing");
  out << text;
  NQN_CHECK(out.good(), "write to '" + path.string() + "' failed");
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::V1: return "V1";
    case Variant::V2: return "V2";
    case Variant::V3: return "V3";
    case Variant::V4: return "V4";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  for (const Variant v : {Variant::V1, Variant::V2, Variant::V3, Variant::V4})
    if (name == variant_name(v)) return v;
  throw std::invalid_argument("nqn: unknown variant '" + name + "', expected V1..V4");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Stationary: return "stationary";
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::NoDirection: return "no_direction";
    case Termination::LineSearchError: return "line_search_error";
    case Termination::NumericalBreakdown: return "numerical_breakdown";
  }
  return "?";
}

const char* flag_name(Flag f) {
  switch (f) {
    case Flag::Ok: return "OK";
    case Flag::Max: return "MAX";
    case Flag::Other: return "OTHER";
  }
  return "?";
}

RunMatrixSpec default_matrix() {
  RunMatrixSpec spec;
  spec.problems = problem_names();
  spec.dims = {100};
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  spec.variants = {Variant::V1, Variant::V2, Variant::V3, Variant::V4};
  spec.epsilons = {1e-2, 1e-4, 1e-6};
  return spec;
}

RunMatrixSpec parse_run_spec(const std::string& text) {
  RunMatrixSpec spec = default_matrix();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    NQN_CHECK(eq != std::string::npos, "run spec: expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problems") {
      spec.problems = split_list(value);
      const auto known = problem_names();
      for (const auto& p : spec.problems)
        NQN_CHECK(std::find(known.begin(), known.end(), p) != known.end(),
                  "run spec: unknown problem '" + p + "'");
    } else if (key == "dims") {
      spec.dims.clear();
      for (const auto& tok : split_list(value)) {
        const auto d = parse_integer<long long>(tok);
        NQN_CHECK(d >= 2, "run spec: dims must be >= 2");
        spec.dims.push_back(static_cast<Index>(d));
      }
    } else if (key == "seeds") {
      spec.seeds.clear();
      for (const auto& tok : split_list(value))
        spec.seeds.push_back(parse_integer<std::uint64_t>(tok));
    } else if (key == "variants") {
      spec.variants.clear();
      for (const auto& tok : split_list(value)) spec.variants.push_back(variant_from_name(tok));
    } else if (key == "epsilons") {
      spec.epsilons.clear();
      for (const auto& tok : split_list(value)) {
        const double e = parse_double(tok);
        NQN_CHECK(e > 0.0 && std::isfinite(e), "run spec: epsilons must be positive");
        spec.epsilons.push_back(e);
      }
    } else if (key == "budget_multiplier") {
      spec.budget_multiplier = parse_double(value);
      NQN_CHECK(spec.budget_multiplier > 0.0, "run spec: budget_multiplier must be positive");
    } else if (key == "output_dir") {
      NQN_CHECK(!value.empty(), "run spec: output_dir must not be empty");
      spec.output_dir = value;
    } else if (key == "record_wall_time") {
      NQN_CHECK(value == "true" || value == "false",
                "run spec: record_wall_time must be true or false");
      spec.record_wall_time = value == "true";
    } else {
      throw std::invalid_argument("nqn: run spec: unknown key '" + key + "'");
    }
  }
  NQN_CHECK(!spec.problems.empty() && !spec.dims.empty() && !spec.seeds.empty() &&
                !spec.variants.empty() && !spec.epsilons.empty(),
            "run spec: empty list");
  return spec;
}

std::string render_run_spec(const RunMatrixSpec& spec) {
  std::ostringstream out;
  const auto join = [&out](const char* key, const auto& items, const auto& fmt) {
    out << key << " = ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out << ", ";
      out << fmt(items[i]);
    }
    out << "\n";
  };
  join("problems", spec.problems, [](const std::string& s) { return s; });
  join("dims", spec.dims, [](Index d) { return std::to_string(d); });
  join("seeds", spec.seeds, [](std::uint64_t s) { return std::to_string(s); });
  join("variants", spec.variants, [](Variant v) { return std::string(variant_name(v)); });
  join("epsilons", spec.epsilons, [](double e) { return fmt_double(e); });
  out << "budget_multiplier = " << fmt_double(spec.budget_multiplier) << "\n";
  out << "output_dir = " << spec.output_dir << "\n";
  out << "record_wall_time = " << (spec.record_wall_time ? "true" : "false") << "\n";
  return out.str();
}

std::vector<RunResult> run_matrix(const RunMatrixSpec& spec, int jobs, bool validate_steps) {
  struct Task {
    std::string problem;
    Index dim;
    std::uint64_t seed;
    Variant variant;
  };
  std::vector<Task> tasks;
  for (const auto& problem : spec.problems)
    for (const Index dim : spec.dims)
      for (const std::uint64_t seed : spec.seeds)
        for (const Variant variant : spec.variants)
          tasks.push_back({problem, dim, seed, variant});

  std::vector<RunResult> results(tasks.size());
  const auto run_one = [&](std::size_t i) {
    const Task& t = tasks[i];
    const ProblemInstance prob = make_instance(t.problem, t.dim);
    const Vector x0 = make_start(prob.bounds, t.seed);
    SolverConfig cfg;
    cfg.variant = t.variant;
    cfg.budget = static_cast<std::int64_t>(spec.budget_multiplier * static_cast<double>(t.dim));
    cfg.validate_steps = validate_steps;
    const RunRecord rec = nqn_solve(prob, x0, cfg);

    RunResult& r = results[i];
    r.problem = t.problem;
    r.dim = t.dim;
    r.seed = t.seed;
    r.variant = t.variant;
    r.termination = rec.termination;
    r.best_f = rec.best_f;
    r.grad_evals = rec.grad_evals;
    r.wall_time = rec.wall_time;
    r.f_history = rec.f_history;
    r.evals_at.reserve(rec.f_history.size());
    r.evals_at.push_back(1);
    for (std::size_t k = 1; k < rec.f_history.size(); ++k)
      r.evals_at.push_back(rec.iterations[k - 1].grad_evals);
    r.contract_violations = rec.contract_violations;
    r.correction_round_violations = rec.correction_round_violations;
    r.qp_fallbacks = rec.qp_fallbacks;
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          run_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return results;
}

std::map<InstanceKey, double> instance_f_star(const std::vector<RunResult>& results) {
  std::map<InstanceKey, double> out;
  for (const auto& r : results) {
    const InstanceKey key{r.problem, r.dim, r.seed};
    const auto it = out.find(key);
    if (it == out.end())
      out.emplace(key, r.best_f);
    else
      it->second = std::min(it->second, r.best_f);
  }
  return out;
}

Flag classify(const RunResult& r, double f_star, double eps) {
  if (evals_to_reach(r, f_star, eps) >= 0) return Flag::Ok;
  if (r.termination == Termination::BudgetExhausted) return Flag::Max;
  return Flag::Other;
}

std::int64_t evals_to_reach(const RunResult& r, double f_star, double eps) {
  NQN_CHECK(!r.f_history.empty() && r.f_history.size() == r.evals_at.size(),
            "run result has no history");
  const double target = eps * (r.f_history.front() - f_star);
  for (std::size_t k = 0; k < r.f_history.size(); ++k)
    if (r.f_history[k] - f_star < target) return r.evals_at[k];
  return -1;
}

ProfileData build_profile(const std::vector<RunResult>& results, double eps) {
  ProfileData data;
  data.eps = eps;
  const auto f_star = instance_f_star(results);

  std::vector<Variant> variants;
  for (const auto& r : results)
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
      variants.push_back(r.variant);
  std::sort(variants.begin(), variants.end());

  // cost per (instance, variant); infinity marks an unsolved run
  std::map<InstanceKey, std::vector<double>> cost;
  for (const auto& r : results) {
    const InstanceKey key{r.problem, r.dim, r.seed};
    auto& row = cost[key];
    row.resize(variants.size(), std::numeric_limits<double>::infinity());
    const auto slot = static_cast<std::size_t>(
        std::find(variants.begin(), variants.end(), r.variant) - variants.begin());
    const std::int64_t e = evals_to_reach(r, f_star.at(key), eps);
    if (e >= 0) row[slot] = static_cast<double>(e);
  }

  data.instance_count = static_cast<Index>(cost.size());
  data.variants = variants;
  data.ratios.resize(variants.size());
  for (const auto& [key, row] : cost) {
    const double best = *std::min_element(row.begin(), row.end());
    if (!std::isfinite(best)) continue;  // nobody solved it; stays in the denominator
    for (std::size_t s = 0; s < row.size(); ++s)
      if (std::isfinite(row[s])) data.ratios[s].push_back(row[s] / best);
  }
  for (auto& rs : data.ratios) std::sort(rs.begin(), rs.end());
  return data;
}

std::string profile_svg(const ProfileData& data) {
  constexpr double kWidth = 640, kHeight = 480;
  constexpr double kLeft = 60, kRight = 620, kTop = 30, kBottom = 440;
  static const char* kColors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a"};

  double xmax = 1.0;
  for (const auto& rs : data.ratios)
    if (!rs.empty()) xmax = std::max(xmax, std::log2(rs.back()));
  xmax = std::ceil(xmax);

  const auto px = [&](double logratio) {
    return kLeft + (kRight - kLeft) * (logratio / xmax);
  };
  const auto py = [&](double rho) { return kBottom - (kBottom - kTop) * rho; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"18\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">performance profile, eps = "
      << fmt_double(data.eps) << "</text>\n";

  for (double rho = 0.0; rho <= 1.0 + 1e-9; rho += 0.25) {
    const std::string y = fmt_fixed(py(rho), 1);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kRight << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt_fixed(py(rho) + 4, 1)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_fixed(rho, 2) << "</text>\n";
  }
  for (double t = 0.0; t <= xmax + 1e-9; t += 1.0) {
    const std::string x = fmt_fixed(px(t), 1);
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << kBottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_double(t) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 34
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << "log2(cost ratio)</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";

  const double denom = data.instance_count > 0 ? static_cast<double>(data.instance_count) : 1.0;
  for (std::size_t s = 0; s < data.variants.size(); ++s) {
    const auto& rs = data.ratios[s];
    const char* color = kColors[s % 4];
    std::ostringstream pts;
    double rho = 0.0;
    std::size_t i = 0;
    pts << fmt_fixed(px(0.0), 1) << "," << fmt_fixed(py(0.0), 1);
    double at = 0.0;
    while (i < rs.size()) {
      const double r = std::log2(rs[i]);
      std::size_t j = i;
      while (j < rs.size() && rs[j] == rs[i]) ++j;
      const double rho_new = static_cast<double>(j) / denom;
      if (r > at) {
        pts << " " << fmt_fixed(px(r), 1) << "," << fmt_fixed(py(rho), 1);
        at = r;
      }
      pts << " " << fmt_fixed(px(at), 1) << "," << fmt_fixed(py(rho_new), 1);
      rho = rho_new;
      i = j;
    }
    pts << " " << fmt_fixed(px(xmax), 1) << "," << fmt_fixed(py(rho), 1);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << pts.str() << "\"/>\n";
    const double ly = kTop + 18 + 16 * static_cast<double>(s);
    svg << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << fmt_fixed(ly - 4, 1) << "\" x2=\""
        << kLeft + 36 << "\" y2=\"" << fmt_fixed(ly - 4, 1) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + 42 << "\" y=\"" << fmt_fixed(ly, 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << variant_name(data.variants[s])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_outputs(const std::vector<RunResult>& results, const RunMatrixSpec& spec) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.output_dir);
  fs::create_directories(dir);

  const auto f_star = instance_f_star(results);
  const double flag_eps = spec.epsilons.front();

  std::ostringstream csv;
  csv << "problem,n,start_seed,variant,flag,grad_evals,best_f,wall_time\n";
  for (const auto& r : results) {
    const Flag flag = classify(r, f_star.at({r.problem, r.dim, r.seed}), flag_eps);
    const double wt = spec.record_wall_time ? r.wall_time : 0.0;
    csv << r.problem << "," << r.dim << "," << r.seed << "," << variant_name(r.variant) << ","
        << flag_name(flag) << "," << r.grad_evals << "," << fmt_double(r.best_f) << ","
        << fmt_fixed(wt, 3) << "\n";
  }
  write_text_file(dir / "results.csv", csv.str());

  std::ostringstream summary;
  summary << "runs: " << results.size() << "\n";
  summary << "instances: " << f_star.size() << "\n";
  std::vector<Variant> variants;
  for (const auto& r : results)
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
      variants.push_back(r.variant);
  std::sort(variants.begin(), variants.end());
  for (const double eps : spec.epsilons) {
    summary << "epsilon " << fmt_double(eps) << "\n";
    for (const Variant v : variants) {
      std::int64_t ok = 0, max = 0, other = 0;
      std::map<std::string, std::int64_t> other_kinds;
      std::int64_t total = 0;
      for (const auto& r : results) {
        if (r.variant != v) continue;
        ++total;
        switch (classify(r, f_star.at({r.problem, r.dim, r.seed}), eps)) {
          case Flag::Ok: ++ok; break;
          case Flag::Max: ++max; break;
          case Flag::Other:
            ++other;
            ++other_kinds[termination_name(r.termination)];
            break;
        }
      }
      summary << "  " << variant_name(v) << ": OK " << ok << "/" << total << ", MAX " << max
              << ", OTHER " << other;
      if (other > 0) {
        summary << " (";
        bool first = true;
        for (const auto& [kind, count] : other_kinds) {
          if (!first) summary << ", ";
          summary << kind << " " << count;
          first = false;
        }
        summary << ")";
      }
      summary << "\n";
    }
  }
  write_text_file(dir / "summary.txt", summary.str());

  for (const double eps : spec.epsilons) {
    const ProfileData data = build_profile(results, eps);
    write_text_file(dir / ("profile_eps_" + fmt_double(eps) + ".svg"), profile_svg(data));
  }

  write_text_file(dir / "run_spec.txt", render_run_spec(spec));
}

}  // namespace nqn
