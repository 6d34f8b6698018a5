// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nqn/solver.hpp"
#include "nqn/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nqn {

/// Cartesian benchmark description: every problem x dimension x start seed x
/// variant combination is one run. Serialized as a "key = value" text file.
struct RunMatrixSpec {
  std::vector<std::string> problems;
  std::vector<Index> dims;
  std::vector<std::uint64_t> seeds;
  std::vector<Variant> variants;
  std::vector<double> epsilons;     // accuracy levels, first one drives the CSV flag
  double budget_multiplier = 100.0;  // gradient budget = multiplier * n
  std::string output_dir = "nqn_out";
  bool record_wall_time = false;  // off by default so outputs are byte-stable

  bool operator==(const RunMatrixSpec&) const = default;
};

/// Full suite at n=100, seeds 1..10, all variants.
RunMatrixSpec default_matrix();

/// Parses overrides on top of default_matrix(). Unknown keys, malformed
/// values, unknown problem or variant names throw std::invalid_argument.
RunMatrixSpec parse_run_spec(const std::string& text);
std::string render_run_spec(const RunMatrixSpec& spec);

struct RunResult {
  std::string problem;
  Index dim = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::V1;
  Termination termination = Termination::BudgetExhausted;
  double best_f = 0.0;
  std::int64_t grad_evals = 0;
  double wall_time = 0.0;
  std::vector<double> f_history;          // accepted iterates, start first
  std::vector<std::int64_t> evals_at;     // cumulative evals when each entry was produced
  std::int64_t contract_violations = 0;
  std::int64_t correction_round_violations = 0;
  std::int64_t qp_fallbacks = 0;
};

/// Runs every combination in canonical order (problem, dim, seed, variant).
/// `jobs` threads share the task list; results keep canonical order
/// regardless of scheduling.
std::vector<RunResult> run_matrix(const RunMatrixSpec& spec, int jobs = 1,
                                  bool validate_steps = false);

struct InstanceKey {
  std::string problem;
  Index dim = 0;
  std::uint64_t seed = 0;

  friend bool operator<(const InstanceKey& a, const InstanceKey& b) {
    if (a.problem != b.problem) return a.problem < b.problem;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.seed < b.seed;
  }
};

/// Reference value per instance: the smallest best_f any participating
/// variant reached.
std::map<InstanceKey, double> instance_f_star(const std::vector<RunResult>& results);

enum class Flag : std::uint8_t { Ok, Max, Other };

/// A run is Ok when some iterate k satisfies f_k - f_star < eps * (f_0 - f_star),
/// regardless of how it terminated. Otherwise Max on an exhausted budget,
/// Other for everything else.
Flag classify(const RunResult& r, double f_star, double eps);

/// Cumulative gradient evaluations at the first iterate meeting the accuracy
/// test, or -1 when no iterate does.
std::int64_t evals_to_reach(const RunResult& r, double f_star, double eps);

struct ProfileData {
  double eps = 0.0;
  Index instance_count = 0;                // denominator, unsolved included
  std::vector<Variant> variants;
  std::vector<std::vector<double>> ratios;  // per variant: sorted cost ratios, solved runs only
};

ProfileData build_profile(const std::vector<RunResult>& results, double eps);

std::string profile_svg(const ProfileData& data);

/// Writes results.csv, summary.txt, one profile SVG per epsilon, and the
/// round-trippable run_spec.txt into spec.output_dir.
void emit_outputs(const std::vector<RunResult>& results, const RunMatrixSpec& spec);

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
const char* termination_name(Termination t);
const char* flag_name(Flag f);

}  // namespace nqn
