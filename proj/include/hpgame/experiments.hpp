#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hpgame/sim.hpp"

namespace hpgame {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  void save(const std::string& path) const;
};

std::string format_metric(double v);

/// One spec drives all experiment kinds; unused grids stay empty.
struct ExperimentSpec {
  std::string kind;  // case-study | alpha-sweep | cost-sweep | baseline-compare | scalability
  NetworkSource network;
  std::map<std::string, std::vector<std::string>> skill_exploits;
  std::vector<double> alpha_grid;
  std::vector<double> cost_grid;
  std::vector<std::pair<NodeId, NodeId>> target_pairs;
  std::vector<int> budgets;
  std::vector<int> sizes;
  int replications = 1;
  std::uint64_t seed_base = 1;
  int budget = 3;
  double honeypot_cost = 3.0;
  int paths_per_attacker = 10;
  int max_rounds = 2;
  double viability_factor = 2.0;
  int candidate_cap = 16;
  int threads = 1;
  double timeout_seconds = 300.0;
};

ExperimentSpec experiment_from_json_text(const std::string& text, const std::string& base_dir);
ExperimentSpec load_experiment_file(const std::string& path);
std::string experiment_to_json_text(const ExperimentSpec& spec);

/// Round-1 equilibrium utility and expected honeypot count per (alpha,
/// target pair), averaged over replications.
ResultTable alpha_sweep(const ExperimentSpec& spec);

/// Per-pair plateau diagnostic over the mid-alpha band of an alpha_sweep
/// table (reported, not asserted).
ResultTable alpha_plateau_summary(const ResultTable& sweep);

/// Round-1 equilibrium utility per (C_h, target pair) with same-vs-different
/// target divergence columns.
ResultTable cost_sweep(const ExperimentSpec& spec);

/// Realized per-round defender utility for stackelberg/greedy/random on
/// identical generated networks and seeds.
ResultTable baseline_compare(const ExperimentSpec& spec);

struct ScalabilityOutput {
  ResultTable structure;  // deterministic accounting (sizes, pools, profiles)
  ResultTable timing;     // wall-clock medians; outside the determinism contract
};

ScalabilityOutput scalability(const ExperimentSpec& spec);

/// FNV-1a over a canonical text form, for run manifests.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace hpgame
