#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hpgame/belief.hpp"
#include "hpgame/game_core.hpp"
#include "hpgame/net_model.hpp"
#include "hpgame/rng.hpp"
#include "hpgame/stackelberg.hpp"

namespace hpgame {

enum class DefenderPolicy { Stackelberg, Greedy, Random };
enum class InterceptionMode { Persistent, Terminal };

std::string policy_name(DefenderPolicy p);
DefenderPolicy policy_from_name(const std::string& name);

struct TypeSpec {
  std::string id;
  Skill skill = Skill::High;
  NodeId target = 0;
};

struct AttackerSpec {
  std::string name;
  int true_type = 0;  // index into the type space
};

struct NetworkSource {
  enum class Kind { File, Generated, Inline };
  Kind kind = Kind::File;
  std::string path;          // File
  GenerationSpec generation;  // Generated
  std::shared_ptr<Network> inline_net;  // Inline (tests, sweeps with overrides)
};

struct ScenarioConfig {
  NetworkSource network;
  std::map<std::string, std::vector<std::string>> skill_exploits;  // label -> exploit ids
  std::vector<TypeSpec> type_space;
  std::vector<AttackerSpec> attackers;
  std::vector<std::vector<double>> priors;  // per attacker over type space; empty -> uniform
  int budget = 3;
  double honeypot_cost = 3.0;
  int paths_per_attacker = 10;
  int max_rounds = 5;
  DefenderPolicy policy = DefenderPolicy::Stackelberg;
  InterceptionMode interception = InterceptionMode::Persistent;
  std::uint64_t seed = 1;
  double viability_factor = 2.0;  // candidate pool keeps nodes with V > factor * C_h
  int candidate_cap = 16;
  int threads = 1;

  void validate() const;  // structural checks that do not need the network
};

enum class AttackerOutcome { Intercepted, ReachedTarget, Abstained, Inactive };

std::string outcome_name(AttackerOutcome o);

struct MixedSummary {
  std::size_t support = 0;
  double expected_placements = 0.0;
  // full support listed only when small enough to log
  std::vector<std::pair<std::vector<NodeId>, double>> entries;
};

struct RoundRecord {
  int round = 0;
  std::vector<Observation> observations;            // consumed by this round's update
  std::vector<std::vector<double>> posteriors;      // per attacker, after update
  std::vector<bool> degenerate_flags;
  MixedSummary mixed;
  double expected_defender_utility = 0.0;  // E_x*[R_d(x*, a*)] from the solve
  double expected_honeypots = 0.0;
  std::vector<NodeId> realized_placement;
  std::vector<AttackerOutcome> outcomes;
  std::vector<NodeId> interception_nodes;  // -1 where not intercepted
  std::vector<int> chosen_actions;         // realized action index; -1 if inactive
  double realized_defender_utility = 0.0;  // Eq.-(4)-style accounting on realized play
  std::vector<double> realized_attacker_utilities;
  double success_rate = 0.0;
  int active_attackers = 0;
  double payoff_build_seconds = 0.0;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;
};

struct SimulationResult {
  std::vector<RoundRecord> rounds;
  double cumulative_expected_utility = 0.0;
  double cumulative_realized_utility = 0.0;
  std::string termination;  // "max-rounds" or "all-terminal"
};

struct ResolveOutcome {
  bool intercepted = false;
  NodeId node = -1;
  std::size_t node_index = 0;  // position in path.nodes when intercepted
};

/// Interception happens at the first non-entry path node carrying a honeypot.
ResolveOutcome resolve_path(const AttackPath& path, const std::vector<NodeId>& placement);

/// Top-B candidates by node value, ties to the smaller node id.
DefenderPureStrategy greedy_placement(const std::vector<double>& values,
                                      const std::vector<NodeId>& candidates, int budget);

/// Uniform random subset of exactly min(B, |candidates|) nodes.
DefenderPureStrategy random_placement(const std::vector<NodeId>& candidates, int budget, Rng& rng);

/// Owns all per-scenario state: network, per-type attack graphs and path
/// lists, payoff slices, beliefs, and activity flags. Rounds are sequential;
/// round 0 is observation-only (no honeypots are fielded before the first
/// solve).
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);

  const Network& network() const { return net_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<NodeId>& candidate_pool() const { return pool_; }
  const BeliefState& belief() const { return belief_; }
  bool any_active() const;
  int round_index() const { return round_; }
  std::size_t strategy_count() const { return strategies_.size(); }
  std::size_t joint_profile_count() const {
    std::size_t n = 1;
    for (const auto& lst : action_lists_) n *= lst.size();
    return n;
  }

  RoundRecord run_round();
  SimulationResult run();

  // exposed for experiment drivers
  EquilibriumSolution solve_current_equilibrium(double* payoff_seconds = nullptr,
                                                double* solve_seconds = nullptr);

 private:
  struct TypeState {
    AttackGraph graph;
    std::vector<AttackerAction> actions;  // K-best paths or a single abstain
  };

  void build_payoff_slices();
  PayoffTensor averaged_tensor() const;
  std::vector<double> joint_weights() const;
  int best_response(int attacker, const DefenderMixedStrategy& mixed) const;
  DefenderMixedStrategy committed_strategy(double* payoff_seconds, double* solve_seconds,
                                           EquilibriumSolution* solution);

  ScenarioConfig cfg_;
  Network net_;
  std::vector<double> values_;
  std::vector<TypeState> types_;
  std::vector<NodeId> pool_;
  std::vector<DefenderPureStrategy> strategies_;
  std::vector<std::vector<AttackerAction>> action_lists_;  // tensor shape, per attacker
  std::vector<std::size_t> live_joints_;   // joint type indices with nonzero prior
  std::vector<PayoffTensor> slices_;       // aligned with live_joints_
  bool slices_built_ = false;
  LikelihoodContext likelihood_ctx_;
  BeliefState belief_;
  std::vector<bool> active_;
  std::vector<Observation> pending_;
  Rng placement_rng_;
  int round_ = 0;
};

SimulationResult run_simulation(const ScenarioConfig& config);

// scenario config I/O (JSON); `base_dir` anchors relative network paths
ScenarioConfig scenario_from_json_text(const std::string& text, const std::string& base_dir);
ScenarioConfig load_scenario_file(const std::string& path);
std::string scenario_to_json_text(const ScenarioConfig& config);

}  // namespace hpgame
