#pragma once

#include <string>
#include <vector>

#include "hpgame/net_model.hpp"

namespace hpgame {

enum class Skill { High, Mid, Low };

std::string skill_name(Skill s);
Skill skill_from_name(const std::string& name);

/// One attacker type: an exploit capability set plus a target preference.
struct AttackerType {
  std::string id;
  std::uint64_t exploit_mask = 0;
  NodeId target = 0;
  Skill skill = Skill::High;
};

/// Set of honeypot placements, kept sorted for canonical ordering.
struct DefenderPureStrategy {
  std::vector<NodeId> placements;

  bool contains(NodeId v) const;
  bool operator==(const DefenderPureStrategy&) const = default;
};

struct DefenderMixedStrategy {
  std::vector<DefenderPureStrategy> strategies;
  std::vector<double> weights;  // aligned; non-negative, sums to 1 within 1e-9

  double expected_placements() const;
  void validate() const;
};

/// An attacker action: either a concrete attack path or abstention (used
/// only when a type has no feasible path to its target).
struct AttackerAction {
  bool abstain = false;
  AttackPath path;
};

/// Defender-strategy x joint-attacker-action grid of reward tuples for one
/// fixed assignment of attacker types.
struct PayoffTensor {
  std::vector<DefenderPureStrategy> defender_strategies;
  std::vector<std::vector<AttackerAction>> action_lists;  // one list per attacker
  // cells laid out with the defender index slowest, then attacker 0, 1, ...
  std::vector<double> defender_payoff;
  std::vector<std::vector<double>> attacker_payoff;  // [attacker][cell]

  int attacker_count() const { return static_cast<int>(action_lists.size()); }
  std::size_t joint_action_count() const;
  std::size_t cell_count() const { return defender_strategies.size() * joint_action_count(); }
  std::size_t cell_index(int def_idx, const std::vector<int>& actions) const;
  std::size_t profile_index(const std::vector<int>& actions) const;
  std::vector<int> profile_from_index(std::size_t profile) const;

  std::string to_csv() const;  // debugging export
};

/// All subsets of `candidates` with size <= budget, ordered by size then
/// lexicographically. The empty placement always comes first.
std::vector<DefenderPureStrategy> defender_pure_strategies(const std::vector<NodeId>& candidates,
                                                           int budget,
                                                           std::size_t enumeration_cap = 200000);

/// Eq.-style per-node accounting with interception truncation: walking each
/// path from the entry, the first placed node yields V(v) - C_h and stops that
/// attacker; every traversed unplaced node costs -V(v); honeypots no attacker
/// touches cost -C_h each.
double defender_reward(const DefenderPureStrategy& d, const std::vector<AttackerAction>& profile,
                       const std::vector<double>& values, NodeId entry, double honeypot_cost);

/// Capture at the first placed node on the path forfeits the exploit cost
/// spent through that edge; an uncaught attacker banks V(target) minus the
/// full path cost.
double attacker_reward(const DefenderPureStrategy& d, const AttackerAction& action,
                       const std::vector<double>& values, NodeId entry);

PayoffTensor build_payoff_tensor(const std::vector<DefenderPureStrategy>& defender_strategies,
                                 const std::vector<std::vector<AttackerAction>>& action_lists,
                                 const std::vector<double>& values, NodeId entry,
                                 double honeypot_cost, std::size_t cell_cap = 50'000'000);

/// Belief-weighted average of per-type tensors sharing action indexing.
/// slices[j] holds the tensor for joint type j; joint_weights[j] its posterior
/// probability (a product of per-attacker beliefs).
PayoffTensor expected_utilities(const std::vector<PayoffTensor>& slices,
                                const std::vector<double>& joint_weights);

}  // namespace hpgame
