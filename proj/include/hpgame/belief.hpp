#pragma once

#include <vector>

#include "hpgame/game_core.hpp"
#include "hpgame/net_model.hpp"

namespace hpgame {

enum class ObservationKind { EdgeTraversed, HoneypotTriggered, NoActivity };

struct Observation {
  int attacker_index = 0;
  ObservationKind kind = ObservationKind::NoActivity;
  NodeId edge_from = -1;  // edge payload (also set for honeypot triggers when known)
  NodeId edge_to = -1;
  NodeId node = -1;  // honeypot node payload
  int round = 0;
};

/// Per-attacker posteriors over the shared type space.
struct BeliefState {
  std::vector<std::vector<double>> per_attacker;

  void validate() const;
};

/// What the likelihood rule needs to know about one type: its feasible edges
/// and its cost-optimal path.
struct TypeContext {
  std::uint64_t exploit_mask = 0;
  const AttackPath* optimal_path = nullptr;  // null when the type has no path
};

struct LikelihoodContext {
  const Network* net = nullptr;
  std::vector<TypeContext> types;  // aligned with the type space
  double off_path_lambda = 0.5;
};

/// Three-level rule: 0 for an edge the type cannot traverse, 1 for an edge on
/// the type's optimal path, lambda otherwise; no-activity is uninformative.
double likelihood(const Observation& obs, int type_index, const LikelihoodContext& ctx);

struct BayesUpdateResult {
  BeliefState state;
  bool degenerate = false;  // all-zero likelihood mass: prior kept verbatim
};

BayesUpdateResult bayes_update(const BeliefState& belief, const Observation& obs,
                               const LikelihoodContext& ctx);

}  // namespace hpgame
