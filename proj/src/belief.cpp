#include "hpgame/belief.hpp"

#include <cmath>

namespace hpgame {

void BeliefState::validate() const {
  for (const auto& vec : per_attacker) {
    double sum = 0.0;
    for (double p : vec) {
      if (p < 0.0) throw DomainError("negative belief entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("belief vector does not sum to 1");
  }
}

namespace {

bool edge_on_path(const AttackPath& path, NodeId from, NodeId to) {
  for (std::size_t i = 1; i < path.nodes.size(); ++i)
    if (path.nodes[i - 1] == from && path.nodes[i] == to) return true;
  return false;
}

}  // namespace

double likelihood(const Observation& obs, int type_index, const LikelihoodContext& ctx) {
  if (obs.kind == ObservationKind::NoActivity) return 1.0;
  if (obs.edge_from < 0 || obs.edge_to < 0) return 1.0;  // no edge evidence attached

  const TypeContext& tc = ctx.types[static_cast<std::size_t>(type_index)];
  // infeasible under the type's exploit set?
  bool feasible = false;
  for (const auto& e : ctx.net->edges) {
    if (e.from == obs.edge_from && e.to == obs.edge_to) {
      feasible = (e.exploits & tc.exploit_mask) != 0;
      break;
    }
  }
  if (!feasible) return 0.0;
  if (tc.optimal_path && edge_on_path(*tc.optimal_path, obs.edge_from, obs.edge_to)) return 1.0;
  return ctx.off_path_lambda;
}

BayesUpdateResult bayes_update(const BeliefState& belief, const Observation& obs,
                               const LikelihoodContext& ctx) {
  BayesUpdateResult result;
  result.state = belief;
  auto& vec = result.state.per_attacker[static_cast<std::size_t>(obs.attacker_index)];

  double mass = 0.0;
  std::vector<double> posterior(vec.size());
  for (std::size_t t = 0; t < vec.size(); ++t) {
    posterior[t] = vec[t] * likelihood(obs, static_cast<int>(t), ctx);
    mass += posterior[t];
  }
  if (mass <= 0.0) {
    // degenerate evidence: no type explains the observation; keep the prior
    result.degenerate = true;
    return result;
  }
  for (std::size_t t = 0; t < vec.size(); ++t) vec[t] = posterior[t] / mass;
  return result;
}

}  // namespace hpgame
