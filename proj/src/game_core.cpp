#include "hpgame/game_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hpgame {

std::string skill_name(Skill s) {
  switch (s) {
    case Skill::High: return "high";
    case Skill::Mid: return "mid";
    case Skill::Low: return "low";
  }
  return "high";
}

Skill skill_from_name(const std::string& name) {
  if (name == "high") return Skill::High;
  if (name == "mid" || name == "medium") return Skill::Mid;
  if (name == "low") return Skill::Low;
  throw ConfigError("unknown skill label: " + name);
}

bool DefenderPureStrategy::contains(NodeId v) const {
  return std::binary_search(placements.begin(), placements.end(), v);
}

double DefenderMixedStrategy::expected_placements() const {
  double e = 0.0;
  for (std::size_t i = 0; i < strategies.size(); ++i)
    e += weights[i] * static_cast<double>(strategies[i].placements.size());
  return e;
}

void DefenderMixedStrategy::validate() const {
  if (strategies.size() != weights.size())
    throw DomainError("mixed strategy weight/strategy size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("negative mixed-strategy weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("mixed-strategy weights do not sum to 1");
}

std::size_t PayoffTensor::joint_action_count() const {
  std::size_t n = 1;
  for (const auto& lst : action_lists) n *= lst.size();
  return n;
}

std::size_t PayoffTensor::profile_index(const std::vector<int>& actions) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < action_lists.size(); ++i)
    idx = idx * action_lists[i].size() + static_cast<std::size_t>(actions[i]);
  return idx;
}

std::size_t PayoffTensor::cell_index(int def_idx, const std::vector<int>& actions) const {
  return static_cast<std::size_t>(def_idx) * joint_action_count() + profile_index(actions);
}

std::vector<int> PayoffTensor::profile_from_index(std::size_t profile) const {
  std::vector<int> actions(action_lists.size());
  for (std::size_t i = action_lists.size(); i-- > 0;) {
    actions[i] = static_cast<int>(profile % action_lists[i].size());
    profile /= action_lists[i].size();
  }
  return actions;
}

std::string PayoffTensor::to_csv() const {
  std::ostringstream os;
  os << "defender_index";
  for (int i = 0; i < attacker_count(); ++i) os << ",action_" << i;
  os << ",R_d";
  for (int i = 0; i < attacker_count(); ++i) os << ",R_a" << i;
  os << "\n";
  const std::size_t joint = joint_action_count();
  for (std::size_t d = 0; d < defender_strategies.size(); ++d) {
    for (std::size_t p = 0; p < joint; ++p) {
      auto actions = profile_from_index(p);
      os << d;
      for (int a : actions) os << "," << a;
      std::size_t cell = d * joint + p;
      os << "," << defender_payoff[cell];
      for (int i = 0; i < attacker_count(); ++i) os << "," << attacker_payoff[static_cast<std::size_t>(i)][cell];
      os << "\n";
    }
  }
  return os.str();
}

std::vector<DefenderPureStrategy> defender_pure_strategies(const std::vector<NodeId>& candidates,
                                                           int budget, std::size_t enumeration_cap) {
  if (budget < 0) throw DomainError("negative honeypot budget");
  std::vector<NodeId> pool = candidates;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const int n = static_cast<int>(pool.size());
  const int b = std::min(budget, n);
  // C(n,0..b) with overflow guard against the enumeration cap
  double total = 0.0;
  {
    double c = 1.0;
    for (int k = 0; k <= b; ++k) {
      total += c;
      c = c * (n - k) / (k + 1);
      if (total > static_cast<double>(enumeration_cap))
        throw ConfigError("defender strategy enumeration would exceed cap (" +
                          std::to_string(enumeration_cap) +
                          "); reduce the candidate pool or budget");
    }
  }

  std::vector<DefenderPureStrategy> out;
  out.push_back({});  // empty placement
  std::vector<int> pick;
  // size-major, lexicographic within each size
  for (int size = 1; size <= b; ++size) {
    pick.assign(static_cast<std::size_t>(size), 0);
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      DefenderPureStrategy s;
      for (int i : pick) s.placements.push_back(pool[static_cast<std::size_t>(i)]);
      out.push_back(std::move(s));
      int i = size - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

double defender_reward(const DefenderPureStrategy& d, const std::vector<AttackerAction>& profile,
                       const std::vector<double>& values, NodeId entry, double honeypot_cost) {
  double reward = 0.0;
  std::vector<NodeId> touched;
  for (const auto& action : profile) {
    if (action.abstain) continue;
    for (std::size_t i = 1; i < action.path.nodes.size(); ++i) {
      NodeId v = action.path.nodes[i];
      if (v == entry) continue;
      if (d.contains(v)) {
        reward += values[static_cast<std::size_t>(v)] - honeypot_cost;
        touched.push_back(v);
        break;  // interception truncates the path
      }
      reward -= values[static_cast<std::size_t>(v)];
    }
  }
  for (NodeId v : d.placements) {
    if (std::find(touched.begin(), touched.end(), v) == touched.end()) reward -= honeypot_cost;
  }
  return reward;
}

double attacker_reward(const DefenderPureStrategy& d, const AttackerAction& action,
                       const std::vector<double>& values, NodeId entry) {
  if (action.abstain) return 0.0;
  const auto& path = action.path;
  if (path.nodes.size() < 2) throw DomainError("degenerate attack path");
  if (path.edge_costs.size() + 1 != path.nodes.size())
    throw DomainError("attack path missing per-edge costs");
  (void)entry;
  double spent = 0.0;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    spent += path.edge_costs[i - 1];
    NodeId v = path.nodes[i];
    if (d.contains(v)) return -spent;  // sunk cost through the interception edge
  }
  NodeId terminal = path.nodes.back();
  return values[static_cast<std::size_t>(terminal)] - path.total_cost;
}

PayoffTensor build_payoff_tensor(const std::vector<DefenderPureStrategy>& defender_strategies,
                                 const std::vector<std::vector<AttackerAction>>& action_lists,
                                 const std::vector<double>& values, NodeId entry,
                                 double honeypot_cost, std::size_t cell_cap) {
  PayoffTensor t;
  t.defender_strategies = defender_strategies;
  t.action_lists = action_lists;
  for (const auto& lst : action_lists)
    if (lst.empty()) throw DomainError("empty attacker action list (use an abstain action)");

  const std::size_t joint = t.joint_action_count();
  const std::size_t cells = defender_strategies.size() * joint;
  if (cells > cell_cap)
    throw ConfigError("payoff tensor would need " + std::to_string(cells) +
                      " cells, above the configured cap");

  const int m = t.attacker_count();
  t.defender_payoff.assign(cells, 0.0);
  t.attacker_payoff.assign(static_cast<std::size_t>(m), std::vector<double>(cells, 0.0));

  std::vector<int> actions(static_cast<std::size_t>(m), 0);
  std::vector<AttackerAction> profile(static_cast<std::size_t>(m));
  for (std::size_t di = 0; di < defender_strategies.size(); ++di) {
    const auto& d = defender_strategies[di];
    std::fill(actions.begin(), actions.end(), 0);
    for (std::size_t p = 0; p < joint; ++p) {
      for (int i = 0; i < m; ++i)
        profile[static_cast<std::size_t>(i)] =
            action_lists[static_cast<std::size_t>(i)][static_cast<std::size_t>(actions[static_cast<std::size_t>(i)])];
      const std::size_t cell = di * joint + p;
      t.defender_payoff[cell] = defender_reward(d, profile, values, entry, honeypot_cost);
      for (int i = 0; i < m; ++i)
        t.attacker_payoff[static_cast<std::size_t>(i)][cell] =
            attacker_reward(d, profile[static_cast<std::size_t>(i)], values, entry);
      // increment mixed-radix action counter, last attacker fastest
      for (int i = m - 1; i >= 0; --i) {
        if (++actions[static_cast<std::size_t>(i)] <
            static_cast<int>(action_lists[static_cast<std::size_t>(i)].size()))
          break;
        actions[static_cast<std::size_t>(i)] = 0;
      }
    }
  }
  return t;
}

PayoffTensor expected_utilities(const std::vector<PayoffTensor>& slices,
                                const std::vector<double>& joint_weights) {
  if (slices.empty()) throw DomainError("expected_utilities: no tensor slices");
  if (slices.size() != joint_weights.size())
    throw DomainError("expected_utilities: belief/type count mismatch");
  double wsum = 0.0;
  for (double w : joint_weights) {
    if (w < -1e-12) throw DomainError("expected_utilities: negative belief weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw DomainError("expected_utilities: belief does not sum to 1");

  PayoffTensor out = slices.front();
  const std::size_t cells = out.defender_payoff.size();
  for (const auto& s : slices) {
    if (s.defender_payoff.size() != cells || s.attacker_count() != out.attacker_count())
      throw DomainError("expected_utilities: slice shape mismatch");
  }
  std::fill(out.defender_payoff.begin(), out.defender_payoff.end(), 0.0);
  for (auto& ap : out.attacker_payoff) std::fill(ap.begin(), ap.end(), 0.0);
  for (std::size_t j = 0; j < slices.size(); ++j) {
    const double w = joint_weights[j];
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < cells; ++c) out.defender_payoff[c] += w * slices[j].defender_payoff[c];
    for (int i = 0; i < out.attacker_count(); ++i) {
      auto& dst = out.attacker_payoff[static_cast<std::size_t>(i)];
      const auto& src = slices[j].attacker_payoff[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < cells; ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

}  // namespace hpgame
