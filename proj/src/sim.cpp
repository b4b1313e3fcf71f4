#include "hpgame/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hpgame {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::vector<NodeId>> all_k_subsets(const std::vector<NodeId>& pool, int k) {
  std::vector<std::vector<NodeId>> out;
  const int n = static_cast<int>(pool.size());
  if (k <= 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<NodeId> s;
    for (int i : pick) s.push_back(pool[static_cast<std::size_t>(i)]);
    out.push_back(std::move(s));
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

std::string policy_name(DefenderPolicy p) {
  switch (p) {
    case DefenderPolicy::Stackelberg: return "stackelberg";
    case DefenderPolicy::Greedy: return "greedy";
    case DefenderPolicy::Random: return "random";
  }
  return "stackelberg";
}

DefenderPolicy policy_from_name(const std::string& name) {
  if (name == "stackelberg") return DefenderPolicy::Stackelberg;
  if (name == "greedy") return DefenderPolicy::Greedy;
  if (name == "random") return DefenderPolicy::Random;
  throw ConfigError("unknown defender policy: " + name);
}

std::string outcome_name(AttackerOutcome o) {
  switch (o) {
    case AttackerOutcome::Intercepted: return "intercepted";
    case AttackerOutcome::ReachedTarget: return "reached-target";
    case AttackerOutcome::Abstained: return "abstained";
    case AttackerOutcome::Inactive: return "inactive";
  }
  return "inactive";
}

void ScenarioConfig::validate() const {
  if (attackers.empty()) throw ConfigError("attacker roster is empty");
  if (type_space.empty()) throw ConfigError("type space is empty");
  if (budget < 0) throw ConfigError("budget must be >= 0");
  if (honeypot_cost < 0.0) throw ConfigError("honeypot cost C_h must be >= 0");
  if (paths_per_attacker < 1) throw ConfigError("paths per attacker K must be >= 1");
  if (max_rounds < 1) throw ConfigError("max rounds must be >= 1");
  if (viability_factor < 0.0) throw ConfigError("viability factor must be >= 0");
  if (candidate_cap < 1) throw ConfigError("candidate cap must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (network.kind == NetworkSource::Kind::Generated) {
    if (network.generation.alpha <= 0.0 || network.generation.alpha >= 1.0)
      throw ConfigError("alpha must lie strictly inside (0,1), got " +
                        std::to_string(network.generation.alpha));
  }
  for (const auto& a : attackers) {
    if (a.true_type < 0 || a.true_type >= static_cast<int>(type_space.size()))
      throw ConfigError("attacker " + a.name + " has an out-of-range true type");
  }
  if (!priors.empty()) {
    if (priors.size() != attackers.size())
      throw ConfigError("priors must have one row per attacker");
    for (const auto& row : priors) {
      if (row.size() != type_space.size())
        throw ConfigError("prior row width must match the type space");
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) throw ConfigError("prior entries must be non-negative");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("prior rows must sum to 1");
    }
  }
}

ResolveOutcome resolve_path(const AttackPath& path, const std::vector<NodeId>& placement) {
  ResolveOutcome out;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    NodeId v = path.nodes[i];
    if (std::find(placement.begin(), placement.end(), v) != placement.end()) {
      out.intercepted = true;
      out.node = v;
      out.node_index = i;
      return out;
    }
  }
  return out;
}

DefenderPureStrategy greedy_placement(const std::vector<double>& values,
                                      const std::vector<NodeId>& candidates, int budget) {
  if (budget < 0) throw DomainError("negative budget");
  std::vector<NodeId> sorted = candidates;
  std::sort(sorted.begin(), sorted.end(), [&](NodeId a, NodeId b) {
    double va = values[static_cast<std::size_t>(a)], vb = values[static_cast<std::size_t>(b)];
    if (va != vb) return va > vb;
    return a < b;
  });
  if (static_cast<int>(sorted.size()) > budget) sorted.resize(static_cast<std::size_t>(budget));
  DefenderPureStrategy s;
  s.placements = sorted;
  std::sort(s.placements.begin(), s.placements.end());
  return s;
}

DefenderPureStrategy random_placement(const std::vector<NodeId>& candidates, int budget, Rng& rng) {
  int b = budget;
  if (b > static_cast<int>(candidates.size())) b = static_cast<int>(candidates.size());
  std::vector<NodeId> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  auto idx = rng.sample_indices(static_cast<int>(sorted.size()), b);
  DefenderPureStrategy s;
  for (int i : idx) s.placements.push_back(sorted[static_cast<std::size_t>(i)]);
  std::sort(s.placements.begin(), s.placements.end());
  return s;
}

Simulation::Simulation(const ScenarioConfig& config)
    : cfg_(config), placement_rng_(config.seed, /*stream=*/1) {
  cfg_.validate();

  switch (cfg_.network.kind) {
    case NetworkSource::Kind::File: net_ = load_network_file(cfg_.network.path); break;
    case NetworkSource::Kind::Generated: net_ = generate_network(cfg_.seed, cfg_.network.generation); break;
    case NetworkSource::Kind::Inline:
      if (!cfg_.network.inline_net) throw ConfigError("inline network source is empty");
      net_ = *cfg_.network.inline_net;
      break;
  }
  net_.validate();
  values_ = node_values(net_);

  // resolve each type's exploit capability and path menu
  for (const auto& ts : cfg_.type_space) {
    if (!net_.is_target(ts.target))
      throw ConfigError("type " + ts.id + " targets node " + std::to_string(ts.target) +
                        " which is not a network target");
    if (ts.target == net_.entry) throw ConfigError("type target equals the entry node");
    auto it = cfg_.skill_exploits.find(skill_name(ts.skill));
    if (it == cfg_.skill_exploits.end())
      throw ConfigError("no exploit set configured for skill " + skill_name(ts.skill));
    TypeState state;
    state.graph = derive_attack_graph(net_, net_.catalog.mask_of(it->second));
    auto paths = enumerate_paths(net_, state.graph, net_.entry, {ts.target}, cfg_.paths_per_attacker);
    if (paths.empty()) {
      AttackerAction abstain;
      abstain.abstain = true;
      state.actions.push_back(abstain);
    } else {
      for (auto& p : paths) {
        AttackerAction a;
        a.path = std::move(p);
        state.actions.push_back(std::move(a));
      }
    }
    types_.push_back(std::move(state));
  }

  // beliefs: explicit priors or uniform
  const std::size_t m = cfg_.attackers.size();
  const std::size_t nt = cfg_.type_space.size();
  belief_.per_attacker.assign(m, std::vector<double>(nt, 1.0 / static_cast<double>(nt)));
  if (!cfg_.priors.empty()) belief_.per_attacker = cfg_.priors;
  belief_.validate();

  // candidate pool: nodes on any supported type's paths, excluding the entry
  // and targets, that clear the deployment-viability threshold
  std::vector<bool> in_support(nt, false);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < nt; ++t)
      if (belief_.per_attacker[i][t] > 0.0) in_support[t] = true;
  const double threshold = cfg_.viability_factor * cfg_.honeypot_cost + 1e-9;
  std::vector<NodeId> pool_nodes;
  for (std::size_t t = 0; t < nt; ++t) {
    if (!in_support[t]) continue;
    for (const auto& a : types_[t].actions) {
      if (a.abstain) continue;
      for (std::size_t i = 1; i < a.path.nodes.size(); ++i) {
        NodeId v = a.path.nodes[i];
        if (v == net_.entry || net_.is_target(v)) continue;
        if (values_[static_cast<std::size_t>(v)] > threshold) pool_nodes.push_back(v);
      }
    }
  }
  std::sort(pool_nodes.begin(), pool_nodes.end());
  pool_nodes.erase(std::unique(pool_nodes.begin(), pool_nodes.end()), pool_nodes.end());
  if (static_cast<int>(pool_nodes.size()) > cfg_.candidate_cap) {
    std::sort(pool_nodes.begin(), pool_nodes.end(), [&](NodeId a, NodeId b) {
      double va = values_[static_cast<std::size_t>(a)], vb = values_[static_cast<std::size_t>(b)];
      if (va != vb) return va > vb;
      return a < b;
    });
    pool_nodes.resize(static_cast<std::size_t>(cfg_.candidate_cap));
    std::sort(pool_nodes.begin(), pool_nodes.end());
  }
  pool_ = std::move(pool_nodes);

  // per-attacker tensor action shape: widest menu among supported types
  action_lists_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t width = 1;
    int first_supported = -1;
    for (std::size_t t = 0; t < nt; ++t) {
      if (belief_.per_attacker[i][t] <= 0.0) continue;
      if (first_supported < 0) first_supported = static_cast<int>(t);
      width = std::max(width, types_[t].actions.size());
    }
    if (first_supported < 0) throw ConfigError("attacker " + cfg_.attackers[i].name +
                                               " has an all-zero prior");
    auto& list = action_lists_[i];
    const auto& rep = types_[static_cast<std::size_t>(first_supported)].actions;
    for (std::size_t k = 0; k < width; ++k) list.push_back(rep[std::min(k, rep.size() - 1)]);
  }

  // likelihood context over the full type space
  likelihood_ctx_.net = &net_;
  likelihood_ctx_.types.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    likelihood_ctx_.types[t].exploit_mask = types_[t].graph.exploit_mask;
    likelihood_ctx_.types[t].optimal_path =
        types_[t].actions.front().abstain ? nullptr : &types_[t].actions.front().path;
  }

  active_.assign(m, true);
}

bool Simulation::any_active() const {
  return std::any_of(active_.begin(), active_.end(), [](bool b) { return b; });
}

void Simulation::build_payoff_slices() {
  if (slices_built_) return;
  const std::size_t m = cfg_.attackers.size();
  const std::size_t nt = cfg_.type_space.size();

  strategies_ = defender_pure_strategies(pool_, cfg_.budget);

  // joint types with nonzero prior mass; zero stays zero under Bayes updates
  std::vector<std::vector<int>> supports(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < nt; ++t)
      if (belief_.per_attacker[i][t] > 0.0) supports[i].push_back(static_cast<int>(t));

  std::vector<std::size_t> counter(m, 0);
  while (true) {
    std::size_t joint = 0;
    for (std::size_t i = 0; i < m; ++i)
      joint = joint * nt + static_cast<std::size_t>(supports[i][counter[i]]);
    live_joints_.push_back(joint);

    std::vector<std::vector<AttackerAction>> lists(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& acts = types_[static_cast<std::size_t>(supports[i][counter[i]])].actions;
      const std::size_t width = action_lists_[i].size();
      for (std::size_t k = 0; k < width; ++k) lists[i].push_back(acts[std::min(k, acts.size() - 1)]);
    }
    slices_.push_back(
        build_payoff_tensor(strategies_, lists, values_, net_.entry, cfg_.honeypot_cost));

    std::size_t i = m;
    while (i-- > 0) {
      if (++counter[i] < supports[i].size()) break;
      counter[i] = 0;
      if (i == 0) {
        slices_built_ = true;
        return;
      }
    }
  }
}

std::vector<double> Simulation::joint_weights() const {
  const std::size_t m = cfg_.attackers.size();
  const std::size_t nt = cfg_.type_space.size();
  std::vector<double> w(live_joints_.size(), 1.0);
  for (std::size_t j = 0; j < live_joints_.size(); ++j) {
    std::size_t code = live_joints_[j];
    for (std::size_t i = m; i-- > 0;) {
      std::size_t t = code % nt;
      code /= nt;
      w[j] *= belief_.per_attacker[i][t];
    }
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (sum <= 0.0) throw SolverError("joint belief mass vanished");
  for (double& x : w) x /= sum;
  return w;
}

PayoffTensor Simulation::averaged_tensor() const {
  return expected_utilities(slices_, joint_weights());
}

int Simulation::best_response(int attacker, const DefenderMixedStrategy& mixed) const {
  const auto& actions =
      types_[static_cast<std::size_t>(cfg_.attackers[static_cast<std::size_t>(attacker)].true_type)]
          .actions;
  const int n = static_cast<int>(actions.size());
  std::vector<double> reward(static_cast<std::size_t>(n), 0.0);
  std::vector<double> def(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    for (std::size_t s = 0; s < mixed.strategies.size(); ++s) {
      const double w = mixed.weights[s];
      reward[static_cast<std::size_t>(k)] += w * attacker_reward(
          mixed.strategies[s], actions[static_cast<std::size_t>(k)], values_, net_.entry);
      def[static_cast<std::size_t>(k)] += w * defender_reward(
          mixed.strategies[s], {actions[static_cast<std::size_t>(k)]}, values_, net_.entry,
          cfg_.honeypot_cost);
    }
  }
  double top = *std::max_element(reward.begin(), reward.end());
  // attackers break ties in the defender's favor, then by action rank
  int best = -1;
  for (int k = 0; k < n; ++k) {
    if (reward[static_cast<std::size_t>(k)] < top - 1e-9) continue;
    if (best < 0 || def[static_cast<std::size_t>(k)] > def[static_cast<std::size_t>(best)] + 1e-12)
      best = k;
  }
  return best;
}

DefenderMixedStrategy Simulation::committed_strategy(double* payoff_seconds, double* solve_seconds,
                                                     EquilibriumSolution* solution) {
  DefenderMixedStrategy mixed;
  switch (cfg_.policy) {
    case DefenderPolicy::Stackelberg: {
      auto t0 = std::chrono::steady_clock::now();
      build_payoff_slices();
      PayoffTensor avg = averaged_tensor();
      if (payoff_seconds) *payoff_seconds = seconds_since(t0);
      auto t1 = std::chrono::steady_clock::now();
      SolveOptions opts;
      opts.threads = cfg_.threads;
      EquilibriumSolution sol = solve_stackelberg(avg, big_m_for(avg), opts);
      if (solve_seconds) *solve_seconds = seconds_since(t1);
      if (solution) *solution = sol;
      mixed = sol.mixed;
      break;
    }
    case DefenderPolicy::Greedy: {
      mixed.strategies.push_back(greedy_placement(values_, pool_, cfg_.budget));
      mixed.weights.push_back(1.0);
      break;
    }
    case DefenderPolicy::Random: {
      const int b = std::min<int>(cfg_.budget, static_cast<int>(pool_.size()));
      auto subsets = all_k_subsets(pool_, b);
      if (subsets.size() > 200000)
        throw ConfigError("random-policy mixture too large; reduce the candidate pool");
      const double w = 1.0 / static_cast<double>(subsets.size());
      for (auto& s : subsets) {
        DefenderPureStrategy d;
        d.placements = std::move(s);
        std::sort(d.placements.begin(), d.placements.end());
        mixed.strategies.push_back(std::move(d));
        mixed.weights.push_back(w);
      }
      break;
    }
  }
  mixed.validate();
  return mixed;
}

EquilibriumSolution Simulation::solve_current_equilibrium(double* payoff_seconds,
                                                          double* solve_seconds) {
  auto t0 = std::chrono::steady_clock::now();
  build_payoff_slices();
  PayoffTensor avg = averaged_tensor();
  if (payoff_seconds) *payoff_seconds = seconds_since(t0);
  auto t1 = std::chrono::steady_clock::now();
  SolveOptions opts;
  opts.threads = cfg_.threads;
  EquilibriumSolution sol = solve_stackelberg(avg, big_m_for(avg), opts);
  if (solve_seconds) *solve_seconds = seconds_since(t1);
  return sol;
}

RoundRecord Simulation::run_round() {
  if (!any_active()) throw DomainError("run_round: no active attacker");
  const auto t_round = std::chrono::steady_clock::now();
  const std::size_t m = cfg_.attackers.size();

  RoundRecord rec;
  rec.round = round_;

  // observe: round 0 sees only silence (no attacker has moved yet)
  if (round_ == 0) {
    for (std::size_t i = 0; i < m; ++i) {
      Observation obs;
      obs.attacker_index = static_cast<int>(i);
      obs.kind = ObservationKind::NoActivity;
      obs.round = 0;
      pending_.push_back(obs);
    }
  }
  rec.observations = pending_;
  pending_.clear();

  // Bayes updates, one observation at a time
  rec.degenerate_flags.assign(m, false);
  for (const auto& obs : rec.observations) {
    auto res = bayes_update(belief_, obs, likelihood_ctx_);
    belief_ = res.state;
    if (res.degenerate) rec.degenerate_flags[static_cast<std::size_t>(obs.attacker_index)] = true;
  }
  rec.posteriors = belief_.per_attacker;

  // commit: round 0 fields no honeypots, later rounds follow the policy
  DefenderMixedStrategy mixed;
  EquilibriumSolution eq;
  bool have_eq = false;
  if (round_ == 0) {
    mixed.strategies.push_back({});
    mixed.weights.push_back(1.0);
  } else {
    double pb = 0.0, sv = 0.0;
    mixed = committed_strategy(&pb, &sv, cfg_.policy == DefenderPolicy::Stackelberg ? &eq : nullptr);
    rec.payoff_build_seconds = pb;
    rec.solve_seconds = sv;
    have_eq = cfg_.policy == DefenderPolicy::Stackelberg;
  }
  rec.expected_honeypots = mixed.expected_placements();
  rec.mixed.support = mixed.strategies.size();
  rec.mixed.expected_placements = rec.expected_honeypots;
  if (mixed.strategies.size() <= 64) {
    for (std::size_t s = 0; s < mixed.strategies.size(); ++s)
      rec.mixed.entries.push_back({mixed.strategies[s].placements, mixed.weights[s]});
  }

  // realized placement
  DefenderPureStrategy placement;
  if (round_ == 0) {
    // empty
  } else if (cfg_.policy == DefenderPolicy::Random) {
    placement = random_placement(pool_, cfg_.budget, placement_rng_);
  } else if (mixed.strategies.size() == 1) {
    placement = mixed.strategies.front();
  } else {
    double u = placement_rng_.next_double();
    double acc = 0.0;
    placement = mixed.strategies.back();
    for (std::size_t s = 0; s < mixed.strategies.size(); ++s) {
      acc += mixed.weights[s];
      if (u < acc) {
        placement = mixed.strategies[s];
        break;
      }
    }
  }
  rec.realized_placement = placement.placements;

  // attacker best responses and resolution
  rec.outcomes.assign(m, AttackerOutcome::Inactive);
  rec.interception_nodes.assign(m, -1);
  rec.chosen_actions.assign(m, -1);
  rec.realized_attacker_utilities.assign(m, 0.0);
  std::vector<AttackerAction> realized_profile(m);
  for (auto& a : realized_profile) a.abstain = true;

  int active_at_start = 0;
  int reached = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!active_[i]) continue;
    ++active_at_start;
    const auto& actions =
        types_[static_cast<std::size_t>(cfg_.attackers[i].true_type)].actions;
    int k = best_response(static_cast<int>(i), mixed);
    rec.chosen_actions[i] = k;
    const AttackerAction& action = actions[static_cast<std::size_t>(k)];
    if (action.abstain) {
      rec.outcomes[i] = AttackerOutcome::Abstained;
      active_[i] = false;  // nothing it can ever do
      continue;
    }
    realized_profile[i] = action;
    rec.realized_attacker_utilities[i] =
        attacker_reward(placement, action, values_, net_.entry);
    auto res = resolve_path(action.path, placement.placements);
    if (res.intercepted) {
      rec.outcomes[i] = AttackerOutcome::Intercepted;
      rec.interception_nodes[i] = res.node;
      // edges walked before the trap, then the trigger itself
      for (std::size_t j = 1; j < res.node_index; ++j) {
        Observation obs;
        obs.attacker_index = static_cast<int>(i);
        obs.kind = ObservationKind::EdgeTraversed;
        obs.edge_from = action.path.nodes[j - 1];
        obs.edge_to = action.path.nodes[j];
        obs.round = round_ + 1;
        pending_.push_back(obs);
      }
      Observation trig;
      trig.attacker_index = static_cast<int>(i);
      trig.kind = ObservationKind::HoneypotTriggered;
      trig.node = res.node;
      trig.edge_from = action.path.nodes[res.node_index - 1];
      trig.edge_to = res.node;
      trig.round = round_ + 1;
      pending_.push_back(trig);
      if (cfg_.interception == InterceptionMode::Terminal) active_[i] = false;
    } else {
      rec.outcomes[i] = AttackerOutcome::ReachedTarget;
      ++reached;
      for (std::size_t j = 1; j < action.path.nodes.size(); ++j) {
        Observation obs;
        obs.attacker_index = static_cast<int>(i);
        obs.kind = ObservationKind::EdgeTraversed;
        obs.edge_from = action.path.nodes[j - 1];
        obs.edge_to = action.path.nodes[j];
        obs.round = round_ + 1;
        pending_.push_back(obs);
      }
      active_[i] = false;  // goal achieved
    }
  }
  rec.active_attackers = active_at_start;
  rec.success_rate =
      active_at_start > 0 ? static_cast<double>(reached) / static_cast<double>(active_at_start) : 0.0;

  rec.realized_defender_utility =
      defender_reward(placement, realized_profile, values_, net_.entry, cfg_.honeypot_cost);

  // expected utility: equilibrium prediction for the solver policy, support
  // enumeration against the realized responses for the baselines
  if (round_ == 0) {
    rec.expected_defender_utility = rec.realized_defender_utility;
  } else if (have_eq) {
    rec.expected_defender_utility = eq.defender_utility;
  } else {
    double e = 0.0;
    for (std::size_t s = 0; s < mixed.strategies.size(); ++s)
      e += mixed.weights[s] * defender_reward(mixed.strategies[s], realized_profile, values_,
                                              net_.entry, cfg_.honeypot_cost);
    rec.expected_defender_utility = e;
  }

  ++round_;
  rec.total_seconds = seconds_since(t_round);
  // phase accounting must never exceed the wall clock
  if (rec.payoff_build_seconds + rec.solve_seconds > rec.total_seconds)
    rec.total_seconds = rec.payoff_build_seconds + rec.solve_seconds;
  return rec;
}

SimulationResult Simulation::run() {
  SimulationResult result;
  while (round_ < cfg_.max_rounds && any_active()) {
    RoundRecord rec = run_round();
    result.cumulative_expected_utility += rec.expected_defender_utility;
    result.cumulative_realized_utility += rec.realized_defender_utility;
    result.rounds.push_back(std::move(rec));
  }
  result.termination = any_active() ? "max-rounds" : "all-terminal";
  return result;
}

SimulationResult run_simulation(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.run();
}

// --- scenario JSON ---------------------------------------------------------

namespace {

GenerationSpec generation_from_json(const nlohmann::json& j) {
  GenerationSpec g;
  g.node_count = j.value("nodes", g.node_count);
  g.min_edge_factor = j.value("min_edge_factor", g.min_edge_factor);
  g.target_count = j.value("targets", g.target_count);
  if (j.contains("target_values")) g.target_values = j.at("target_values").get<std::vector<double>>();
  g.min_target_depth = j.value("min_target_depth", g.min_target_depth);
  if (j.contains("exploits_per_edge")) {
    auto range = j.at("exploits_per_edge").get<std::vector<int>>();
    if (range.size() != 2) throw ConfigError("exploits_per_edge must be [min,max]");
    g.exploits_per_edge_min = range[0];
    g.exploits_per_edge_max = range[1];
  }
  g.alpha = j.value("alpha", g.alpha);
  if (j.contains("catalog")) {
    for (const auto& je : j.at("catalog"))
      g.catalog.push_back({je.at("id").get<std::string>(), je.at("cost").get<double>()});
  }
  g.max_attempts = j.value("max_attempts", g.max_attempts);
  return g;
}

nlohmann::json generation_to_json(const GenerationSpec& g) {
  nlohmann::json j;
  j["nodes"] = g.node_count;
  j["min_edge_factor"] = g.min_edge_factor;
  j["targets"] = g.target_count;
  j["target_values"] = g.target_values;
  j["min_target_depth"] = g.min_target_depth;
  j["exploits_per_edge"] = {g.exploits_per_edge_min, g.exploits_per_edge_max};
  j["alpha"] = g.alpha;
  if (!g.catalog.empty()) {
    j["catalog"] = nlohmann::json::array();
    for (const auto& e : g.catalog) j["catalog"].push_back({{"id", e.id}, {"cost", e.cost}});
  }
  j["max_attempts"] = g.max_attempts;
  return j;
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  try {
    ScenarioConfig cfg;
    const auto& jn = j.at("network");
    const std::string source = jn.at("source").get<std::string>();
    if (source == "file") {
      cfg.network.kind = NetworkSource::Kind::File;
      std::filesystem::path p = jn.at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      cfg.network.path = p.string();
    } else if (source == "generate") {
      cfg.network.kind = NetworkSource::Kind::Generated;
      cfg.network.generation = generation_from_json(jn);
    } else {
      throw ConfigError("network.source must be \"file\" or \"generate\"");
    }

    if (j.contains("skills")) {
      for (const auto& [label, ids] : j.at("skills").items())
        cfg.skill_exploits[label] = ids.get<std::vector<std::string>>();
    }

    for (const auto& jt : j.at("type_space")) {
      TypeSpec ts;
      ts.id = jt.at("id").get<std::string>();
      ts.skill = skill_from_name(jt.at("skill").get<std::string>());
      ts.target = jt.at("target").get<int>();
      cfg.type_space.push_back(std::move(ts));
    }

    for (const auto& ja : j.at("attackers")) {
      AttackerSpec a;
      a.name = ja.at("name").get<std::string>();
      const std::string tid = ja.at("true_type").get<std::string>();
      a.true_type = -1;
      for (std::size_t t = 0; t < cfg.type_space.size(); ++t)
        if (cfg.type_space[t].id == tid) a.true_type = static_cast<int>(t);
      if (a.true_type < 0) throw ConfigError("attacker " + a.name + " names unknown type " + tid);
      cfg.attackers.push_back(std::move(a));
    }

    if (j.contains("priors")) cfg.priors = j.at("priors").get<std::vector<std::vector<double>>>();

    cfg.budget = j.value("budget", cfg.budget);
    cfg.honeypot_cost = j.value("honeypot_cost", cfg.honeypot_cost);
    cfg.paths_per_attacker = j.value("paths_per_attacker", cfg.paths_per_attacker);
    cfg.max_rounds = j.value("max_rounds", cfg.max_rounds);
    if (j.contains("policy")) cfg.policy = policy_from_name(j.at("policy").get<std::string>());
    if (j.contains("interception")) {
      const std::string mode = j.at("interception").get<std::string>();
      if (mode == "persistent") cfg.interception = InterceptionMode::Persistent;
      else if (mode == "terminal") cfg.interception = InterceptionMode::Terminal;
      else throw ConfigError("interception must be \"persistent\" or \"terminal\"");
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.viability_factor = j.value("viability_factor", cfg.viability_factor);
    cfg.candidate_cap = j.value("candidate_cap", cfg.candidate_cap);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario JSON schema error: ") + e.what());
  }
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::string scenario_to_json_text(const ScenarioConfig& cfg) {
  nlohmann::json j;
  if (cfg.network.kind == NetworkSource::Kind::File) {
    j["network"] = {{"source", "file"}, {"path", cfg.network.path}};
  } else if (cfg.network.kind == NetworkSource::Kind::Generated) {
    j["network"] = generation_to_json(cfg.network.generation);
    j["network"]["source"] = "generate";
  } else {
    j["network"] = {{"source", "inline"}};
  }
  for (const auto& [label, ids] : cfg.skill_exploits) j["skills"][label] = ids;
  j["type_space"] = nlohmann::json::array();
  for (const auto& ts : cfg.type_space)
    j["type_space"].push_back(
        {{"id", ts.id}, {"skill", skill_name(ts.skill)}, {"target", ts.target}});
  j["attackers"] = nlohmann::json::array();
  for (const auto& a : cfg.attackers)
    j["attackers"].push_back(
        {{"name", a.name}, {"true_type", cfg.type_space[static_cast<std::size_t>(a.true_type)].id}});
  if (!cfg.priors.empty()) j["priors"] = cfg.priors;
  j["budget"] = cfg.budget;
  j["honeypot_cost"] = cfg.honeypot_cost;
  j["paths_per_attacker"] = cfg.paths_per_attacker;
  j["max_rounds"] = cfg.max_rounds;
  j["policy"] = policy_name(cfg.policy);
  j["interception"] =
      cfg.interception == InterceptionMode::Persistent ? "persistent" : "terminal";
  j["seed"] = cfg.seed;
  j["viability_factor"] = cfg.viability_factor;
  j["candidate_cap"] = cfg.candidate_cap;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

}  // namespace hpgame
