#include "hpgame/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hpgame {

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  return os.str();
}

void ResultTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write table to " + path);
  out << to_csv();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string pair_label(NodeId a, NodeId b) {
  return std::to_string(a) + "-" + std::to_string(b);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Scenario skeleton for sweep runs: two high-skill attackers with known
// targets (the experimental setup keeps type spaces singleton).
ScenarioConfig pair_scenario(const ExperimentSpec& spec, const NetworkSource& source, NodeId ta,
                             NodeId tb, double honeypot_cost, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.network = source;
  cfg.skill_exploits = spec.skill_exploits;
  cfg.type_space.push_back({"high@" + std::to_string(ta), Skill::High, ta});
  cfg.type_space.push_back({"high@" + std::to_string(tb), Skill::High, tb});
  cfg.attackers.push_back({"A1", 0});
  cfg.attackers.push_back({"A2", 1});
  cfg.priors = {{1.0, 0.0}, {0.0, 1.0}};
  cfg.budget = spec.budget;
  cfg.honeypot_cost = honeypot_cost;
  cfg.paths_per_attacker = spec.paths_per_attacker;
  cfg.max_rounds = std::max(2, spec.max_rounds);
  cfg.policy = DefenderPolicy::Stackelberg;
  cfg.seed = seed;
  cfg.viability_factor = spec.viability_factor;
  cfg.candidate_cap = spec.candidate_cap;
  cfg.threads = 1;
  return cfg;
}

struct Round1Stats {
  double expected_utility = 0.0;
  double expected_honeypots = 0.0;
  double realized_cumulative = 0.0;
};

Round1Stats run_pair_round1(const ScenarioConfig& cfg) {
  SimulationResult res = run_simulation(cfg);
  if (res.rounds.size() < 2)
    throw SolverError("sweep scenario terminated before the first equilibrium round");
  Round1Stats st;
  st.expected_utility = res.rounds[1].expected_defender_utility;
  st.expected_honeypots = res.rounds[1].expected_honeypots;
  st.realized_cumulative = res.cumulative_realized_utility;
  return st;
}

NetworkSource file_network_with_alpha(const ExperimentSpec& spec, double alpha) {
  if (spec.network.kind != NetworkSource::Kind::File)
    throw ConfigError(spec.kind + " requires a file-backed network");
  auto net = std::make_shared<Network>(load_network_file(spec.network.path));
  net->alpha = alpha;
  net->validate();
  NetworkSource src;
  src.kind = NetworkSource::Kind::Inline;
  src.inline_net = std::move(net);
  return src;
}

void run_indexed_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ResultTable alpha_sweep(const ExperimentSpec& spec) {
  if (spec.alpha_grid.empty()) throw ConfigError("alpha-sweep needs a non-empty alpha grid");
  for (double a : spec.alpha_grid)
    if (a <= 0.0 || a >= 1.0)
      throw ConfigError("alpha grid entry " + std::to_string(a) + " outside (0,1)");
  if (spec.target_pairs.empty()) throw ConfigError("alpha-sweep needs target pairs");
  if (spec.replications < 1) throw ConfigError("replications must be >= 1");

  struct Cell {
    std::vector<double> utility, honeypots, realized;
  };
  const std::size_t n_alpha = spec.alpha_grid.size();
  const std::size_t n_pair = spec.target_pairs.size();
  std::vector<Cell> cells(n_alpha * n_pair);
  for (auto& c : cells) {
    c.utility.resize(static_cast<std::size_t>(spec.replications));
    c.honeypots.resize(static_cast<std::size_t>(spec.replications));
    c.realized.resize(static_cast<std::size_t>(spec.replications));
  }

  const std::size_t total = n_alpha * n_pair * static_cast<std::size_t>(spec.replications);
  run_indexed_parallel(total, spec.threads, [&](std::size_t idx) {
    const std::size_t rep = idx % static_cast<std::size_t>(spec.replications);
    const std::size_t rest = idx / static_cast<std::size_t>(spec.replications);
    const std::size_t pi = rest % n_pair;
    const std::size_t ai = rest / n_pair;
    auto src = file_network_with_alpha(spec, spec.alpha_grid[ai]);
    auto cfg = pair_scenario(spec, src, spec.target_pairs[pi].first, spec.target_pairs[pi].second,
                             spec.honeypot_cost, spec.seed_base + rep);
    auto st = run_pair_round1(cfg);
    auto& cell = cells[ai * n_pair + pi];
    cell.utility[rep] = st.expected_utility;
    cell.honeypots[rep] = st.expected_honeypots;
    cell.realized[rep] = st.realized_cumulative;
  });

  ResultTable t;
  t.columns = {"alpha", "pair", "mean_defender_utility", "mean_honeypots",
               "mean_realized_cumulative", "replications"};
  for (std::size_t ai = 0; ai < n_alpha; ++ai) {
    for (std::size_t pi = 0; pi < n_pair; ++pi) {
      const auto& cell = cells[ai * n_pair + pi];
      t.rows.push_back({format_metric(spec.alpha_grid[ai]),
                        pair_label(spec.target_pairs[pi].first, spec.target_pairs[pi].second),
                        format_metric(mean_of(cell.utility)), format_metric(mean_of(cell.honeypots)),
                        format_metric(mean_of(cell.realized)), std::to_string(spec.replications)});
    }
  }
  return t;
}

ResultTable alpha_plateau_summary(const ResultTable& sweep) {
  // variation of mean utility over the 0.4..0.8 band, per pair
  std::map<std::string, std::vector<double>> band;
  for (const auto& row : sweep.rows) {
    const double alpha = std::stod(row[0]);
    if (alpha >= 0.4 - 1e-12 && alpha <= 0.8 + 1e-12) band[row[1]].push_back(std::stod(row[2]));
  }
  ResultTable t;
  t.columns = {"pair", "band_min", "band_max", "band_mean", "plateau_variation"};
  for (const auto& [pair, vals] : band) {
    const double lo = *std::min_element(vals.begin(), vals.end());
    const double hi = *std::max_element(vals.begin(), vals.end());
    const double mean = mean_of(vals);
    const double variation = mean != 0.0 ? (hi - lo) / std::abs(mean) : 0.0;
    t.rows.push_back({pair, format_metric(lo), format_metric(hi), format_metric(mean),
                      format_metric(variation)});
  }
  return t;
}

ResultTable cost_sweep(const ExperimentSpec& spec) {
  if (spec.cost_grid.empty()) throw ConfigError("cost-sweep needs a non-empty cost grid");
  for (double c : spec.cost_grid)
    if (c < 0.0) throw ConfigError("honeypot cost grid entries must be >= 0");
  if (spec.target_pairs.empty()) throw ConfigError("cost-sweep needs target pairs");

  const std::size_t n_cost = spec.cost_grid.size();
  const std::size_t n_pair = spec.target_pairs.size();
  struct Cell {
    std::vector<double> utility, honeypots;
  };
  std::vector<Cell> cells(n_cost * n_pair);
  for (auto& c : cells) {
    c.utility.resize(static_cast<std::size_t>(spec.replications));
    c.honeypots.resize(static_cast<std::size_t>(spec.replications));
  }

  const std::size_t total = n_cost * n_pair * static_cast<std::size_t>(spec.replications);
  run_indexed_parallel(total, spec.threads, [&](std::size_t idx) {
    const std::size_t rep = idx % static_cast<std::size_t>(spec.replications);
    const std::size_t rest = idx / static_cast<std::size_t>(spec.replications);
    const std::size_t pi = rest % n_pair;
    const std::size_t ci = rest / n_pair;
    NetworkSource src = spec.network;
    auto cfg = pair_scenario(spec, src, spec.target_pairs[pi].first, spec.target_pairs[pi].second,
                             spec.cost_grid[ci], spec.seed_base + rep);
    auto st = run_pair_round1(cfg);
    auto& cell = cells[ci * n_pair + pi];
    cell.utility[rep] = st.expected_utility;
    cell.honeypots[rep] = st.expected_honeypots;
  });

  ResultTable t;
  t.columns = {"c_h", "pair", "category", "mean_defender_utility", "mean_honeypots",
               "gap_vs_same_target", "replications"};
  for (std::size_t ci = 0; ci < n_cost; ++ci) {
    // reference level: mean utility of same-target pairings at this cost
    std::vector<double> same_utils;
    for (std::size_t pi = 0; pi < n_pair; ++pi)
      if (spec.target_pairs[pi].first == spec.target_pairs[pi].second)
        same_utils.push_back(mean_of(cells[ci * n_pair + pi].utility));
    const double same_ref = mean_of(same_utils);
    for (std::size_t pi = 0; pi < n_pair; ++pi) {
      const bool same = spec.target_pairs[pi].first == spec.target_pairs[pi].second;
      const double util = mean_of(cells[ci * n_pair + pi].utility);
      t.rows.push_back({format_metric(spec.cost_grid[ci]),
                        pair_label(spec.target_pairs[pi].first, spec.target_pairs[pi].second),
                        same ? "same" : "different", format_metric(util),
                        format_metric(mean_of(cells[ci * n_pair + pi].honeypots)),
                        format_metric(same_utils.empty() ? 0.0 : util - same_ref),
                        std::to_string(spec.replications)});
    }
  }
  return t;
}

ResultTable baseline_compare(const ExperimentSpec& spec) {
  if (spec.budgets.empty()) throw ConfigError("baseline-compare needs a budget list");
  for (int b : spec.budgets)
    if (b < 0 || b > 5) throw ConfigError("baseline budgets must lie in 0..5");
  if (spec.network.kind != NetworkSource::Kind::Generated)
    throw ConfigError("baseline-compare runs on generated networks");

  const DefenderPolicy policies[] = {DefenderPolicy::Stackelberg, DefenderPolicy::Greedy,
                                     DefenderPolicy::Random};
  const std::size_t n_bud = spec.budgets.size();
  const std::size_t n_rep = static_cast<std::size_t>(spec.replications);
  const int rounds = std::max(2, spec.max_rounds);

  // per (policy, budget, rep): realized utility per round
  std::vector<std::vector<double>> per_run(3 * n_bud * n_rep);
  run_indexed_parallel(3 * n_bud * n_rep, spec.threads, [&](std::size_t idx) {
    const std::size_t rep = idx % n_rep;
    const std::size_t rest = idx / n_rep;
    const std::size_t bi = rest % n_bud;
    const std::size_t pol = rest / n_bud;

    const std::uint64_t seed = spec.seed_base + rep;
    // same generated network and target pair for every policy and budget
    GenerationSpec gen = spec.network.generation;
    Network net = generate_network(seed, gen);
    auto shared = std::make_shared<Network>(std::move(net));
    const auto& tg = shared->targets;
    const NodeId ta = tg[rep % tg.size()].node;
    const NodeId tb = tg[(rep / tg.size() + 1) % tg.size()].node;
    NetworkSource src;
    src.kind = NetworkSource::Kind::Inline;
    src.inline_net = shared;

    ScenarioConfig cfg = pair_scenario(spec, src, ta, tb, spec.honeypot_cost, seed);
    cfg.budget = spec.budgets[bi];
    cfg.max_rounds = rounds;
    cfg.policy = policies[pol];
    SimulationResult res = run_simulation(cfg);
    std::vector<double> util(static_cast<std::size_t>(rounds), 0.0);
    for (const auto& r : res.rounds)
      util[static_cast<std::size_t>(r.round)] = r.realized_defender_utility;
    per_run[idx] = std::move(util);
  });

  ResultTable t;
  t.columns = {"policy", "budget", "round", "mean_realized_utility", "replications"};
  for (std::size_t pol = 0; pol < 3; ++pol) {
    for (std::size_t bi = 0; bi < n_bud; ++bi) {
      for (int round = 0; round < rounds; ++round) {
        std::vector<double> vals;
        for (std::size_t rep = 0; rep < n_rep; ++rep) {
          const std::size_t idx = (pol * n_bud + bi) * n_rep + rep;
          vals.push_back(per_run[idx][static_cast<std::size_t>(round)]);
        }
        t.rows.push_back({policy_name(policies[pol]), std::to_string(spec.budgets[bi]),
                          std::to_string(round), format_metric(mean_of(vals)),
                          std::to_string(spec.replications)});
      }
    }
  }
  return t;
}

ScalabilityOutput scalability(const ExperimentSpec& spec) {
  if (spec.sizes.empty()) throw ConfigError("scalability needs a size grid");
  if (spec.network.kind != NetworkSource::Kind::Generated)
    throw ConfigError("scalability runs on generated networks");

  ScalabilityOutput out;
  out.structure.columns = {"n", "edges", "candidate_pool", "defender_strategies", "joint_profiles",
                           "replications"};
  out.timing.columns = {"n", "phase1_median_s", "phase2_median_s", "total_median_s",
                        "phase_sum_le_total", "timed_out"};

  for (int n : spec.sizes) {
    std::vector<double> p1, p2, total;
    long long edges = 0, pool = 0, strategies = 0, profiles = 0;
    bool timed_out = false;
    for (int rep = 0; rep < spec.replications; ++rep) {
      GenerationSpec gen = spec.network.generation;
      gen.node_count = n;
      Network net = generate_network(spec.seed_base + static_cast<std::uint64_t>(rep), gen);
      auto shared = std::make_shared<Network>(std::move(net));
      NetworkSource src;
      src.kind = NetworkSource::Kind::Inline;
      src.inline_net = shared;
      const NodeId ta = shared->targets[0].node;
      const NodeId tb = shared->targets[1 % shared->targets.size()].node;
      ScenarioConfig cfg = pair_scenario(spec, src, ta, tb, spec.honeypot_cost,
                                         spec.seed_base + static_cast<std::uint64_t>(rep));
      cfg.max_rounds = 2;
      cfg.threads = spec.threads;  // LP-level parallelism, timing-only path
      Simulation sim(cfg);
      RoundRecord r0 = sim.run_round();
      RoundRecord r1 = sim.run_round();
      (void)r0;
      p1.push_back(r1.payoff_build_seconds);
      p2.push_back(r1.solve_seconds);
      total.push_back(r1.total_seconds);
      if (r1.total_seconds > spec.timeout_seconds) timed_out = true;
      if (rep == 0) {
        edges = static_cast<long long>(shared->edges.size());
        pool = static_cast<long long>(sim.candidate_pool().size());
        strategies = static_cast<long long>(sim.strategy_count());
        profiles = static_cast<long long>(sim.joint_profile_count());
      }
    }
    out.structure.rows.push_back({std::to_string(n), std::to_string(edges), std::to_string(pool),
                                  std::to_string(strategies), std::to_string(profiles),
                                  std::to_string(spec.replications)});
    const double m1 = median_of(p1), m2 = median_of(p2), mt = median_of(total);
    out.timing.rows.push_back({std::to_string(n), format_metric(m1), format_metric(m2),
                               format_metric(mt), (m1 + m2 <= mt + 1e-9) ? "yes" : "no",
                               timed_out ? "yes" : "no"});
  }
  return out;
}

// --- experiment spec JSON ---------------------------------------------------

ExperimentSpec experiment_from_json_text(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment JSON parse error: ") + e.what());
  }
  try {
    ExperimentSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    const auto& jn = j.at("network");
    const std::string source = jn.at("source").get<std::string>();
    if (source == "file") {
      spec.network.kind = NetworkSource::Kind::File;
      std::filesystem::path p = jn.at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      spec.network.path = p.string();
    } else if (source == "generate") {
      spec.network.kind = NetworkSource::Kind::Generated;
      GenerationSpec g;
      g.node_count = jn.value("nodes", g.node_count);
      g.min_edge_factor = jn.value("min_edge_factor", g.min_edge_factor);
      g.target_count = jn.value("targets", g.target_count);
      if (jn.contains("target_values"))
        g.target_values = jn.at("target_values").get<std::vector<double>>();
      g.min_target_depth = jn.value("min_target_depth", g.min_target_depth);
      g.alpha = jn.value("alpha", g.alpha);
      spec.network.generation = g;
    } else {
      throw ConfigError("network.source must be \"file\" or \"generate\"");
    }
    if (j.contains("skills"))
      for (const auto& [label, ids] : j.at("skills").items())
        spec.skill_exploits[label] = ids.get<std::vector<std::string>>();
    if (j.contains("alpha_grid")) spec.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("cost_grid")) spec.cost_grid = j.at("cost_grid").get<std::vector<double>>();
    if (j.contains("target_pairs"))
      for (const auto& jp : j.at("target_pairs"))
        spec.target_pairs.push_back({jp.at(0).get<int>(), jp.at(1).get<int>()});
    if (j.contains("budgets")) spec.budgets = j.at("budgets").get<std::vector<int>>();
    if (j.contains("sizes")) spec.sizes = j.at("sizes").get<std::vector<int>>();
    spec.replications = j.value("replications", spec.replications);
    if (spec.replications < 1) throw ConfigError("replications must be >= 1");
    spec.seed_base = j.value("seed_base", spec.seed_base);
    spec.budget = j.value("budget", spec.budget);
    spec.honeypot_cost = j.value("honeypot_cost", spec.honeypot_cost);
    spec.paths_per_attacker = j.value("paths_per_attacker", spec.paths_per_attacker);
    if (spec.paths_per_attacker < 1) throw ConfigError("paths per attacker K must be >= 1");
    spec.max_rounds = j.value("max_rounds", spec.max_rounds);
    spec.viability_factor = j.value("viability_factor", spec.viability_factor);
    spec.candidate_cap = j.value("candidate_cap", spec.candidate_cap);
    spec.threads = j.value("threads", spec.threads);
    spec.timeout_seconds = j.value("timeout_seconds", spec.timeout_seconds);
    if (spec.budget < 0) throw ConfigError("budget must be >= 0");
    if (spec.honeypot_cost < 0.0) throw ConfigError("honeypot cost C_h must be >= 0");
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment JSON schema error: ") + e.what());
  }
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return experiment_from_json_text(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::string experiment_to_json_text(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind;
  if (spec.network.kind == NetworkSource::Kind::File)
    j["network"] = {{"source", "file"}, {"path", spec.network.path}};
  else {
    const auto& g = spec.network.generation;
    j["network"] = {{"source", "generate"},         {"nodes", g.node_count},
                    {"min_edge_factor", g.min_edge_factor}, {"targets", g.target_count},
                    {"target_values", g.target_values},     {"min_target_depth", g.min_target_depth},
                    {"alpha", g.alpha}};
  }
  for (const auto& [label, ids] : spec.skill_exploits) j["skills"][label] = ids;
  if (!spec.alpha_grid.empty()) j["alpha_grid"] = spec.alpha_grid;
  if (!spec.cost_grid.empty()) j["cost_grid"] = spec.cost_grid;
  if (!spec.target_pairs.empty()) {
    j["target_pairs"] = nlohmann::json::array();
    for (auto [a, b] : spec.target_pairs) j["target_pairs"].push_back({a, b});
  }
  if (!spec.budgets.empty()) j["budgets"] = spec.budgets;
  if (!spec.sizes.empty()) j["sizes"] = spec.sizes;
  j["replications"] = spec.replications;
  j["seed_base"] = spec.seed_base;
  j["budget"] = spec.budget;
  j["honeypot_cost"] = spec.honeypot_cost;
  j["paths_per_attacker"] = spec.paths_per_attacker;
  j["max_rounds"] = spec.max_rounds;
  j["viability_factor"] = spec.viability_factor;
  j["candidate_cap"] = spec.candidate_cap;
  j["threads"] = spec.threads;
  j["timeout_seconds"] = spec.timeout_seconds;
  return j.dump(2) + "\n";
}

}  // namespace hpgame
