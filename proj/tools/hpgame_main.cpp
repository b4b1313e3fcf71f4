#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hpgame/experiments.hpp"
#include "hpgame/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int replications = 0;  // 0 = keep config value
  int threads = 0;
  bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "configuration file (JSON)")->required();
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--seed", flags.seed, "override the run seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--replications", flags.replications, "override replication count");
  cmd->add_option("--threads", flags.threads, "worker threads");
  cmd->add_flag("--dry-run", flags.dry_run, "validate and print the resolved config only");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hpgame::ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hpgame::ConfigError("cannot write output file: " + path.string());
  out << contents;
}

void write_manifest(const fs::path& dir, const std::string& command, const std::string& config_text,
                    std::uint64_t seed, int threads, const std::vector<std::string>& outputs) {
  json j;
  j["command"] = command;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(hpgame::fnv1a64(config_text)));
  j["config_hash"] = hash;
  j["seed"] = seed;
  j["threads"] = threads;
  j["version"] = kVersion;
  j["outputs"] = outputs;
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

json observation_json(const hpgame::Observation& obs) {
  json j;
  j["attacker"] = obs.attacker_index;
  switch (obs.kind) {
    case hpgame::ObservationKind::EdgeTraversed:
      j["kind"] = "edge-traversed";
      j["edge"] = {obs.edge_from, obs.edge_to};
      break;
    case hpgame::ObservationKind::HoneypotTriggered:
      j["kind"] = "honeypot-triggered";
      j["node"] = obs.node;
      j["edge"] = {obs.edge_from, obs.edge_to};
      break;
    case hpgame::ObservationKind::NoActivity: j["kind"] = "no-activity"; break;
  }
  return j;
}

// round record serialization: timings live in a separate artifact so reruns
// stay byte-identical
json round_json(const hpgame::RoundRecord& rec, const hpgame::ScenarioConfig& cfg) {
  json j;
  j["round"] = rec.round;
  j["observations"] = json::array();
  for (const auto& obs : rec.observations) j["observations"].push_back(observation_json(obs));
  j["beliefs"] = json::array();
  for (std::size_t i = 0; i < rec.posteriors.size(); ++i) {
    j["beliefs"].push_back({{"round", rec.round},
                            {"attacker", static_cast<int>(i)},
                            {"posterior", rec.posteriors[i]},
                            {"flagged", static_cast<bool>(rec.degenerate_flags[i])}});
  }
  j["mixed"] = {{"support", rec.mixed.support},
                {"expected_placements", rec.mixed.expected_placements}};
  if (!rec.mixed.entries.empty()) {
    json entries = json::array();
    for (const auto& [placements, weight] : rec.mixed.entries)
      entries.push_back({{"placements", placements}, {"weight", weight}});
    j["mixed"]["entries"] = entries;
  }
  j["expected_defender_utility"] = rec.expected_defender_utility;
  j["expected_honeypots"] = rec.expected_honeypots;
  j["placement"] = rec.realized_placement;
  j["attackers"] = json::array();
  for (std::size_t i = 0; i < rec.outcomes.size(); ++i) {
    json a;
    a["name"] = cfg.attackers[i].name;
    a["outcome"] = hpgame::outcome_name(rec.outcomes[i]);
    if (rec.interception_nodes[i] >= 0) a["interception_node"] = rec.interception_nodes[i];
    a["action"] = rec.chosen_actions[i];
    a["utility"] = rec.realized_attacker_utilities[i];
    j["attackers"].push_back(a);
  }
  j["realized_defender_utility"] = rec.realized_defender_utility;
  j["success_rate"] = rec.success_rate;
  j["active_attackers"] = rec.active_attackers;
  return j;
}

int cmd_simulate(const CommonFlags& flags) {
  hpgame::ScenarioConfig cfg = hpgame::load_scenario_file(flags.config);
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.threads > 0) cfg.threads = flags.threads;
  const std::string resolved = hpgame::scenario_to_json_text(cfg);
  if (flags.dry_run) {
    std::cout << resolved;
    return 0;
  }
  fs::create_directories(flags.out);
  hpgame::SimulationResult result = hpgame::run_simulation(cfg);

  std::ostringstream rounds;
  for (const auto& rec : result.rounds) rounds << round_json(rec, cfg).dump() << "\n";
  write_file(fs::path(flags.out) / "rounds.jsonl", rounds.str());

  json summary;
  summary["rounds"] = result.rounds.size();
  summary["termination"] = result.termination;
  summary["cumulative_expected_utility"] = result.cumulative_expected_utility;
  summary["cumulative_realized_utility"] = result.cumulative_realized_utility;
  json rates = json::array();
  for (const auto& rec : result.rounds) rates.push_back(rec.success_rate);
  summary["success_rates"] = rates;
  json attackers = json::array();
  for (std::size_t i = 0; i < cfg.attackers.size(); ++i) {
    int last_success = -1;
    for (const auto& rec : result.rounds)
      if (rec.outcomes[i] == hpgame::AttackerOutcome::ReachedTarget) last_success = rec.round;
    attackers.push_back({{"name", cfg.attackers[i].name}, {"last_success_round", last_success}});
  }
  summary["attackers"] = attackers;
  write_file(fs::path(flags.out) / "summary.json", summary.dump(2) + "\n");

  json timings = json::array();
  for (const auto& rec : result.rounds)
    timings.push_back({{"round", rec.round},
                       {"payoff_build_s", rec.payoff_build_seconds},
                       {"solve_s", rec.solve_seconds},
                       {"total_s", rec.total_seconds}});
  write_file(fs::path(flags.out) / "timings.json", timings.dump(2) + "\n");

  write_manifest(flags.out, "simulate", resolved, cfg.seed, cfg.threads,
                 {"rounds.jsonl", "summary.json", "timings.json"});
  std::cout << "simulate: " << result.rounds.size() << " rounds, termination=" << result.termination
            << ", cumulative U_d=" << result.cumulative_expected_utility << "\n";
  return 0;
}

hpgame::ExperimentSpec load_spec(const CommonFlags& flags, const std::string& expected_kind) {
  hpgame::ExperimentSpec spec = hpgame::load_experiment_file(flags.config);
  if (spec.kind != expected_kind)
    throw hpgame::ConfigError("config kind is \"" + spec.kind + "\" but the command expects \"" +
                              expected_kind + "\"");
  if (flags.seed_set) spec.seed_base = flags.seed;
  if (flags.replications > 0) spec.replications = flags.replications;
  if (flags.threads > 0) spec.threads = flags.threads;
  return spec;
}

int run_table_command(const CommonFlags& flags, const std::string& kind) {
  hpgame::ExperimentSpec spec = load_spec(flags, kind);
  const std::string resolved = hpgame::experiment_to_json_text(spec);
  if (flags.dry_run) {
    std::cout << resolved;
    return 0;
  }
  fs::create_directories(flags.out);
  std::vector<std::string> outputs;
  if (kind == "alpha-sweep") {
    hpgame::ResultTable t = hpgame::alpha_sweep(spec);
    t.save((fs::path(flags.out) / "alpha_sweep.csv").string());
    hpgame::ResultTable p = hpgame::alpha_plateau_summary(t);
    p.save((fs::path(flags.out) / "alpha_plateau.csv").string());
    outputs = {"alpha_sweep.csv", "alpha_plateau.csv"};
    std::cout << "alpha-sweep: " << t.rows.size() << " rows\n";
  } else if (kind == "cost-sweep") {
    hpgame::ResultTable t = hpgame::cost_sweep(spec);
    t.save((fs::path(flags.out) / "cost_sweep.csv").string());
    outputs = {"cost_sweep.csv"};
    std::cout << "cost-sweep: " << t.rows.size() << " rows\n";
  } else if (kind == "baseline-compare") {
    hpgame::ResultTable t = hpgame::baseline_compare(spec);
    t.save((fs::path(flags.out) / "baseline_compare.csv").string());
    outputs = {"baseline_compare.csv"};
    std::cout << "baseline-compare: " << t.rows.size() << " rows\n";
  } else if (kind == "scalability") {
    hpgame::ScalabilityOutput out = hpgame::scalability(spec);
    out.structure.save((fs::path(flags.out) / "scalability.csv").string());
    out.timing.save((fs::path(flags.out) / "scalability_timing.csv").string());
    outputs = {"scalability.csv", "scalability_timing.csv"};
    std::cout << "scalability: " << out.structure.rows.size() << " sizes\n";
  }
  write_manifest(flags.out, kind, resolved, spec.seed_base, spec.threads, outputs);
  return 0;
}

int cmd_validate(const CommonFlags& flags) {
  const std::string text = read_file(flags.config);
  json probe = json::parse(text, nullptr, false);
  const std::string base_dir = fs::path(flags.config).parent_path().string();
  if (!probe.is_discarded() && probe.contains("kind")) {
    hpgame::ExperimentSpec spec = hpgame::experiment_from_json_text(text, base_dir);
    std::cout << hpgame::experiment_to_json_text(spec);
  } else {
    hpgame::ScenarioConfig cfg = hpgame::scenario_from_json_text(text, base_dir);
    // resolve the network too, so structural errors surface here
    hpgame::Simulation sim(cfg);
    std::cout << hpgame::scenario_to_json_text(cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-attacker Bayesian Stackelberg honeypot allocation"};
  app.require_subcommand(1);

  CommonFlags sim_flags, alpha_flags, cost_flags, base_flags, scale_flags, val_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "run one multi-round scenario");
  add_common(sim_cmd, sim_flags);
  auto* alpha_cmd = app.add_subcommand("alpha-sweep", "discount-factor sensitivity sweep");
  add_common(alpha_cmd, alpha_flags);
  auto* cost_cmd = app.add_subcommand("cost-sweep", "honeypot-cost sensitivity sweep");
  add_common(cost_cmd, cost_flags);
  auto* base_cmd = app.add_subcommand("baseline-compare", "stackelberg vs greedy vs random");
  add_common(base_cmd, base_flags);
  auto* scale_cmd = app.add_subcommand("scalability", "runtime across network sizes");
  add_common(scale_cmd, scale_flags);
  auto* val_cmd = app.add_subcommand("validate", "validate a configuration file");
  add_common(val_cmd, val_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim_flags);
    if (alpha_cmd->parsed()) return run_table_command(alpha_flags, "alpha-sweep");
    if (cost_cmd->parsed()) return run_table_command(cost_flags, "cost-sweep");
    if (base_cmd->parsed()) return run_table_command(base_flags, "baseline-compare");
    if (scale_cmd->parsed()) return run_table_command(scale_flags, "scalability");
    if (val_cmd->parsed()) return cmd_validate(val_flags);
  } catch (const hpgame::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const hpgame::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hpgame::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return 2;
  } catch (const hpgame::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
