#include "hpgame/net_model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "hpgame/rng.hpp"
#include "json.hpp"

namespace hpgame {

ExploitCatalog::ExploitCatalog(std::vector<Exploit> exploits) : exploits_(std::move(exploits)) {
  if (exploits_.size() > 64) throw ConfigError("exploit catalog exceeds 64 entries");
  std::set<std::string> seen;
  for (const auto& e : exploits_) {
    if (e.cost < 0.0) throw ConfigError("exploit " + e.id + " has negative cost");
    if (!seen.insert(e.id).second) throw ConfigError("duplicate exploit id " + e.id);
  }
}

int ExploitCatalog::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (exploits_[static_cast<std::size_t>(i)].id == id) return i;
  throw DomainError("unknown exploit id " + id);
}

std::uint64_t ExploitCatalog::mask_of(const std::vector<std::string>& ids) const {
  std::uint64_t m = 0;
  for (const auto& id : ids) m |= 1ULL << index_of(id);
  return m;
}

std::vector<std::string> ExploitCatalog::ids_in(std::uint64_t mask) const {
  std::vector<std::string> out;
  for (int i = 0; i < size(); ++i)
    if (mask >> i & 1) out.push_back(exploits_[static_cast<std::size_t>(i)].id);
  return out;
}

std::optional<double> ExploitCatalog::min_cost(std::uint64_t mask) const {
  std::optional<double> best;
  for (int i = 0; i < size(); ++i) {
    if (!(mask >> i & 1)) continue;
    double c = exploits_[static_cast<std::size_t>(i)].cost;
    if (!best || c < *best) best = c;
  }
  return best;
}

bool Network::is_target(NodeId v) const {
  for (const auto& t : targets)
    if (t.node == v) return true;
  return false;
}

void Network::validate() const {
  if (node_count <= 0) throw ConfigError("network has no nodes");
  if (entry < 0 || entry >= node_count) throw ConfigError("entry node out of range");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw ConfigError("alpha must lie strictly inside (0,1), got " + std::to_string(alpha));
  if (targets.empty()) throw ConfigError("network has no targets");
  std::set<NodeId> tset;
  for (const auto& t : targets) {
    if (t.node < 0 || t.node >= node_count) throw ConfigError("target node out of range");
    if (t.value < 0.0) throw ConfigError("target value must be non-negative");
    if (!tset.insert(t.node).second) throw ConfigError("duplicate target node");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= node_count || e.to < 0 || e.to >= node_count)
      throw ConfigError("edge endpoint out of range");
    if (e.from == e.to) throw ConfigError("self-loop on node " + std::to_string(e.from));
    if (e.exploits == 0) throw ConfigError("edge with empty exploit set");
    if (e.exploits & ~catalog.full_mask()) throw ConfigError("edge exploit outside catalog");
    if (!seen.insert({e.from, e.to}).second)
      throw ConfigError("duplicate edge " + std::to_string(e.from) + "->" + std::to_string(e.to));
  }
}

namespace {

std::vector<std::vector<int>> in_edges_by_node(const Network& net) {
  std::vector<std::vector<int>> in(static_cast<std::size_t>(net.node_count));
  for (int i = 0; i < static_cast<int>(net.edges.size()); ++i)
    in[static_cast<std::size_t>(net.edges[static_cast<std::size_t>(i)].to)].push_back(i);
  return in;
}

// hop distances from every node TO `target` (reverse BFS)
std::vector<int> distances_to(const Network& net, NodeId target) {
  auto in = in_edges_by_node(net);
  std::vector<int> dist(static_cast<std::size_t>(net.node_count), -1);
  std::deque<NodeId> q;
  dist[static_cast<std::size_t>(target)] = 0;
  q.push_back(target);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    for (int ei : in[static_cast<std::size_t>(v)]) {
      NodeId u = net.edges[static_cast<std::size_t>(ei)].from;
      if (dist[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
    }
  }
  return dist;
}

double pow_int(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<double> node_values(const Network& net) {
  std::vector<double> values(static_cast<std::size_t>(net.node_count), 0.0);
  for (const auto& t : net.targets) {
    auto dist = distances_to(net, t.node);
    for (int v = 0; v < net.node_count; ++v) {
      int d = dist[static_cast<std::size_t>(v)];
      if (d >= 0) values[static_cast<std::size_t>(v)] += pow_int(net.alpha, d) * t.value;
    }
  }
  return values;
}

double node_value(const Network& net, NodeId v) {
  if (v < 0 || v >= net.node_count) throw DomainError("unknown node id " + std::to_string(v));
  double sum = 0.0;
  for (const auto& t : net.targets) {
    auto dist = distances_to(net, t.node);
    int d = dist[static_cast<std::size_t>(v)];
    if (d >= 0) sum += pow_int(net.alpha, d) * t.value;
  }
  return sum;
}

std::optional<double> edge_cost(std::uint64_t edge_exploits, std::uint64_t attacker_exploits,
                                const ExploitCatalog& catalog) {
  return catalog.min_cost(edge_exploits & attacker_exploits);
}

AttackGraph derive_attack_graph(const Network& net, std::uint64_t exploit_mask) {
  AttackGraph ag;
  ag.exploit_mask = exploit_mask;
  for (int i = 0; i < static_cast<int>(net.edges.size()); ++i) {
    const Edge& e = net.edges[static_cast<std::size_t>(i)];
    auto c = edge_cost(e.exploits, exploit_mask, net.catalog);
    if (c) {
      ag.edge_indices.push_back(i);
      ag.edge_costs.push_back(*c);
    }
  }
  return ag;
}

namespace {

struct PartialPath {
  double cost = 0.0;
  double lower_bound = 0.0;  // cost + cheapest remaining distance to any target
  std::vector<NodeId> nodes;
  std::vector<double> edge_costs;
  std::uint64_t order = 0;  // insertion tiebreak for the frontier heap
};

struct FrontierCmp {
  bool operator()(const PartialPath& a, const PartialPath& b) const {
    if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
    return a.order > b.order;
  }
};

bool path_less(const AttackPath& a, const AttackPath& b) {
  if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
  if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count;
  return a.nodes < b.nodes;
}

}  // namespace

std::vector<AttackPath> enumerate_paths(const Network& net, const AttackGraph& ag, NodeId entry,
                                        const std::vector<NodeId>& targets, int k) {
  if (k < 1) throw DomainError("enumerate_paths requires k >= 1");

  std::vector<std::vector<std::pair<NodeId, double>>> adj(static_cast<std::size_t>(net.node_count));
  std::vector<std::vector<std::pair<NodeId, double>>> radj(static_cast<std::size_t>(net.node_count));
  for (std::size_t i = 0; i < ag.edge_indices.size(); ++i) {
    const Edge& e = net.edges[static_cast<std::size_t>(ag.edge_indices[i])];
    adj[static_cast<std::size_t>(e.from)].push_back({e.to, ag.edge_costs[i]});
    radj[static_cast<std::size_t>(e.to)].push_back({e.from, ag.edge_costs[i]});
  }
  for (auto& lst : adj)
    std::sort(lst.begin(), lst.end());

  // admissible heuristic: cheapest walk cost from v to the nearest target
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> h(static_cast<std::size_t>(net.node_count), inf);
  {
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (NodeId t : targets) {
      h[static_cast<std::size_t>(t)] = 0.0;
      pq.push({0.0, t});
    }
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > h[static_cast<std::size_t>(v)]) continue;
      for (auto [u, c] : radj[static_cast<std::size_t>(v)]) {
        if (d + c < h[static_cast<std::size_t>(u)]) {
          h[static_cast<std::size_t>(u)] = d + c;
          pq.push({d + c, u});
        }
      }
    }
  }
  if (h[static_cast<std::size_t>(entry)] == inf) return {};

  std::vector<bool> is_target(static_cast<std::size_t>(net.node_count), false);
  for (NodeId t : targets) is_target[static_cast<std::size_t>(t)] = true;

  std::priority_queue<PartialPath, std::vector<PartialPath>, FrontierCmp> frontier;
  std::uint64_t order = 0;
  {
    PartialPath start;
    start.lower_bound = h[static_cast<std::size_t>(entry)];
    start.nodes = {entry};
    start.order = order++;
    frontier.push(std::move(start));
  }

  std::vector<AttackPath> found;
  // Expansion cap guards pathological graphs; ample for desk-scale inputs.
  const std::uint64_t expansion_cap = 2'000'000;
  std::uint64_t expansions = 0;

  auto kth_cost = [&]() {
    return found.size() < static_cast<std::size_t>(k) ? inf
                                                      : found[static_cast<std::size_t>(k) - 1].total_cost;
  };

  while (!frontier.empty() && expansions < expansion_cap) {
    PartialPath p = frontier.top();
    frontier.pop();
    ++expansions;
    // strictly worse than the current k-th best: no completion can matter
    if (p.lower_bound > kth_cost() + 1e-12) break;

    NodeId v = p.nodes.back();
    if (is_target[static_cast<std::size_t>(v)] && p.nodes.size() > 1) {
      AttackPath ap;
      ap.nodes = p.nodes;
      ap.edge_costs = p.edge_costs;
      ap.total_cost = p.cost;
      ap.hop_count = static_cast<int>(p.nodes.size()) - 1;
      found.push_back(std::move(ap));
      std::sort(found.begin(), found.end(), path_less);
      continue;  // targets are terminal for attack paths
    }

    for (auto [u, c] : adj[static_cast<std::size_t>(v)]) {
      if (std::find(p.nodes.begin(), p.nodes.end(), u) != p.nodes.end()) continue;  // simple
      double hc = h[static_cast<std::size_t>(u)];
      if (hc == inf) continue;
      PartialPath q;
      q.cost = p.cost + c;
      q.lower_bound = q.cost + hc;
      q.nodes = p.nodes;
      q.nodes.push_back(u);
      q.edge_costs = p.edge_costs;
      q.edge_costs.push_back(c);
      q.order = order++;
      if (q.lower_bound <= kth_cost() + 1e-12) frontier.push(std::move(q));
    }
  }

  if (found.size() > static_cast<std::size_t>(k)) found.resize(static_cast<std::size_t>(k));
  return found;
}

std::vector<Exploit> default_generation_catalog() {
  return {{"g01", 9.0}, {"g02", 7.5}, {"g03", 2.5}, {"g04", 4.0}, {"g05", 3.0},
          {"g06", 1.5}, {"g07", 5.0}, {"g08", 1.0}, {"g09", 6.0}, {"g10", 2.0}};
}

namespace {

Network try_generate(std::uint64_t seed, std::uint64_t attempt, const GenerationSpec& spec) {
  Rng rng(seed, /*stream=*/0);
  for (std::uint64_t i = 0; i < attempt * 1000; ++i) rng.next_u64();  // per-attempt substream

  const int n = spec.node_count;
  Network net;
  net.node_count = n;
  net.alpha = spec.alpha;
  net.entry = 0;
  net.catalog = ExploitCatalog(spec.catalog.empty() ? default_generation_catalog() : spec.catalog);

  // Assign BFS layers: entry alone in layer 0, every other layer non-empty,
  // then tree edges from the previous layer pin each node's BFS depth.
  const int depth = spec.min_target_depth;
  const int layer_count = depth + 1 + rng.next_int(0, 2);
  if (n < layer_count + spec.target_count - 1)
    throw GenerationError("node count too small for requested target depth");

  std::vector<int> layer_of(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<NodeId>> layers(static_cast<std::size_t>(layer_count));
  layers[0] = {0};
  for (int l = 1; l < layer_count; ++l) {
    layers[static_cast<std::size_t>(l)].push_back(l);  // one guaranteed node per layer
    layer_of[static_cast<std::size_t>(l)] = l;
  }
  for (NodeId v = layer_count; v < n; ++v) {
    int l = rng.next_int(1, layer_count - 1);
    layers[static_cast<std::size_t>(l)].push_back(v);
    layer_of[static_cast<std::size_t>(v)] = l;
  }

  std::set<std::pair<NodeId, NodeId>> edge_set;
  std::vector<std::pair<NodeId, NodeId>> edge_list;
  auto add_edge = [&](NodeId u, NodeId v) {
    if (u == v || v == net.entry) return false;
    if (!edge_set.insert({u, v}).second) return false;
    edge_list.push_back({u, v});
    return true;
  };

  // tree edges keep BFS depth equal to layer index
  for (int l = 1; l < layer_count; ++l) {
    const auto& prev = layers[static_cast<std::size_t>(l - 1)];
    for (NodeId v : layers[static_cast<std::size_t>(l)]) {
      NodeId parent = prev[static_cast<std::size_t>(rng.next_below(prev.size()))];
      add_edge(parent, v);
    }
  }

  // extra edges may not skip layers forward, so depths stay pinned
  const int want_edges = spec.min_edge_factor * n;
  std::uint64_t stall = 0;
  while (static_cast<int>(edge_list.size()) < want_edges && stall < 50ULL * static_cast<std::uint64_t>(want_edges)) {
    NodeId u = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
    NodeId v = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (layer_of[static_cast<std::size_t>(v)] > layer_of[static_cast<std::size_t>(u)] + 1) {
      ++stall;
      continue;
    }
    if (!add_edge(u, v)) ++stall;
  }
  if (static_cast<int>(edge_list.size()) < want_edges)
    throw GenerationError("could not reach requested edge count");

  // targets drawn from the deepest layers, one per node, no entry
  std::vector<NodeId> deep;
  for (int l = depth; l < layer_count; ++l)
    for (NodeId v : layers[static_cast<std::size_t>(l)]) deep.push_back(v);
  if (static_cast<int>(deep.size()) < spec.target_count)
    throw GenerationError("not enough nodes at required target depth");
  std::sort(deep.begin(), deep.end());
  auto picks = rng.sample_indices(static_cast<int>(deep.size()), spec.target_count);
  for (int i = 0; i < spec.target_count; ++i) {
    double value = spec.target_values.empty()
                       ? 10.0
                       : spec.target_values[static_cast<std::size_t>(i) % spec.target_values.size()];
    net.targets.push_back({deep[static_cast<std::size_t>(picks[static_cast<std::size_t>(i)])], value});
  }

  // exploit labels: 1..4 distinct exploits per edge
  const int cat_n = net.catalog.size();
  for (auto [u, v] : edge_list) {
    int cnt = rng.next_int(spec.exploits_per_edge_min, spec.exploits_per_edge_max);
    cnt = std::min(cnt, cat_n);
    auto idx = rng.sample_indices(cat_n, cnt);
    std::uint64_t mask = 0;
    for (int i : idx) mask |= 1ULL << i;
    net.edges.push_back({u, v, mask});
  }

  net.validate();
  return net;
}

}  // namespace

Network generate_network(std::uint64_t seed, const GenerationSpec& spec) {
  if (!spec.case_study_path.empty()) return load_network_file(spec.case_study_path);
  if (spec.node_count < spec.min_target_depth + 2)
    throw ConfigError("node count must be at least min_target_depth + 2");
  if (spec.exploits_per_edge_min < 1 || spec.exploits_per_edge_max < spec.exploits_per_edge_min)
    throw ConfigError("invalid exploits-per-edge range");
  std::string last_err;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    try {
      return try_generate(seed, static_cast<std::uint64_t>(attempt), spec);
    } catch (const GenerationError& e) {
      last_err = e.what();
    }
  }
  throw GenerationError("network generation failed after " + std::to_string(spec.max_attempts) +
                        " attempts: " + last_err);
}

std::string network_to_json(const Network& net) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (NodeId v = 0; v < net.node_count; ++v) j["nodes"].push_back(v);
  j["edges"] = nlohmann::json::array();
  for (const auto& e : net.edges) {
    nlohmann::json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["exploits"] = net.catalog.ids_in(e.exploits);
    j["edges"].push_back(je);
  }
  j["entry"] = net.entry;
  j["targets"] = nlohmann::json::array();
  for (const auto& t : net.targets) j["targets"].push_back({{"node", t.node}, {"value", t.value}});
  j["alpha"] = net.alpha;
  j["catalog"] = nlohmann::json::array();
  for (const auto& e : net.catalog.all()) j["catalog"].push_back({{"id", e.id}, {"cost", e.cost}});
  return j.dump(2) + "\n";
}

Network network_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("network JSON parse error: ") + e.what());
  }
  try {
    Network net;
    std::vector<Exploit> cat;
    for (const auto& je : j.at("catalog"))
      cat.push_back({je.at("id").get<std::string>(), je.at("cost").get<double>()});
    net.catalog = ExploitCatalog(std::move(cat));
    int max_node = -1;
    for (const auto& jn : j.at("nodes")) max_node = std::max(max_node, jn.get<int>());
    net.node_count = max_node + 1;
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.from = je.at("from").get<int>();
      e.to = je.at("to").get<int>();
      e.exploits = net.catalog.mask_of(je.at("exploits").get<std::vector<std::string>>());
      net.edges.push_back(e);
    }
    net.entry = j.at("entry").get<int>();
    for (const auto& jt : j.at("targets"))
      net.targets.push_back({jt.at("node").get<int>(), jt.at("value").get<double>()});
    net.alpha = j.at("alpha").get<double>();
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("network JSON schema error: ") + e.what());
  }
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open network file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

}  // namespace hpgame
