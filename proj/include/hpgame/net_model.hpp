#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpgame {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using NodeId = int;

/// One exploit capability: symbolic id plus the effort cost paid each time an
/// edge is traversed with it.
struct Exploit {
  std::string id;
  double cost = 0.0;
};

// Catalogs are capped at 64 exploits so exploit sets fit in one mask word.
class ExploitCatalog {
 public:
  ExploitCatalog() = default;
  explicit ExploitCatalog(std::vector<Exploit> exploits);

  int size() const { return static_cast<int>(exploits_.size()); }
  const Exploit& at(int idx) const { return exploits_[static_cast<std::size_t>(idx)]; }
  const std::vector<Exploit>& all() const { return exploits_; }

  int index_of(const std::string& id) const;  // throws DomainError on unknown id
  std::uint64_t mask_of(const std::vector<std::string>& ids) const;
  std::vector<std::string> ids_in(std::uint64_t mask) const;
  std::uint64_t full_mask() const {
    int n = size();
    return n >= 64 ? ~0ULL : ((1ULL << n) - 1);
  }

  /// Cheapest cost among the exploits selected by `mask`; nullopt if empty.
  std::optional<double> min_cost(std::uint64_t mask) const;

 private:
  std::vector<Exploit> exploits_;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t exploits = 0;  // non-empty mask into the catalog
};

struct Target {
  NodeId node = 0;
  double value = 0.0;
};

/// Directed attack network: nodes 0..n-1, exploit-labeled edges, one entry
/// node, valued targets, and the distance discount alpha.
struct Network {
  int node_count = 0;
  std::vector<Edge> edges;
  NodeId entry = 0;
  std::vector<Target> targets;
  double alpha = 0.4;
  ExploitCatalog catalog;

  void validate() const;  // throws ConfigError on any structural violation
  bool is_target(NodeId v) const;
};

/// Per-attacker feasible subgraph: the subset of edges whose exploit labels
/// intersect the attacker's set, each carrying its cheapest usable cost.
struct AttackGraph {
  std::uint64_t exploit_mask = 0;
  std::vector<int> edge_indices;   // into Network.edges
  std::vector<double> edge_costs;  // aligned with edge_indices
};

struct AttackPath {
  std::vector<NodeId> nodes;       // entry first, target last
  std::vector<double> edge_costs;  // one per hop, aligned with nodes[i-1]->nodes[i]
  double total_cost = 0.0;
  int hop_count = 0;
};

/// Sum over targets of alpha^distance(v,T) * Value(T); unreachable targets
/// contribute nothing. Distances are directed hop counts on the full graph.
double node_value(const Network& net, NodeId v);

/// All node values at once (one reverse BFS per target).
std::vector<double> node_values(const Network& net);

std::optional<double> edge_cost(std::uint64_t edge_exploits, std::uint64_t attacker_exploits,
                                const ExploitCatalog& catalog);

AttackGraph derive_attack_graph(const Network& net, std::uint64_t exploit_mask);

/// K cheapest simple paths from entry to any target in `targets`, ordered by
/// (total cost, hop count, node sequence). Fewer are returned if fewer exist.
std::vector<AttackPath> enumerate_paths(const Network& net, const AttackGraph& ag, NodeId entry,
                                        const std::vector<NodeId>& targets, int k);

struct GenerationSpec {
  int node_count = 100;
  int min_edge_factor = 3;  // at least factor * n edges
  int target_count = 3;
  std::vector<double> target_values = {15.0, 10.0, 20.0};
  int min_target_depth = 6;
  int exploits_per_edge_min = 1;
  int exploits_per_edge_max = 4;
  double alpha = 0.4;
  std::vector<Exploit> catalog;  // empty -> default 10-exploit catalog
  int max_attempts = 50;
  std::string case_study_path;  // non-empty: return the bundled fixed network
};

std::vector<Exploit> default_generation_catalog();

/// Deterministic synthetic network: layered so that every target sits at BFS
/// depth >= spec.min_target_depth from the entry.
Network generate_network(std::uint64_t seed, const GenerationSpec& spec);

// JSON document round-trip (fields: nodes, edges, entry, targets, alpha, catalog)
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);
Network load_network_file(const std::string& path);

}  // namespace hpgame
