#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>
#include <set>

#include "hpgame/net_model.hpp"
#include "hpgame/rng.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace hpgame;
using testutil::EdgeSpec;
using testutil::weighted_network;

namespace {

ExploitCatalog phi_catalog() {
  return ExploitCatalog({{"phi1", 9.0},
                         {"phi2", 7.5},
                         {"phi3", 2.5},
                         {"phi4", 4.0},
                         {"phi5", 3.0},
                         {"phi6", 1.5},
                         {"phi7", 5.0},
                         {"phi8", 1.0}});
}

std::vector<int> bfs_depths(const Network& net) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(net.node_count));
  for (const auto& e : net.edges) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
  std::vector<int> depth(static_cast<std::size_t>(net.node_count), -1);
  std::deque<NodeId> q{net.entry};
  depth[static_cast<std::size_t>(net.entry)] = 0;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop_front();
    for (NodeId u : adj[static_cast<std::size_t>(v)]) {
      if (depth[static_cast<std::size_t>(u)] < 0) {
        depth[static_cast<std::size_t>(u)] = depth[static_cast<std::size_t>(v)] + 1;
        q.push_back(u);
      }
    }
  }
  return depth;
}

bool path_ordering_ok(const std::vector<AttackPath>& paths) {
  for (std::size_t i = 1; i < paths.size(); ++i) {
    const auto& a = paths[i - 1];
    const auto& b = paths[i];
    auto ta = std::make_tuple(a.total_cost, a.hop_count, a.nodes);
    auto tb = std::make_tuple(b.total_cost, b.hop_count, b.nodes);
    if (!(ta < tb)) return false;
  }
  return true;
}

Network random_small_network(Rng& rng, int n) {
  // random digraph with varied costs, target = last node
  std::vector<EdgeSpec> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (rng.next_double() < 0.35)
        edges.push_back({u, v, 0.5 + static_cast<double>(rng.next_int(1, 8)) / 2.0});
    }
  }
  if (edges.empty()) edges.push_back({0, n - 1, 1.0});
  return weighted_network(n, edges, 0, {{n - 1, 10.0}});
}

}  // namespace

TEST_CASE("node_value matches the discounted-sum definition") {
  // chain 0 -> 1 -> 2, targets at 1 (value 15) and 2 (value 10)
  Network net =
      weighted_network(3, {{0, 1, 1.0}, {1, 2, 1.0}}, 0, {{1, 15.0}, {2, 10.0}}, 0.4);
  CHECK(node_value(net, 0) == doctest::Approx(0.4 * 15 + 0.16 * 10).epsilon(1e-12));
  CHECK(node_value(net, 0) == doctest::Approx(7.6).epsilon(1e-12));

  // a target node at distance zero keeps its own full value
  Network single = weighted_network(2, {{0, 1, 1.0}}, 0, {{1, 20.0}}, 0.4);
  CHECK(node_value(single, 1) == doctest::Approx(20.0));
  CHECK(node_value(single, 0) == doctest::Approx(8.0));

  CHECK_THROWS_AS(node_value(single, 99), DomainError);
}

TEST_CASE("node_value: unreachable targets contribute nothing") {
  Network net = weighted_network(3, {{0, 1, 1.0}, {0, 2, 1.0}}, 0, {{2, 10.0}}, 0.5);
  CHECK(node_value(net, 1) == doctest::Approx(0.0));
  CHECK(node_value(net, 0) == doctest::Approx(5.0));
}

TEST_CASE("node_value is monotone in alpha at distance >= 1") {
  Network net =
      weighted_network(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, 0, {{3, 12.0}}, 0.2);
  double prev = -1.0;
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    net.alpha = a;
    double v = node_value(net, 0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("edge_cost picks the cheapest shared exploit") {
  ExploitCatalog cat = phi_catalog();
  const auto mask = [&](std::vector<std::string> ids) { return cat.mask_of(ids); };
  const auto mid = mask({"phi3", "phi4", "phi5", "phi6", "phi7", "phi8"});
  const auto low = mask({"phi3", "phi5", "phi6", "phi8"});

  auto c1 = edge_cost(mask({"phi4", "phi7"}), mid, cat);
  REQUIRE(c1.has_value());
  CHECK(*c1 == doctest::Approx(4.0));

  auto c2 = edge_cost(mask({"phi8"}), mask({"phi2", "phi8"}), cat);
  REQUIRE(c2.has_value());
  CHECK(*c2 == doctest::Approx(1.0));

  CHECK_FALSE(edge_cost(mask({"phi1"}), low, cat).has_value());
}

TEST_CASE("derive_attack_graph keeps exactly the traversable edges") {
  ExploitCatalog cat = phi_catalog();
  Network net;
  net.node_count = 3;
  net.entry = 0;
  net.targets = {{2, 10.0}};
  net.alpha = 0.4;
  net.catalog = cat;
  net.edges = {{0, 1, cat.mask_of({"phi4", "phi7"})}, {1, 2, cat.mask_of({"phi8"})}};
  net.validate();

  const auto low = cat.mask_of({"phi3", "phi5", "phi6", "phi8"});
  AttackGraph ag_low = derive_attack_graph(net, low);
  REQUIRE(ag_low.edge_indices.size() == 1);  // the {phi4,phi7} edge is excluded
  CHECK(net.edges[static_cast<std::size_t>(ag_low.edge_indices[0])].to == 2);

  AttackGraph ag_full = derive_attack_graph(net, cat.full_mask());
  CHECK(ag_full.edge_indices.size() == net.edges.size());

  AttackGraph ag_empty = derive_attack_graph(net, 0);
  CHECK(ag_empty.edge_indices.empty());
}

TEST_CASE("derive_attack_graph is monotone in the exploit set") {
  Rng rng(7, 0);
  ExploitCatalog cat = phi_catalog();
  for (int trial = 0; trial < 50; ++trial) {
    Network net;
    net.node_count = 5;
    net.entry = 0;
    net.targets = {{4, 5.0}};
    net.alpha = 0.4;
    net.catalog = cat;
    for (int u = 0; u < 5; ++u)
      for (int v = 0; v < 5; ++v) {
        if (u == v || rng.next_double() < 0.5) continue;
        std::uint64_t m = rng.next_u64() & cat.full_mask();
        if (m) net.edges.push_back({u, v, m});
      }
    if (net.edges.empty()) continue;
    net.validate();

    std::uint64_t big = rng.next_u64() & cat.full_mask();
    std::uint64_t small = big & rng.next_u64();
    AttackGraph g_small = derive_attack_graph(net, small);
    AttackGraph g_big = derive_attack_graph(net, big);
    std::set<int> big_edges(g_big.edge_indices.begin(), g_big.edge_indices.end());
    for (std::size_t i = 0; i < g_small.edge_indices.size(); ++i) {
      CHECK(big_edges.count(g_small.edge_indices[i]) == 1);
      for (std::size_t j = 0; j < g_big.edge_indices.size(); ++j)
        if (g_big.edge_indices[j] == g_small.edge_indices[i])
          CHECK(g_big.edge_costs[j] <= g_small.edge_costs[i] + 1e-12);
    }
  }
}

TEST_CASE("enumerate_paths: unique path on a line graph") {
  Network net = weighted_network(3, {{0, 1, 1.0}, {1, 2, 1.0}}, 0, {{2, 10.0}});
  AttackGraph ag = derive_attack_graph(net, net.catalog.full_mask());
  auto paths = enumerate_paths(net, ag, 0, {2}, 5);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].total_cost == doctest::Approx(2.0));
  CHECK(paths[0].hop_count == 2);
  CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(paths[0].edge_costs == std::vector<double>{1.0, 1.0});
}

TEST_CASE("enumerate_paths: diamond ordering by cost") {
  Network net =
      weighted_network(4, {{0, 1, 1.0}, {1, 3, 1.0}, {0, 2, 3.0}, {2, 3, 1.0}}, 0, {{3, 10.0}});
  AttackGraph ag = derive_attack_graph(net, net.catalog.full_mask());
  auto paths = enumerate_paths(net, ag, 0, {3}, 5);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].total_cost == doctest::Approx(2.0));
  CHECK(paths[1].total_cost == doctest::Approx(4.0));
}

TEST_CASE("enumerate_paths agrees with exhaustive enumeration on small graphs") {
  Rng rng(11, 0);
  for (int trial = 0; trial < 60; ++trial) {
    Network net = random_small_network(rng, 4 + static_cast<int>(rng.next_below(5)));
    AttackGraph ag = derive_attack_graph(net, net.catalog.full_mask());
    auto oracle = oracles::exhaustive_simple_paths(net, ag, net.entry, {net.targets[0].node});
    auto all = enumerate_paths(net, ag, net.entry, {net.targets[0].node},
                               static_cast<int>(oracle.size()) + 10);
    REQUIRE(all.size() == oracle.size());
    CHECK(path_ordering_ok(all));
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(all[i].nodes == oracle[i].nodes);
      CHECK(all[i].total_cost == doctest::Approx(oracle[i].total_cost).epsilon(1e-12));
    }
    if (!oracle.empty()) {
      // K=1 returns exactly the minimum under the full ordering
      auto top = enumerate_paths(net, ag, net.entry, {net.targets[0].node}, 1);
      REQUIRE(top.size() == 1);
      CHECK(top[0].nodes == oracle[0].nodes);
    }
  }
}

TEST_CASE("enumerate_paths: empty result when no target reachable") {
  Network net = weighted_network(3, {{0, 1, 1.0}}, 0, {{2, 10.0}});
  AttackGraph ag = derive_attack_graph(net, net.catalog.full_mask());
  CHECK(enumerate_paths(net, ag, 0, {2}, 3).empty());
}

TEST_CASE("generate_network satisfies the structural contract") {
  GenerationSpec spec;  // defaults: n=100, 3n edges, 3 targets, depth >= 6
  Network net = generate_network(424242, spec);
  CHECK(net.node_count == 100);
  CHECK(net.edges.size() >= 300);
  CHECK(net.targets.size() == 3);
  auto depth = bfs_depths(net);
  for (const auto& t : net.targets) {
    REQUIRE(depth[static_cast<std::size_t>(t.node)] >= 0);
    CHECK(depth[static_cast<std::size_t>(t.node)] >= 6);
  }
  for (const auto& e : net.edges) {
    int bits = 0;
    for (int i = 0; i < 64; ++i) bits += static_cast<int>(e.exploits >> i & 1);
    CHECK(bits >= 1);
    CHECK(bits <= 4);
  }
}

TEST_CASE("generate_network is deterministic and honors constraints across seeds") {
  GenerationSpec small;
  small.node_count = 30;
  small.min_target_depth = 4;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Network net = generate_network(seed, small);
    CHECK(net.edges.size() >= 90);
    auto depth = bfs_depths(net);
    for (const auto& t : net.targets) CHECK(depth[static_cast<std::size_t>(t.node)] >= 4);
  }
  Network a = generate_network(99, small);
  Network b = generate_network(99, small);
  CHECK(network_to_json(a) == network_to_json(b));
}

TEST_CASE("generate_network rejects impossible requests") {
  GenerationSpec spec;
  spec.node_count = 5;
  spec.min_target_depth = 6;
  CHECK_THROWS_AS(generate_network(1, spec), ConfigError);
}

TEST_CASE("case-study mode returns the bundled fixed network") {
  GenerationSpec spec;
  spec.case_study_path = testutil::data_path("case_study.json");
  Network net = generate_network(7, spec);
  CHECK(net.node_count == 15);
  CHECK(net.edges.size() == 21);
  CHECK(net.entry == 0);
  REQUIRE(net.targets.size() == 3);
  CHECK(net.targets[0].node == 12);
  CHECK(net.targets[0].value == doctest::Approx(15.0));
  CHECK(net.targets[1].node == 13);
  CHECK(net.targets[1].value == doctest::Approx(10.0));
  CHECK(net.targets[2].node == 14);
  CHECK(net.targets[2].value == doctest::Approx(20.0));
}

TEST_CASE("case-study valuations support the sensitivity regimes") {
  Network net = load_network_file(testutil::data_path("case_study.json"));

  auto values = node_values(net);  // alpha = 0.4
  CHECK(values[10] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(values[11] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(values[8] == doctest::Approx(7.28).epsilon(1e-12));
  CHECK(values[9] == doctest::Approx(7.2).epsilon(1e-12));
  CHECK(values[7] == doctest::Approx(5.6).epsilon(1e-12));

  // below alpha = 0.4 no non-target node clears twice the bundled honeypot
  // cost, which is what empties the deployment pool
  for (double alpha : {0.1, 0.2, 0.3}) {
    net.alpha = alpha;
    auto v = node_values(net);
    for (NodeId n = 1; n < net.node_count; ++n) {
      if (net.is_target(n)) continue;
      CHECK(v[static_cast<std::size_t>(n)] <= 6.0 + 1e-9);
    }
  }
}

TEST_CASE("every skill level can reach T1 and T3 on the bundled network") {
  Network net = load_network_file(testutil::data_path("case_study.json"));
  const auto low = net.catalog.mask_of({"phi3", "phi5", "phi6", "phi8"});
  const auto mid = net.catalog.mask_of({"phi3", "phi4", "phi5", "phi6", "phi7", "phi8"});
  for (std::uint64_t mask : {low, mid, net.catalog.full_mask()}) {
    AttackGraph ag = derive_attack_graph(net, mask);
    CHECK_FALSE(enumerate_paths(net, ag, 0, {14}, 1).empty());
    CHECK_FALSE(enumerate_paths(net, ag, 0, {12}, 1).empty());
  }
}

TEST_CASE("network JSON round-trips bit-exactly") {
  Network net = load_network_file(testutil::data_path("case_study.json"));
  std::string once = network_to_json(net);
  Network back = network_from_json(once);
  std::string twice = network_to_json(back);
  CHECK(once == twice);

  GenerationSpec small;
  small.node_count = 20;
  small.min_target_depth = 3;
  Network gen = generate_network(5, small);
  CHECK(network_to_json(network_from_json(network_to_json(gen))) == network_to_json(gen));
}

TEST_CASE("network validation rejects malformed structures") {
  Network net = weighted_network(3, {{0, 1, 1.0}, {1, 2, 1.0}}, 0, {{2, 10.0}});
  Network bad = net;
  bad.alpha = 1.2;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("(0,1)"), ConfigError);
  bad = net;
  bad.edges.push_back({1, 1, 1});
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = net;
  bad.edges[0].exploits = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = net;
  bad.entry = 17;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
