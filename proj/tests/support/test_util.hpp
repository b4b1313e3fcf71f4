#pragma once

#include <string>
#include <vector>

#include "hpgame/net_model.hpp"

namespace hpgame::testutil {

// catalog of uniformly-priced exploits e0..e{n-1}
inline ExploitCatalog unit_catalog(int n = 1, double cost = 1.0) {
  std::vector<Exploit> ex;
  for (int i = 0; i < n; ++i) ex.push_back({"e" + std::to_string(i), cost});
  return ExploitCatalog(ex);
}

struct EdgeSpec {
  NodeId from;
  NodeId to;
  double cost;
};

// network whose edges each carry one private exploit priced as given
inline Network weighted_network(int nodes, const std::vector<EdgeSpec>& edges, NodeId entry,
                                const std::vector<Target>& targets, double alpha = 0.4) {
  Network net;
  net.node_count = nodes;
  net.entry = entry;
  net.targets = targets;
  net.alpha = alpha;
  std::vector<Exploit> ex;
  for (std::size_t i = 0; i < edges.size(); ++i)
    ex.push_back({"e" + std::to_string(i), edges[i].cost});
  net.catalog = ExploitCatalog(ex);
  for (std::size_t i = 0; i < edges.size(); ++i)
    net.edges.push_back({edges[i].from, edges[i].to, 1ULL << i});
  net.validate();
  return net;
}

inline std::string data_path(const std::string& name) {
  return std::string(HPGAME_DATA_DIR) + "/" + name;
}

}  // namespace hpgame::testutil
