#pragma once

// Independent oracles for the solver and path-enumeration tests. Everything
// here is deliberate brute force and stays off the production code paths it
// checks (the big-M enumerator shares only the raw LP substrate).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hpgame/game_core.hpp"
#include "hpgame/lp.hpp"
#include "hpgame/net_model.hpp"
#include "hpgame/rng.hpp"

namespace hpgame::oracles {

// Every simple path from entry to any target, by exhaustive DFS. Usable only
// on small graphs.
inline std::vector<AttackPath> exhaustive_simple_paths(const Network& net, const AttackGraph& ag,
                                                       NodeId entry,
                                                       const std::vector<NodeId>& targets) {
  std::vector<std::vector<std::pair<NodeId, double>>> adj(static_cast<std::size_t>(net.node_count));
  for (std::size_t i = 0; i < ag.edge_indices.size(); ++i) {
    const Edge& e = net.edges[static_cast<std::size_t>(ag.edge_indices[i])];
    adj[static_cast<std::size_t>(e.from)].push_back({e.to, ag.edge_costs[i]});
  }
  std::vector<bool> is_target(static_cast<std::size_t>(net.node_count), false);
  for (NodeId t : targets) is_target[static_cast<std::size_t>(t)] = true;

  std::vector<AttackPath> out;
  std::vector<NodeId> stack = {entry};
  std::vector<double> costs;
  std::vector<bool> on_path(static_cast<std::size_t>(net.node_count), false);
  on_path[static_cast<std::size_t>(entry)] = true;

  std::function<void()> dfs = [&]() {
    NodeId v = stack.back();
    if (is_target[static_cast<std::size_t>(v)] && stack.size() > 1) {
      AttackPath p;
      p.nodes = stack;
      p.edge_costs = costs;
      for (double c : costs) p.total_cost += c;
      p.hop_count = static_cast<int>(stack.size()) - 1;
      out.push_back(p);
      return;  // paths terminate at the first target reached
    }
    for (auto [u, c] : adj[static_cast<std::size_t>(v)]) {
      if (on_path[static_cast<std::size_t>(u)]) continue;
      on_path[static_cast<std::size_t>(u)] = true;
      stack.push_back(u);
      costs.push_back(c);
      dfs();
      stack.pop_back();
      costs.pop_back();
      on_path[static_cast<std::size_t>(u)] = false;
    }
  };
  dfs();
  std::sort(out.begin(), out.end(), [](const AttackPath& a, const AttackPath& b) {
    if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
    if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count;
    return a.nodes < b.nodes;
  });
  return out;
}

// --- brute-force Stackelberg oracle -----------------------------------------

namespace detail {

inline double expected_def(const PayoffTensor& t, const std::vector<double>& x, std::size_t p) {
  const std::size_t joint = t.joint_action_count();
  double v = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) v += x[d] * t.defender_payoff[d * joint + p];
  return v;
}

inline double expected_att(const PayoffTensor& t, const std::vector<double>& x, int i,
                           std::size_t p) {
  const std::size_t joint = t.joint_action_count();
  const auto& payoff = t.attacker_payoff[static_cast<std::size_t>(i)];
  double v = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) v += x[d] * payoff[d * joint + p];
  return v;
}

// best defender value over joint profiles that are attacker-stable at x
// (each attacker unilaterally optimal), ties resolved in the defender's favor
inline bool best_stable_value(const PayoffTensor& t, const std::vector<double>& x, double* value) {
  const std::size_t joint = t.joint_action_count();
  const int m = t.attacker_count();
  bool any = false;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < joint; ++p) {
    auto actions = t.profile_from_index(p);
    bool stable = true;
    for (int i = 0; i < m && stable; ++i) {
      const double own = expected_att(t, x, i, p);
      const int n_actions = static_cast<int>(t.action_lists[static_cast<std::size_t>(i)].size());
      for (int alt = 0; alt < n_actions; ++alt) {
        if (alt == actions[static_cast<std::size_t>(i)]) continue;
        auto dev = actions;
        dev[static_cast<std::size_t>(i)] = alt;
        if (expected_att(t, x, i, t.profile_index(dev)) > own + 1e-9) {
          stable = false;
          break;
        }
      }
    }
    if (stable) {
      any = true;
      best = std::max(best, expected_def(t, x, p));
    }
  }
  if (any) *value = best;
  return any;
}

// enumerate the defender simplex at a fixed resolution inside a box
template <typename Fn>
void walk_simplex(std::size_t dims, int units, const std::vector<int>& lo,
                  const std::vector<int>& hi, Fn&& fn) {
  std::vector<int> w(dims, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t d, int remaining) {
    if (d + 1 == dims) {
      if (remaining >= lo[d] && remaining <= hi[d]) {
        w[d] = remaining;
        fn(w);
      }
      return;
    }
    const int from = std::max(lo[d], 0);
    const int to = std::min(hi[d], remaining);
    for (int k = from; k <= to; ++k) {
      w[d] = k;
      rec(d + 1, remaining - k);
    }
  };
  rec(0, units);
}

}  // namespace detail

/// Grid search over defender mixed strategies: the stated 0.01-step coarse
/// pass plus two local refinements so the comparison tolerance measures the
/// solver, not the lattice. Returns the best stable defender value found.
inline double stackelberg_grid_oracle(const PayoffTensor& t) {
  const std::size_t nd = t.defender_strategies.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x(nd, 0.0);

  auto scan = [&](int units, const std::vector<int>& lo, const std::vector<int>& hi) {
    detail::walk_simplex(nd, units, lo, hi, [&](const std::vector<int>& w) {
      std::vector<double> x(nd);
      for (std::size_t d = 0; d < nd; ++d)
        x[d] = static_cast<double>(w[d]) / static_cast<double>(units);
      double value;
      if (detail::best_stable_value(t, x, &value) && value > best) {
        best = value;
        best_x = x;
      }
    });
  };

  // coarse pass: step 0.01
  scan(100, std::vector<int>(nd, 0), std::vector<int>(nd, 100));

  // refinement passes: step 1e-3 then 1e-4 around the incumbent
  for (int scale : {1000, 10000}) {
    if (best == -std::numeric_limits<double>::infinity()) break;
    const int radius = scale / 50;  // 0.02 around the incumbent
    std::vector<int> lo(nd), hi(nd);
    for (std::size_t d = 0; d < nd; ++d) {
      const int center = static_cast<int>(std::lround(best_x[d] * scale));
      lo[d] = std::max(0, center - radius);
      hi[d] = std::min(scale, center + radius);
    }
    scan(scale, lo, hi);
  }
  return best;
}

/// Exhaustive big-M route: branch on every z assignment, instantiating the
/// full MILP constraint system with z as constants, and take the best branch.
inline double bigm_enumeration_value(const PayoffTensor& t, double beta) {
  const std::size_t nd = t.defender_strategies.size();
  const std::size_t joint = t.joint_action_count();
  const int m = t.attacker_count();

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t chosen = 0; chosen < joint; ++chosen) {
    // variables: x_0..x_{nd-1}, U_d (free)
    LinearProgram lp;
    lp.objective.assign(nd + 1, 0.0);
    lp.objective[nd] = 1.0;
    lp.free_vars.assign(nd + 1, false);
    lp.free_vars[nd] = true;

    LpRow simplex;
    simplex.coeffs.assign(nd + 1, 0.0);
    for (std::size_t d = 0; d < nd; ++d) simplex.coeffs[d] = 1.0;
    simplex.rel = Relation::EQ;
    simplex.rhs = 1.0;
    lp.rows.push_back(simplex);

    for (std::size_t q = 0; q < joint; ++q) {
      const double slack = q == chosen ? 0.0 : beta;
      // U_d - sum_d x_d R_d(d,q) <= beta (1 - z_q)
      LpRow def;
      def.coeffs.assign(nd + 1, 0.0);
      for (std::size_t d = 0; d < nd; ++d) def.coeffs[d] = -t.defender_payoff[d * joint + q];
      def.coeffs[nd] = 1.0;
      def.rel = Relation::LE;
      def.rhs = slack;
      lp.rows.push_back(def);

      auto actions = t.profile_from_index(q);
      for (int i = 0; i < m; ++i) {
        const auto& payoff = t.attacker_payoff[static_cast<std::size_t>(i)];
        const int n_actions = static_cast<int>(t.action_lists[static_cast<std::size_t>(i)].size());
        for (int alt = 0; alt < n_actions; ++alt) {
          if (alt == actions[static_cast<std::size_t>(i)]) continue;
          auto dev = actions;
          dev[static_cast<std::size_t>(i)] = alt;
          const std::size_t dq = t.profile_index(dev);
          // sum x [R_ai(.,q) - R_ai(.,dev)] >= -beta (1 - z_q)
          LpRow row;
          row.coeffs.assign(nd + 1, 0.0);
          for (std::size_t d = 0; d < nd; ++d)
            row.coeffs[d] = payoff[d * joint + q] - payoff[d * joint + dq];
          row.rel = Relation::GE;
          row.rhs = -slack;
          lp.rows.push_back(row);
        }
      }
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Optimal) best = std::max(best, sol.objective);
  }
  return best;
}

/// Random payoff tensor with the given shape; strategies and actions carry
/// placeholder content (solver work needs only shapes and payoffs).
inline PayoffTensor random_tensor(Rng& rng, int nd, const std::vector<int>& action_counts,
                                  double lo, double hi) {
  PayoffTensor t;
  for (int d = 0; d < nd; ++d) {
    DefenderPureStrategy s;
    for (int b = 0; b < d; ++b) s.placements.push_back(b + 1);
    t.defender_strategies.push_back(s);
  }
  for (int count : action_counts) {
    std::vector<AttackerAction> list;
    for (int a = 0; a < count; ++a) {
      AttackerAction act;
      act.path.nodes = {0, a + 1};
      act.path.edge_costs = {1.0};
      act.path.total_cost = 1.0;
      act.path.hop_count = 1;
      list.push_back(act);
    }
    t.action_lists.push_back(list);
  }
  const std::size_t cells = t.cell_count();
  t.defender_payoff.resize(cells);
  for (auto& v : t.defender_payoff) v = rng.next_double(lo, hi);
  t.attacker_payoff.assign(t.action_lists.size(), std::vector<double>(cells));
  for (auto& ap : t.attacker_payoff)
    for (auto& v : ap) v = rng.next_double(lo, hi);
  return t;
}

}  // namespace hpgame::oracles
