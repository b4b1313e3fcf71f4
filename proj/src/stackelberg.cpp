#include "hpgame/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

namespace hpgame {

BigM big_m_for(const PayoffTensor& tensor) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<double>& v) {
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  };
  scan(tensor.defender_payoff);
  for (const auto& ap : tensor.attacker_payoff) scan(ap);
  if (!(lo <= hi)) return {1.0};
  return {2.0 * (hi - lo) + 1.0};
}

namespace {

struct ProfileOutcome {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// LP over the defender simplex making `profile` a joint best response:
//   max sum_d x_d R_d(d, profile)
//   s.t. sum_d x_d = 1, x >= 0,
//        for each attacker i, each deviation a_i':
//          sum_d x_d [R_ai(d, profile) - R_ai(d, profile|a_i')] >= 0
LinearProgram profile_lp(const PayoffTensor& tensor, std::size_t profile) {
  const std::size_t nd = tensor.defender_strategies.size();
  const std::size_t joint = tensor.joint_action_count();
  const int m = tensor.attacker_count();
  const auto actions = tensor.profile_from_index(profile);

  LinearProgram lp;
  lp.objective.assign(nd, 0.0);
  for (std::size_t d = 0; d < nd; ++d)
    lp.objective[d] = tensor.defender_payoff[d * joint + profile];

  LpRow simplex_row;
  simplex_row.coeffs.assign(nd, 1.0);
  simplex_row.rel = Relation::EQ;
  simplex_row.rhs = 1.0;
  lp.rows.push_back(std::move(simplex_row));

  for (int i = 0; i < m; ++i) {
    const auto& payoff = tensor.attacker_payoff[static_cast<std::size_t>(i)];
    const int n_actions = static_cast<int>(tensor.action_lists[static_cast<std::size_t>(i)].size());
    for (int alt = 0; alt < n_actions; ++alt) {
      if (alt == actions[static_cast<std::size_t>(i)]) continue;
      auto deviated = actions;
      deviated[static_cast<std::size_t>(i)] = alt;
      const std::size_t dev_profile = tensor.profile_index(deviated);
      LpRow row;
      row.coeffs.assign(nd, 0.0);
      for (std::size_t d = 0; d < nd; ++d)
        row.coeffs[d] = payoff[d * joint + profile] - payoff[d * joint + dev_profile];
      row.rel = Relation::GE;
      row.rhs = 0.0;
      lp.rows.push_back(std::move(row));
    }
  }
  return lp;
}

ProfileOutcome solve_profile(const PayoffTensor& tensor, std::size_t profile,
                             const SolveOptions& opts) {
  LinearProgram lp = profile_lp(tensor, profile);
  if (opts.dump_lps) {
    std::ofstream out(opts.dump_prefix + "profile_" + std::to_string(profile) + ".lp.txt");
    out << lp.to_tableau_text();
  }
  LpSolution sol = solve_lp(lp);
  ProfileOutcome out;
  if (sol.status == LpStatus::Optimal) {
    out.feasible = true;
    out.value = sol.objective;
    out.x = sol.x;
  } else if (sol.status == LpStatus::Unbounded) {
    throw SolverError("profile LP unbounded: defender simplex constraint missing");
  }
  return out;
}

}  // namespace

EquilibriumSolution solve_stackelberg(const PayoffTensor& tensor, const BigM& beta,
                                      const SolveOptions& opts) {
  const std::size_t joint = tensor.joint_action_count();
  const std::size_t nd = tensor.defender_strategies.size();
  if (nd == 0 || joint == 0) throw DomainError("solve_stackelberg: empty tensor");
  if (beta.beta <= 0.0) throw DomainError("solve_stackelberg: beta must be positive");

  std::vector<ProfileOutcome> outcomes(joint);
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || joint < 2) {
    for (std::size_t p = 0; p < joint; ++p) outcomes[p] = solve_profile(tensor, p, opts);
  } else {
    // independent LPs; results land in fixed slots so the later reduction is
    // schedule-independent
    std::vector<std::thread> pool;
    std::size_t chunk = (joint + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = static_cast<std::size_t>(t) * chunk;
      std::size_t hi = std::min(joint, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi]() {
        for (std::size_t p = lo; p < hi; ++p) outcomes[p] = solve_profile(tensor, p, opts);
      });
    }
    for (auto& th : pool) th.join();
  }

  // reduction: best defender value, ties to the lexicographically first profile
  std::size_t best = joint;
  for (std::size_t p = 0; p < joint; ++p) {
    if (!outcomes[p].feasible) continue;
    if (best == joint || outcomes[p].value > outcomes[best].value + 1e-12) best = p;
  }
  if (best == joint)
    throw SolverError("no joint profile admits a best-response certificate; "
                      "payoff tensor is inconsistent");

  const ProfileOutcome& won = outcomes[best];
  EquilibriumSolution sol;
  sol.chosen_profile = tensor.profile_from_index(best);
  sol.defender_utility = won.value;

  // clean tiny simplex residue off the mixed strategy, keep support sparse
  sol.mixed.strategies.clear();
  sol.mixed.weights.clear();
  double wsum = 0.0;
  for (std::size_t d = 0; d < nd; ++d) {
    double w = won.x[d];
    if (w < 1e-12) continue;
    sol.mixed.strategies.push_back(tensor.defender_strategies[d]);
    sol.mixed.weights.push_back(w);
    wsum += w;
  }
  if (sol.mixed.weights.empty()) {
    sol.mixed.strategies.push_back(tensor.defender_strategies[0]);
    sol.mixed.weights.push_back(1.0);
    wsum = 1.0;
  }
  for (double& w : sol.mixed.weights) w /= wsum;
  sol.mixed.validate();

  sol.attacker_utilities.assign(static_cast<std::size_t>(tensor.attacker_count()), 0.0);
  for (std::size_t d = 0; d < nd; ++d) {
    double w = won.x[d];
    if (w <= 0.0) continue;
    for (int i = 0; i < tensor.attacker_count(); ++i)
      sol.attacker_utilities[static_cast<std::size_t>(i)] +=
          w * tensor.attacker_payoff[static_cast<std::size_t>(i)][d * joint + best];
  }
  return sol;
}

BigMReport verify_big_m(const EquilibriumSolution& sol, const PayoffTensor& tensor,
                        const BigM& beta) {
  constexpr double tol = 1e-6;
  BigMReport report;
  const std::size_t joint = tensor.joint_action_count();
  const std::size_t nd = tensor.defender_strategies.size();
  const std::size_t chosen = tensor.profile_index(sol.chosen_profile);

  // expand the sparse mixed strategy back over the tensor's strategy order
  std::vector<double> x(nd, 0.0);
  for (std::size_t k = 0; k < sol.mixed.strategies.size(); ++k) {
    bool placed = false;
    for (std::size_t d = 0; d < nd; ++d) {
      if (tensor.defender_strategies[d] == sol.mixed.strategies[k]) {
        x[d] += sol.mixed.weights[k];
        placed = true;
        break;
      }
    }
    if (!placed) {
      report.violations.push_back({"mixed strategy uses a pure strategy absent from the tensor", -1.0});
    }
  }

  double needed_beta = 0.0;
  auto expected_def = [&](std::size_t profile) {
    double v = 0.0;
    for (std::size_t d = 0; d < nd; ++d) v += x[d] * tensor.defender_payoff[d * joint + profile];
    return v;
  };
  auto expected_att = [&](int attacker, std::size_t profile) {
    double v = 0.0;
    const auto& payoff = tensor.attacker_payoff[static_cast<std::size_t>(attacker)];
    for (std::size_t d = 0; d < nd; ++d) v += x[d] * payoff[d * joint + profile];
    return v;
  };

  // defender utility rows: U_d <= sum x R_d(., p) + beta (1 - z_p)
  for (std::size_t p = 0; p < joint; ++p) {
    const double z = p == chosen ? 1.0 : 0.0;
    const double rhs = expected_def(p) + beta.beta * (1.0 - z);
    const double slack = rhs - sol.defender_utility;
    needed_beta = std::max(needed_beta, sol.defender_utility - expected_def(p));
    if (slack < -tol)
      report.violations.push_back(
          {"defender bound at profile " + std::to_string(p) + (z > 0 ? " (chosen)" : ""), slack});
  }

  // attacker best-response rows, unilateral deviations of the chosen profile
  const auto actions = sol.chosen_profile;
  for (int i = 0; i < tensor.attacker_count(); ++i) {
    const int n_actions = static_cast<int>(tensor.action_lists[static_cast<std::size_t>(i)].size());
    const double own = expected_att(i, chosen);
    for (int alt = 0; alt < n_actions; ++alt) {
      if (alt == actions[static_cast<std::size_t>(i)]) continue;
      auto deviated = actions;
      deviated[static_cast<std::size_t>(i)] = alt;
      const double dev = expected_att(i, tensor.profile_index(deviated));
      const double slack = own - dev;  // z=1 on the chosen profile: no beta slack
      if (slack < -tol)
        report.violations.push_back({"attacker " + std::to_string(i) + " prefers action " +
                                         std::to_string(alt) + " over chosen action " +
                                         std::to_string(actions[static_cast<std::size_t>(i)]),
                                     slack});
      needed_beta = std::max(needed_beta, dev - own);
    }
  }

  // consistency of the reported utility with the tensor
  const double recomputed = expected_def(chosen);
  if (std::abs(recomputed - sol.defender_utility) > tol)
    report.violations.push_back({"reported defender utility differs from tensor recomputation",
                                 -(std::abs(recomputed - sol.defender_utility))});

  report.beta_sufficient = beta.beta >= needed_beta - tol;
  report.pass = report.violations.empty();
  return report;
}

}  // namespace hpgame
