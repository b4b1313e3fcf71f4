#pragma once

#include <string>
#include <vector>

#include "hpgame/game_core.hpp"
#include "hpgame/lp.hpp"

namespace hpgame {

/// Big-M constant for the joint best-response MILP; must exceed the payoff
/// spread of the tensor it deactivates constraints in.
struct BigM {
  double beta = 1.0;
};

/// beta = 2 * (max cell - min cell) + 1 over every payoff component.
BigM big_m_for(const PayoffTensor& tensor);

struct EquilibriumSolution {
  DefenderMixedStrategy mixed;
  std::vector<int> chosen_profile;  // one action index per attacker
  double defender_utility = 0.0;
  std::vector<double> attacker_utilities;
};

struct SolveOptions {
  int threads = 1;
  bool dump_lps = false;       // per-profile tableau dump for debugging
  std::string dump_prefix;     // file prefix when dump_lps is set
};

/// Multi-follower Stackelberg equilibrium by decomposition: one LP per joint
/// attacker profile enforcing the unilateral best-response rows, keeping the
/// profile with the best defender objective (ties to the lexicographically
/// first profile). Equivalent to branching the MILP's exactly-one z choice.
EquilibriumSolution solve_stackelberg(const PayoffTensor& tensor, const BigM& beta,
                                      const SolveOptions& opts = {});

struct BigMViolation {
  std::string constraint;  // human-readable row identification
  double slack = 0.0;      // negative when violated
};

struct BigMReport {
  bool pass = false;
  bool beta_sufficient = false;
  std::vector<BigMViolation> violations;
};

/// Instantiates every MILP inequality (defender utility bounds and attacker
/// best-response rows) with z fixed to the chosen profile's indicator and
/// checks them at 1e-6; beta adequacy is reported separately.
BigMReport verify_big_m(const EquilibriumSolution& sol, const PayoffTensor& tensor,
                        const BigM& beta);

}  // namespace hpgame
