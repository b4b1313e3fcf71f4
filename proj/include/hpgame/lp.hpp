#pragma once

#include <vector>

#include "hpgame/net_model.hpp"

namespace hpgame {

enum class Relation { LE, EQ, GE };

struct LpRow {
  std::vector<double> coeffs;
  Relation rel = Relation::LE;
  double rhs = 0.0;
};

/// max objective . x  subject to rows; variables are non-negative unless
/// flagged free.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<bool> free_vars;  // empty means all non-negative

  void validate() const;
  std::string to_tableau_text() const;  // debugging dump
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Two-phase primal simplex, Bland's anti-cycling rule, 1e-9 feasibility
/// tolerance. Deterministic for identical inputs.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace hpgame
