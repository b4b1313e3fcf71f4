#include "hpgame/lp.hpp"

#include <cmath>
#include <sstream>

namespace hpgame {

namespace {
constexpr double kTol = 1e-9;
}

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  for (double c : objective)
    if (!std::isfinite(c)) throw DomainError("non-finite objective coefficient");
  for (const auto& row : rows) {
    if (row.coeffs.size() != n) throw DomainError("constraint row width mismatch");
    for (double a : row.coeffs)
      if (!std::isfinite(a)) throw DomainError("non-finite constraint coefficient");
    if (!std::isfinite(row.rhs)) throw DomainError("non-finite right-hand side");
  }
  if (!free_vars.empty() && free_vars.size() != n)
    throw DomainError("free-variable flag width mismatch");
}

std::string LinearProgram::to_tableau_text() const {
  std::ostringstream os;
  os << "max";
  for (std::size_t j = 0; j < objective.size(); ++j) os << " " << objective[j] << "*x" << j;
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) os << (j ? " + " : "  ") << row.coeffs[j] << "*x" << j;
    os << (row.rel == Relation::LE ? " <= " : row.rel == Relation::EQ ? " == " : " >= ") << row.rhs
       << "\n";
  }
  return os.str();
}

namespace {

class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram& lp) {
    const std::size_t n0 = lp.objective.size();
    const std::size_t m = lp.rows.size();

    // expand free variables into positive/negative parts
    col_of_var_.assign(n0, 0);
    neg_col_of_var_.assign(n0, -1);
    std::size_t ncols = 0;
    for (std::size_t j = 0; j < n0; ++j) {
      col_of_var_[j] = static_cast<int>(ncols++);
      if (!lp.free_vars.empty() && lp.free_vars[j]) neg_col_of_var_[j] = static_cast<int>(ncols++);
    }
    n_struct_ = ncols;

    // count slack and artificial columns after rhs normalization
    std::vector<Relation> rel(m);
    std::vector<double> rhs(m);
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    flip_.assign(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      rel[i] = lp.rows[i].rel;
      rhs[i] = lp.rows[i].rhs;
      bool flip = rhs[i] < 0.0;
      if (flip) {
        rhs[i] = -rhs[i];
        rel[i] = rel[i] == Relation::LE ? Relation::GE : rel[i] == Relation::GE ? Relation::LE : Relation::EQ;
      }
      flip_[i] = flip;
      if (rel[i] != Relation::EQ) slack_col[i] = static_cast<int>(ncols++);
    }
    for (std::size_t i = 0; i < m; ++i)
      if (rel[i] != Relation::LE) art_col[i] = static_cast<int>(ncols++);
    n_total_ = ncols;
    first_art_ = n_total_;
    for (std::size_t i = 0; i < m; ++i)
      if (art_col[i] >= 0) first_art_ = std::min(first_art_, static_cast<std::size_t>(art_col[i]));

    tab_.assign(m, std::vector<double>(n_total_ + 1, 0.0));
    basis_.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
      const double sign = flip_[i] ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n0; ++j) {
        double a = sign * lp.rows[i].coeffs[j];
        tab_[i][static_cast<std::size_t>(col_of_var_[j])] = a;
        if (neg_col_of_var_[j] >= 0) tab_[i][static_cast<std::size_t>(neg_col_of_var_[j])] = -a;
      }
      tab_[i][n_total_] = rhs[i];
      if (slack_col[i] >= 0)
        tab_[i][static_cast<std::size_t>(slack_col[i])] = rel[i] == Relation::LE ? 1.0 : -1.0;
      if (art_col[i] >= 0) {
        tab_[i][static_cast<std::size_t>(art_col[i])] = 1.0;
        basis_[i] = art_col[i];
      } else {
        basis_[i] = slack_col[i];
      }
    }

    // phase-2 cost vector over expanded columns
    cost_.assign(n_total_, 0.0);
    for (std::size_t j = 0; j < n0; ++j) {
      cost_[static_cast<std::size_t>(col_of_var_[j])] = lp.objective[j];
      if (neg_col_of_var_[j] >= 0) cost_[static_cast<std::size_t>(neg_col_of_var_[j])] = -lp.objective[j];
    }
    n0_ = n0;
  }

  LpSolution solve() {
    const std::size_t m = tab_.size();

    bool has_artificial = first_art_ < n_total_;
    if (has_artificial) {
      std::vector<double> phase1(n_total_, 0.0);
      for (std::size_t j = first_art_; j < n_total_; ++j) phase1[j] = -1.0;
      if (!run_phase(phase1, n_total_)) throw SolverError("phase-1 simplex reported unbounded");
      double art_sum = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (basis_[i] >= static_cast<int>(first_art_)) art_sum += tab_[i][n_total_];
      if (art_sum > 1e-7) return {LpStatus::Infeasible, 0.0, {}};
      pivot_out_artificials();
    }

    if (!run_phase(cost_, first_art_)) return {LpStatus::Unbounded, 0.0, {}};

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    std::vector<double> colval(n_total_, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis_[i] >= 0) colval[static_cast<std::size_t>(basis_[i])] = tab_[i][n_total_];
    sol.x.assign(n0_, 0.0);
    for (std::size_t j = 0; j < n0_; ++j) {
      double v = colval[static_cast<std::size_t>(col_of_var_[j])];
      if (neg_col_of_var_[j] >= 0) v -= colval[static_cast<std::size_t>(neg_col_of_var_[j])];
      sol.x[j] = v;
    }
    for (std::size_t j = 0; j < n_total_; ++j) sol.objective += cost_[j] * colval[j];
    return sol;
  }

 private:
  // Maximize cost over columns [0, col_limit); returns false on unbounded.
  bool run_phase(const std::vector<double>& cost, std::size_t col_limit) {
    const std::size_t m = tab_.size();
    std::vector<double> zrow(col_limit, 0.0);
    auto recompute_zrow = [&]() {
      for (std::size_t j = 0; j < col_limit; ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < m; ++i)
          if (basis_[i] >= 0) z += cost[static_cast<std::size_t>(basis_[i])] * tab_[i][j];
        zrow[j] = z - cost[j];
      }
    };
    recompute_zrow();

    const std::size_t max_iter = 2000 + 200 * (m + col_limit);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      if (iter > 0 && iter % 64 == 0) recompute_zrow();  // curb drift
      // Bland: entering = smallest column index with negative reduced cost
      int enter = -1;
      for (std::size_t j = 0; j < col_limit; ++j) {
        if (zrow[j] < -kTol && !is_basic(static_cast<int>(j))) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return true;  // optimal

      // ratio test, ties by smallest basis column index
      int leave = -1;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double a = tab_[i][static_cast<std::size_t>(enter)];
        if (a > kTol) {
          double ratio = tab_[i][n_total_] / a;
          if (leave < 0 || ratio < best_ratio - kTol ||
              (ratio < best_ratio + kTol && basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
            leave = static_cast<int>(i);
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded

      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
      // update reduced costs from the pivot row
      double piv_coeff = zrow[static_cast<std::size_t>(enter)];
      for (std::size_t j = 0; j < col_limit; ++j)
        zrow[j] -= piv_coeff * tab_[static_cast<std::size_t>(leave)][j];
    }
    throw SolverError("simplex iteration limit exceeded; numerical breakdown suspected");
  }

  bool is_basic(int col) const {
    for (int b : basis_)
      if (b == col) return true;
    return false;
  }

  void pivot(std::size_t row, std::size_t col) {
    const std::size_t m = tab_.size();
    double inv = 1.0 / tab_[row][col];
    for (std::size_t j = 0; j <= n_total_; ++j) tab_[row][j] *= inv;
    tab_[row][col] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = tab_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_total_; ++j) tab_[i][j] -= f * tab_[row][j];
      tab_[i][col] = 0.0;
    }
    basis_[row] = static_cast<int>(col);
  }

  // After phase 1 any artificial still basic sits at zero; replace it with a
  // structural column or drop the (redundant) row from consideration.
  void pivot_out_artificials() {
    const std::size_t m = tab_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] < static_cast<int>(first_art_)) continue;
      int col = -1;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (std::abs(tab_[i][j]) > kTol && !is_basic(static_cast<int>(j))) {
          col = static_cast<int>(j);
          break;
        }
      }
      if (col >= 0) pivot(i, static_cast<std::size_t>(col));
      // else: redundant row; the artificial stays basic at value 0, and the
      // phase-2 column limit keeps it from ever entering elsewhere
    }
  }

  std::vector<std::vector<double>> tab_;
  std::vector<int> basis_;
  std::vector<double> cost_;
  std::vector<int> col_of_var_, neg_col_of_var_;
  std::vector<bool> flip_;
  std::size_t n_struct_ = 0, n_total_ = 0, first_art_ = 0, n0_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  if (lp.rows.size() > 4096) throw ConfigError("LP exceeds supported row count");
  SimplexTableau tableau(lp);
  return tableau.solve();
}

}  // namespace hpgame
