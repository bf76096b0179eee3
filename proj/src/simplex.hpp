#ifndef DCP_SRC_SIMPLEX_HPP
#define DCP_SRC_SIMPLEX_HPP

#include <Eigen/Dense>
#include <vector>

#include "dcp/lp.hpp"

namespace dcp::internal {

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, FreeNB };

// Bounded-variable revised simplex over the columns [structurals | slacks].
// Each row i is rewritten as a'x + s_i = rhs with the slack bounded by the
// row sense. Dantzig pricing with a Bland's-rule fallback on cycling; the
// basis inverse is kept explicitly and refactorized periodically.
//
// The instance is reusable: bounds can be tightened between solves and the
// final basis of one solve warm-starts the next (phase 1 repairs whatever
// feasibility the bound change broke).
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);

  void set_var_bounds(int j, double lb, double ub);  // structural variable
  double var_lower(int j) const { return lb_[j]; }
  double var_upper(int j) const { return ub_[j]; }

  SolveStatus solve();

  double objective() const;
  std::vector<double> primal() const;  // structural values
  std::vector<double> duals() const;   // per row
  long iterations() const { return iterations_; }

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  // Basis snapshot over all columns (structurals then slacks).
  const std::vector<VarStatus>& statuses() const { return status_; }
  void load_statuses(const std::vector<VarStatus>& st);

 private:
  using Vec = Eigen::VectorXd;
  using Mat = Eigen::MatrixXd;

  void reset_slack_basis();
  bool factorize();               // false when the basis is singular
  void compute_basic_values();
  Vec ftran(int j) const;         // Binv * column j
  Vec btran(const Vec& cb) const; // Binv^T * cb
  double reduced_cost(int j, const Vec& y) const;
  double infeasibility() const;

  // One simplex iteration; phase1 selects the composite infeasibility
  // objective. Returns false when no entering candidate exists.
  enum class StepResult { Step, NoCandidate, Unbounded, Singular };
  StepResult iterate(bool phase1);

  int n_ = 0;  // structural count
  int m_ = 0;  // row count
  std::vector<std::vector<std::pair<int, double>>> cols_;  // row, coef
  std::vector<double> lb_, ub_, cost_;
  Vec rhs_;

  std::vector<VarStatus> status_;
  std::vector<int> basic_;          // basis row position -> column
  std::vector<double> xval_;        // current value per column
  Mat binv_;
  bool factorized_ = false;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degenerate_streak_ = 0;
  bool bland_ = false;
};

}  // namespace dcp::internal

#endif  // DCP_SRC_SIMPLEX_HPP
