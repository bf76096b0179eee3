#ifndef DCP_LP_HPP
#define DCP_LP_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dcp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute feasibility / duality tolerance of the LP layer.
constexpr double kLpTol = 1e-7;
// A solution value within this distance of an integer counts as integral.
constexpr double kIntTol = 1e-6;

enum class VarType { Continuous, Integer, Binary };
enum class RowSense { LE, EQ, GE };

// Sparse minimization program with bounded variables. Variables and rows are
// addressed by index; names only matter for the LP-format export.
class LinearProgram {
 public:
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::string name;
  };

  int add_var(double lb, double ub, double obj, VarType type = VarType::Continuous,
              std::string name = {});
  int add_row(std::vector<std::pair<int, double>> coeffs, RowSense sense,
              double rhs, std::string name = {});

  int num_vars() const { return static_cast<int>(obj_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  double lower(int j) const { return lb_[j]; }
  double upper(int j) const { return ub_[j]; }
  double objective(int j) const { return obj_[j]; }
  VarType var_type(int j) const { return type_[j]; }
  const std::string& var_name(int j) const { return names_[j]; }
  const Row& row(int i) const { return rows_[i]; }

  void set_bounds(int j, double lb, double ub);
  void set_objective(int j, double obj) { obj_[j] = obj; }

  bool has_integers() const;

  // Evaluates a candidate point: max constraint/bound violation.
  double max_violation(const std::vector<double>& x) const;
  double objective_value(const std::vector<double>& x) const;

 private:
  std::vector<double> lb_, ub_, obj_;
  std::vector<VarType> type_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit };

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Limit;
  double objective = 0.0;
  std::vector<double> x;      // primal values, empty if none found
  std::vector<double> duals;  // per row; only from the continuous solve
  long node_count = 0;        // branch-and-bound nodes
  double seconds = 0.0;
  double best_bound = -kInfinity;  // proven lower bound (MIP)
};

// Solves the continuous relaxation (integrality flags ignored) with a
// bounded-variable revised simplex; returns duals per row.
SolveResult solve_lp(const LinearProgram& lp);

struct MipLimits {
  long max_nodes = 1'000'000;
  double max_seconds = 600.0;
  // Nodes with bound >= cutoff are pruned; pass a known feasible objective
  // to prune early. The reported optimum is unaffected when the cutoff comes
  // from a feasible point.
  double cutoff = kInfinity;
  // Candidate feasible points; each is validated and, when feasible and
  // integral, seeds the incumbent.
  std::vector<std::vector<double>> warm_starts;
};

// Best-first branch and bound over LP relaxations; branches on the most
// fractional integer variable, ties broken by lowest index. Returns the
// proven optimum, or the incumbent with a bound gap when limits are hit.
SolveResult solve_mip(const LinearProgram& lp, const MipLimits& limits = {});

// Renders the instance in the industry-standard LP text format (see
// docs/lp-format.md for the exact grammar emitted).
std::string to_lp_format(const LinearProgram& lp, const std::string& name = "dcp");

}  // namespace dcp

#endif  // DCP_LP_HPP
