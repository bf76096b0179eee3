#include "dcp/lp.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "simplex.hpp"

namespace dcp {

int LinearProgram::add_var(double lb, double ub, double obj, VarType type,
                           std::string name) {
  if (lb > ub) throw std::invalid_argument("variable lower bound above upper");
  if (type == VarType::Binary) {
    lb = std::max(lb, 0.0);
    ub = std::min(ub, 1.0);
  }
  lb_.push_back(lb);
  ub_.push_back(ub);
  obj_.push_back(obj);
  type_.push_back(type);
  if (name.empty()) name = "x" + std::to_string(obj_.size() - 1);
  names_.push_back(std::move(name));
  return static_cast<int>(obj_.size()) - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coeffs,
                           RowSense sense, double rhs, std::string name) {
  for (auto [j, a] : coeffs)
    if (j < 0 || j >= num_vars())
      throw std::out_of_range("row references unknown variable");
  if (name.empty()) name = "c" + std::to_string(rows_.size());
  rows_.push_back({std::move(coeffs), sense, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::set_bounds(int j, double lb, double ub) {
  if (lb > ub) throw std::invalid_argument("variable lower bound above upper");
  lb_.at(j) = lb;
  ub_.at(j) = ub;
}

bool LinearProgram::has_integers() const {
  for (VarType t : type_)
    if (t != VarType::Continuous) return true;
  return false;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double v = 0;
  for (int j = 0; j < num_vars(); ++j) {
    v = std::max(v, lb_[j] - x[j]);
    v = std::max(v, x[j] - ub_[j]);
  }
  for (const auto& row : rows_) {
    double lhs = 0;
    for (auto [j, a] : row.coeffs) lhs += a * x[j];
    switch (row.sense) {
      case RowSense::LE:
        v = std::max(v, lhs - row.rhs);
        break;
      case RowSense::GE:
        v = std::max(v, row.rhs - lhs);
        break;
      case RowSense::EQ:
        v = std::max(v, std::abs(lhs - row.rhs));
        break;
    }
  }
  return v;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double obj = 0;
  for (int j = 0; j < num_vars(); ++j) obj += obj_[j] * x[j];
  return obj;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::Limit:
      return "limit";
  }
  return "unknown";
}

SolveResult solve_lp(const LinearProgram& lp) {
  auto t0 = std::chrono::steady_clock::now();
  internal::SimplexSolver spx(lp);
  SolveResult res;
  res.status = spx.solve();
  if (res.status == SolveStatus::Optimal) {
    res.objective = spx.objective();
    res.x = spx.primal();
    res.duals = spx.duals();
    res.best_bound = res.objective;
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace dcp
