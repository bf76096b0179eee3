#include "reference_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dcp::testing {

namespace {

constexpr double kTol = 1e-9;

// Standard-form problem: min c'z s.t. Az = b, z >= 0, b >= 0.
struct Standard {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
  int cols = 0;
};

// Full-tableau simplex with Bland's rule on the standard form, starting from
// the identity basis columns appended by the caller (artificials).
struct TableauOutcome {
  bool optimal = false;
  bool unbounded = false;
  double objective = 0;
  std::vector<double> z;
};

TableauOutcome run_tableau(const Standard& p, std::vector<int> basis) {
  int m = static_cast<int>(p.b.size());
  int n = p.cols;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = p.a[i][j];
    t[i][n] = p.b[i];
  }
  // Objective row: reduced costs c - c_B B^{-1} A, starting from basis.
  for (int j = 0; j < n; ++j) t[m][j] = p.c[j];
  t[m][n] = 0;
  for (int i = 0; i < m; ++i) {
    double cb = p.c[basis[i]];
    if (cb == 0) continue;
    for (int j = 0; j <= n; ++j) t[m][j] -= cb * t[i][j];
  }

  for (long iter = 0;; ++iter) {
    if (iter > 200000) throw std::runtime_error("reference simplex stalled");
    int q = -1;
    for (int j = 0; j < n; ++j) {
      if (t[m][j] < -kTol) {
        q = j;  // Bland: first improving column
        break;
      }
    }
    if (q < 0) break;
    int r = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][q] > kTol) {
        double ratio = t[i][n] / t[i][q];
        if (ratio < best - kTol ||
            (std::abs(ratio - best) <= kTol && (r < 0 || basis[i] < basis[r]))) {
          best = ratio;
          r = i;
        }
      }
    }
    if (r < 0) {
      TableauOutcome out;
      out.unbounded = true;
      return out;
    }
    double piv = t[r][q];
    for (int j = 0; j <= n; ++j) t[r][j] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = t[i][q];
      if (std::abs(f) < 1e-14) continue;
      for (int j = 0; j <= n; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = q;
  }

  TableauOutcome out;
  out.optimal = true;
  out.z.assign(n, 0.0);
  for (int i = 0; i < m; ++i) out.z[basis[i]] = t[i][p.cols];
  out.objective = 0;
  for (int j = 0; j < n; ++j) out.objective += p.c[j] * out.z[j];
  return out;
}

}  // namespace

ReferenceResult reference_solve_lp(const LinearProgram& lp) {
  // Map each original variable to nonnegative parts: x = lb + u (finite lb),
  // x = ub - u (finite ub only), or x = u+ - u- (free).
  int n = lp.num_vars();
  struct VarMap {
    int plus = -1, minus = -1;
    double shift = 0;
    double sign = 1;
  };
  std::vector<VarMap> vmap(n);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    double lb = lp.lower(j), ub = lp.upper(j);
    if (std::isfinite(lb)) {
      vmap[j] = {cols++, -1, lb, 1};
    } else if (std::isfinite(ub)) {
      vmap[j] = {cols++, -1, ub, -1};
    } else {
      vmap[j] = {cols, cols + 1, 0, 1};
      cols += 2;
    }
  }

  struct RawRow {
    std::vector<double> coef;
    RowSense sense;
    double rhs;
  };
  std::vector<RawRow> rows;
  auto add_raw = [&](const std::vector<std::pair<int, double>>& terms,
                     RowSense sense, double rhs) {
    RawRow r;
    r.coef.assign(cols + 0, 0.0);
    for (auto [j, a] : terms) {
      const VarMap& vm = vmap[j];
      r.coef[vm.plus] += a * vm.sign;
      if (vm.minus >= 0) r.coef[vm.minus] -= a;
      rhs -= a * vm.shift;
    }
    r.sense = sense;
    r.rhs = rhs;
    rows.push_back(std::move(r));
  };

  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.row(i);
    add_raw(row.coeffs, row.sense, row.rhs);
  }
  // A variable with two finite bounds is shifted onto its lower bound, so
  // only the upper side needs an explicit row. The x = ub - u and free
  // encodings already imply their bounds.
  for (int j = 0; j < n; ++j) {
    double lb = lp.lower(j), ub = lp.upper(j);
    if (std::isfinite(lb) && std::isfinite(ub) && lb != ub)
      add_raw({{j, 1.0}}, RowSense::LE, ub);
    if (std::isfinite(lb) && std::isfinite(ub) && lb == ub)
      add_raw({{j, 1.0}}, RowSense::EQ, lb);
  }

  // Standard form with slacks and artificials.
  Standard p;
  int m = static_cast<int>(rows.size());
  p.b.assign(m, 0.0);
  p.a.assign(m, {});
  int slack_cols = 0;
  for (const auto& r : rows)
    if (r.sense != RowSense::EQ) ++slack_cols;
  p.cols = cols + slack_cols + m;  // + artificials (one per row)
  for (int i = 0; i < m; ++i) p.a[i].assign(p.cols, 0.0);

  int next_slack = cols;
  int art0 = cols + slack_cols;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[i];
    double sgn = r.rhs < 0 ? -1.0 : 1.0;
    for (int j = 0; j < cols; ++j) p.a[i][j] = sgn * r.coef[j];
    p.b[i] = sgn * r.rhs;
    if (r.sense == RowSense::LE)
      p.a[i][next_slack++] = sgn * 1.0;
    else if (r.sense == RowSense::GE)
      p.a[i][next_slack++] = sgn * -1.0;
    p.a[i][art0 + i] = 1.0;
    basis[i] = art0 + i;
  }

  // Phase 1: minimize artificial sum.
  p.c.assign(p.cols, 0.0);
  for (int i = 0; i < m; ++i) p.c[art0 + i] = 1.0;
  TableauOutcome ph1 = run_tableau(p, basis);
  if (!ph1.optimal || ph1.objective > 1e-7) {
    ReferenceResult res;
    res.status = SolveStatus::Infeasible;
    return res;
  }

  // Phase 2 from scratch with artificials pinned by a big cost. A clean
  // implementation would drive them out of the basis; the big-cost variant
  // is simpler and adequate for well-scaled test instances.
  double big = 0;
  for (int j = 0; j < n; ++j) big += std::abs(lp.objective(j));
  p.c.assign(p.cols, 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    p.c[vm.plus] += lp.objective(j) * vm.sign;
    if (vm.minus >= 0) p.c[vm.minus] -= lp.objective(j);
  }
  double big_m = 1e7 * (big + 1);
  for (int i = 0; i < m; ++i) p.c[art0 + i] = big_m;
  TableauOutcome ph2 = run_tableau(p, basis);
  ReferenceResult res;
  if (ph2.unbounded) {
    res.status = SolveStatus::Unbounded;
    return res;
  }
  if (!ph2.optimal) {
    res.status = SolveStatus::Limit;
    return res;
  }
  res.status = SolveStatus::Optimal;
  res.x.assign(n, 0.0);
  double shift_cost = 0;
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    double u = ph2.z[vm.plus];
    double v = vm.minus >= 0 ? ph2.z[vm.minus] : 0.0;
    res.x[j] = vm.shift + vm.sign * u - v;
    shift_cost += lp.objective(j) * vm.shift;
  }
  res.objective = ph2.objective + shift_cost;
  return res;
}

ReferenceResult brute_force_integer(const LinearProgram& lp) {
  int n = lp.num_vars();
  std::vector<long long> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    if (lp.var_type(j) == VarType::Continuous)
      throw std::invalid_argument("brute_force_integer: continuous variable");
    if (!std::isfinite(lp.lower(j)) || !std::isfinite(lp.upper(j)))
      throw std::invalid_argument("brute_force_integer: unbounded variable");
    lo[j] = static_cast<long long>(std::ceil(lp.lower(j) - 1e-9));
    hi[j] = static_cast<long long>(std::floor(lp.upper(j) + 1e-9));
  }
  std::vector<double> x(n);
  std::vector<long long> cur(lo);
  ReferenceResult res;
  res.status = SolveStatus::Infeasible;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (int j = 0; j < n; ++j) x[j] = static_cast<double>(cur[j]);
    if (lp.max_violation(x) <= 1e-7) {
      double obj = lp.objective_value(x);
      if (obj < best - 1e-12) {
        best = obj;
        res.status = SolveStatus::Optimal;
        res.objective = obj;
        res.x = x;
      }
    }
    int j = 0;
    while (j < n && cur[j] == hi[j]) {
      cur[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++cur[j];
  }
  return res;
}

}  // namespace dcp::testing
