#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <vector>

#include "dcp/lp.hpp"
#include "simplex.hpp"

namespace dcp {

namespace {

struct BranchStep {
  std::shared_ptr<const BranchStep> parent;
  int var = -1;
  double lb = 0, ub = 0;
};

struct OpenNode {
  double bound;
  long seq;
  std::shared_ptr<const BranchStep> chain;
};

struct NodeOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

bool is_fractional(double v) {
  return std::abs(v - std::round(v)) > kIntTol;
}

}  // namespace

SolveResult solve_mip(const LinearProgram& lp, const MipLimits& limits) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  std::vector<int> int_vars;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.var_type(j) != VarType::Continuous) int_vars.push_back(j);

  SolveResult res;
  res.status = SolveStatus::Limit;

  internal::SimplexSolver spx(lp);

  double incumbent_obj = limits.cutoff;
  std::vector<double> incumbent;

  auto try_incumbent = [&](const std::vector<double>& x, double obj) {
    if (obj < incumbent_obj - 1e-9) {
      incumbent = x;
      for (int j : int_vars) incumbent[j] = std::round(incumbent[j]);
      incumbent_obj = lp.objective_value(incumbent);
    }
  };

  for (const auto& w : limits.warm_starts) {
    if (static_cast<int>(w.size()) != lp.num_vars()) continue;
    bool integral = true;
    for (int j : int_vars)
      if (is_fractional(w[j])) integral = false;
    if (integral && lp.max_violation(w) <= 1e-7)
      try_incumbent(w, lp.objective_value(w));
  }

  std::priority_queue<OpenNode, std::vector<OpenNode>, NodeOrder> open;
  long seq = 0;

  auto apply_chain = [&](const std::shared_ptr<const BranchStep>& chain) {
    for (int j : int_vars) spx.set_var_bounds(j, lp.lower(j), lp.upper(j));
    for (const BranchStep* s = chain.get(); s; s = s->parent.get())
      spx.set_var_bounds(s->var,
                         std::max(spx.var_lower(s->var), s->lb),
                         std::min(spx.var_upper(s->var), s->ub));
  };

  // Root relaxation.
  SolveStatus root_status = spx.solve();
  res.node_count = 1;
  if (root_status == SolveStatus::Infeasible) {
    res.status = SolveStatus::Infeasible;
    res.seconds = elapsed();
    return res;
  }
  if (root_status == SolveStatus::Unbounded) {
    res.status = SolveStatus::Unbounded;
    res.seconds = elapsed();
    return res;
  }
  if (root_status == SolveStatus::Limit) {
    res.seconds = elapsed();
    return res;
  }

  bool current_loaded = true;  // spx currently holds the root solve
  std::shared_ptr<const BranchStep> current_chain;
  double current_bound = spx.objective();
  bool have_current = true;
  bool limit_hit = false;

  while (true) {
    if (!have_current) {
      if (open.empty()) break;
      OpenNode node = open.top();
      open.pop();
      if (node.bound >= incumbent_obj - 1e-9) continue;  // pruned
      current_chain = node.chain;
      current_bound = node.bound;
      apply_chain(current_chain);
      current_loaded = false;
      have_current = true;
    }

    if (res.node_count >= limits.max_nodes || elapsed() > limits.max_seconds) {
      limit_hit = true;
      break;
    }

    SolveStatus st;
    if (current_loaded) {
      st = root_status;  // already solved
      current_loaded = false;
    } else {
      st = spx.solve();
      ++res.node_count;
    }

    if (st == SolveStatus::Infeasible) {
      have_current = false;
      continue;
    }
    if (st == SolveStatus::Limit || st == SolveStatus::Unbounded) {
      // Child relaxations of a bounded MIP cannot be unbounded; both cases
      // signal numerical trouble, so give up on optimality claims.
      limit_hit = true;
      have_current = false;
      continue;
    }

    double obj = spx.objective();
    if (obj >= incumbent_obj - 1e-9) {
      have_current = false;
      continue;
    }
    std::vector<double> x = spx.primal();

    // Most fractional variable, ties by lowest index.
    int branch_var = -1;
    double best_frac = kIntTol;
    for (int j : int_vars) {
      double f = std::abs(x[j] - std::round(x[j]));
      if (f > best_frac + 1e-12) {
        best_frac = f;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      // Integral solution. Accept only verified points; a violated one
      // signals numerical trouble in the node relaxation, so drop it and
      // give up on optimality claims rather than keep a bogus incumbent.
      if (lp.max_violation(x) <= 1e-6) {
        try_incumbent(x, obj);
      } else {
        limit_hit = true;
      }
      have_current = false;
      continue;
    }

    double v = x[branch_var];
    double lo = std::floor(v + kIntTol);
    auto down = std::make_shared<BranchStep>(
        BranchStep{current_chain, branch_var, lp.lower(branch_var), lo});
    auto up = std::make_shared<BranchStep>(
        BranchStep{current_chain, branch_var, lo + 1, lp.upper(branch_var)});

    // Dive towards the nearer integer; queue the sibling.
    bool dive_up = (v - lo) >= 0.5;
    auto dive = dive_up ? up : down;
    auto queued = dive_up ? down : up;
    open.push({obj, seq++, queued});

    current_chain = dive;
    current_bound = obj;
    if (dive_up)
      spx.set_var_bounds(branch_var, lo + 1, spx.var_upper(branch_var));
    else
      spx.set_var_bounds(branch_var, spx.var_lower(branch_var), lo);
    have_current = true;
  }

  // Best remaining bound among open nodes (for gap reporting).
  double open_bound = kInfinity;
  if (have_current) open_bound = std::min(open_bound, current_bound);
  if (!open.empty()) open_bound = std::min(open_bound, open.top().bound);

  res.seconds = elapsed();
  if (!incumbent.empty()) {
    res.x = incumbent;
    res.objective = incumbent_obj;
    res.status = limit_hit ? SolveStatus::Limit : SolveStatus::Optimal;
    res.best_bound = limit_hit ? std::min(open_bound, incumbent_obj) : incumbent_obj;
  } else if (limit_hit) {
    res.status = SolveStatus::Limit;
    res.best_bound = open_bound;
  } else {
    // Tree exhausted without an integral point. With a finite external
    // cutoff this proves "nothing better than the cutoff", otherwise the
    // instance is integer-infeasible.
    if (std::isfinite(limits.cutoff)) {
      res.status = SolveStatus::Optimal;
      res.objective = kInfinity;
      res.best_bound = limits.cutoff;
    } else {
      res.status = SolveStatus::Infeasible;
    }
  }
  return res;
}

}  // namespace dcp
