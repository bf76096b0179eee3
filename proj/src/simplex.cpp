#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcp::internal {

namespace {
constexpr double kFeasTol = 1e-8;    // bound violation tolerance
constexpr double kDualTol = 1e-9;    // entering-candidate threshold
constexpr double kPivotTol = 1e-7;   // minimum acceptable pivot magnitude
constexpr double kZeroTol = 1e-11;
constexpr int kRefactorInterval = 60;
constexpr int kDegenerateLimit = 60;
}  // namespace

SimplexSolver::SimplexSolver(const LinearProgram& lp) {
  n_ = lp.num_vars();
  m_ = lp.num_rows();
  int total = n_ + m_;
  cols_.resize(total);
  lb_.resize(total);
  ub_.resize(total);
  cost_.assign(total, 0.0);
  rhs_.resize(m_);

  for (int j = 0; j < n_; ++j) {
    lb_[j] = lp.lower(j);
    ub_[j] = lp.upper(j);
    cost_[j] = lp.objective(j);
  }
  for (int i = 0; i < m_; ++i) {
    const auto& row = lp.row(i);
    rhs_[i] = row.rhs;
    for (auto [j, a] : row.coeffs) {
      if (a != 0.0) cols_[j].emplace_back(i, a);
    }
    int s = n_ + i;
    cols_[s].emplace_back(i, 1.0);
    switch (row.sense) {
      case RowSense::LE:
        lb_[s] = 0.0;
        ub_[s] = kInfinity;
        break;
      case RowSense::EQ:
        lb_[s] = 0.0;
        ub_[s] = 0.0;
        break;
      case RowSense::GE:
        lb_[s] = -kInfinity;
        ub_[s] = 0.0;
        break;
    }
  }
  xval_.assign(total, 0.0);
  reset_slack_basis();
}

void SimplexSolver::set_var_bounds(int j, double lb, double ub) {
  if (j < 0 || j >= n_) throw std::out_of_range("set_var_bounds: bad index");
  lb_[j] = lb;
  ub_[j] = ub;
  if (status_[j] == VarStatus::AtLower) {
    if (std::isfinite(lb)) {
      xval_[j] = lb;
    } else {
      status_[j] = std::isfinite(ub) ? VarStatus::AtUpper : VarStatus::FreeNB;
      xval_[j] = std::isfinite(ub) ? ub : 0.0;
    }
  } else if (status_[j] == VarStatus::AtUpper) {
    if (std::isfinite(ub)) {
      xval_[j] = ub;
    } else {
      status_[j] = std::isfinite(lb) ? VarStatus::AtLower : VarStatus::FreeNB;
      xval_[j] = std::isfinite(lb) ? lb : 0.0;
    }
  }
}

void SimplexSolver::reset_slack_basis() {
  int total = n_ + m_;
  status_.assign(total, VarStatus::AtLower);
  basic_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lb_[j])) {
      status_[j] = VarStatus::AtLower;
      xval_[j] = lb_[j];
    } else if (std::isfinite(ub_[j])) {
      status_[j] = VarStatus::AtUpper;
      xval_[j] = ub_[j];
    } else {
      status_[j] = VarStatus::FreeNB;
      xval_[j] = 0.0;
    }
  }
  for (int i = 0; i < m_; ++i) {
    int s = n_ + i;
    status_[s] = VarStatus::Basic;
    basic_[i] = s;
  }
  factorized_ = false;
}

void SimplexSolver::load_statuses(const std::vector<VarStatus>& st) {
  if (static_cast<int>(st.size()) != n_ + m_)
    throw std::invalid_argument("load_statuses: size mismatch");
  int nbasic = 0;
  for (auto s : st)
    if (s == VarStatus::Basic) ++nbasic;
  if (nbasic != m_) {
    reset_slack_basis();
    return;
  }
  status_ = st;
  basic_.clear();
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::Basic) {
      basic_.push_back(j);
    } else if (status_[j] == VarStatus::AtLower) {
      if (!std::isfinite(lb_[j])) status_[j] = VarStatus::FreeNB;
      xval_[j] = std::isfinite(lb_[j]) ? lb_[j] : 0.0;
    } else if (status_[j] == VarStatus::AtUpper) {
      if (!std::isfinite(ub_[j])) status_[j] = VarStatus::FreeNB;
      xval_[j] = std::isfinite(ub_[j]) ? ub_[j] : 0.0;
    } else {
      xval_[j] = 0.0;
    }
  }
  factorized_ = false;
}

bool SimplexSolver::factorize() {
  Mat b = Mat::Zero(m_, m_);
  for (int k = 0; k < m_; ++k)
    for (auto [i, a] : cols_[basic_[k]]) b(i, k) = a;
  Eigen::FullPivLU<Mat> lu(b);
  if (!lu.isInvertible()) return false;
  binv_ = lu.inverse();
  factorized_ = true;
  pivots_since_refactor_ = 0;
  return true;
}

void SimplexSolver::compute_basic_values() {
  Vec r = rhs_;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::Basic || xval_[j] == 0.0) continue;
    for (auto [i, a] : cols_[j]) r[i] -= a * xval_[j];
  }
  Vec xb = binv_ * r;
  for (int k = 0; k < m_; ++k) xval_[basic_[k]] = xb[k];
}

SimplexSolver::Vec SimplexSolver::ftran(int j) const {
  Vec w = Vec::Zero(m_);
  for (auto [i, a] : cols_[j]) w += a * binv_.col(i);
  return w;
}

SimplexSolver::Vec SimplexSolver::btran(const Vec& cb) const {
  return binv_.transpose() * cb;
}

double SimplexSolver::reduced_cost(int j, const Vec& y) const {
  double d = cost_[j];
  for (auto [i, a] : cols_[j]) d -= y[i] * a;
  return d;
}

double SimplexSolver::infeasibility() const {
  double s = 0;
  for (int k = 0; k < m_; ++k) {
    int b = basic_[k];
    if (xval_[b] < lb_[b]) s += lb_[b] - xval_[b];
    if (xval_[b] > ub_[b]) s += xval_[b] - ub_[b];
  }
  return s;
}

SimplexSolver::StepResult SimplexSolver::iterate(bool phase1) {
  // Objective for pricing: composite infeasibility in phase 1.
  Vec cb = Vec::Zero(m_);
  for (int k = 0; k < m_; ++k) {
    int b = basic_[k];
    if (phase1) {
      if (xval_[b] < lb_[b] - kFeasTol)
        cb[k] = -1.0;
      else if (xval_[b] > ub_[b] + kFeasTol)
        cb[k] = 1.0;
    } else {
      cb[k] = cost_[b];
    }
  }
  Vec y = btran(cb);

  // Entering candidate.
  int q = -1;
  double best = kDualTol;
  int dir = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    VarStatus st = status_[j];
    if (st == VarStatus::Basic) continue;
    if (lb_[j] == ub_[j]) continue;  // fixed
    double cj = phase1 ? 0.0 : cost_[j];
    double d = cj;
    for (auto [i, a] : cols_[j]) d -= y[i] * a;
    double score = 0;
    int cand_dir = 0;
    if (st == VarStatus::AtLower && d < -kDualTol) {
      score = -d;
      cand_dir = +1;
    } else if (st == VarStatus::AtUpper && d > kDualTol) {
      score = d;
      cand_dir = -1;
    } else if (st == VarStatus::FreeNB && std::abs(d) > kDualTol) {
      score = std::abs(d);
      cand_dir = d < 0 ? +1 : -1;
    }
    if (cand_dir == 0) continue;
    if (bland_) {
      q = j;
      dir = cand_dir;
      break;
    }
    if (score > best) {
      best = score;
      q = j;
      dir = cand_dir;
    }
  }
  if (q < 0) return StepResult::NoCandidate;

  Vec w = ftran(q);

  // Ratio test: x_B(t) = x_B - dir*t*w, x_q(t) = x_q + dir*t.
  double t_best = kInfinity;
  int leave = -1;        // basis position
  bool leave_at_upper = false;
  double leave_pivot = 0;

  double flip_range = ub_[q] - lb_[q];  // +inf when a bound is infinite

  for (int k = 0; k < m_; ++k) {
    double rate = -dir * w[k];
    if (std::abs(rate) <= kZeroTol) continue;
    int b = basic_[k];
    double x = xval_[b];
    double t = kInfinity;
    bool at_upper = false;
    if (rate < 0) {  // decreasing
      double target;
      if (x > ub_[b] + kFeasTol) {
        target = ub_[b];  // infeasible above: stop once repaired
        at_upper = true;
      } else if (x < lb_[b] - kFeasTol) {
        continue;  // infeasible below moving further down: no block here
      } else if (std::isfinite(lb_[b])) {
        target = lb_[b];
        at_upper = false;
      } else {
        continue;
      }
      t = (x - target) / (-rate);
    } else {  // increasing
      double target;
      if (x < lb_[b] - kFeasTol) {
        target = lb_[b];
        at_upper = false;
      } else if (x > ub_[b] + kFeasTol) {
        continue;  // infeasible above moving further up: no block here
      } else if (std::isfinite(ub_[b])) {
        target = ub_[b];
        at_upper = true;
      } else {
        continue;
      }
      t = (target - x) / rate;
    }
    if (t < -kFeasTol) t = 0;  // numerical: already past the bound
    if (t < 0) t = 0;
    bool better = t < t_best - 1e-10;
    bool tie = std::abs(t - t_best) <= 1e-10;
    bool prefer =
        better ||
        (tie && !bland_ && std::abs(w[k]) > std::abs(leave_pivot)) ||
        (tie && bland_ && leave >= 0 && basic_[k] < basic_[leave]);
    if (prefer) {
      t_best = t;
      leave = k;
      leave_at_upper = at_upper;
      leave_pivot = w[k];
    }
  }

  bool flip = false;
  if (flip_range < t_best && std::isfinite(flip_range)) {
    t_best = flip_range;
    flip = true;
  }
  if (!std::isfinite(t_best)) {
    if (phase1) return StepResult::Singular;  // cannot happen with d1 < 0
    return StepResult::Unbounded;
  }

  if (!flip && std::abs(leave_pivot) < kPivotTol) {
    // Unstable pivot: bail out before touching any state so the caller can
    // refactorize and retry.
    return StepResult::Singular;
  }

  // Apply the step.
  if (t_best > 0) {
    for (int k = 0; k < m_; ++k) xval_[basic_[k]] -= dir * t_best * w[k];
    degenerate_streak_ = 0;
    if (bland_ && t_best > 1e-9) bland_ = false;
  } else {
    if (++degenerate_streak_ > kDegenerateLimit) bland_ = true;
  }
  xval_[q] += dir * t_best;

  if (flip) {
    status_[q] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
    xval_[q] = dir > 0 ? ub_[q] : lb_[q];
    ++iterations_;
    return StepResult::Step;
  }

  int out = basic_[leave];
  status_[out] = leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
  xval_[out] = leave_at_upper ? ub_[out] : lb_[out];
  status_[q] = VarStatus::Basic;
  basic_[leave] = q;

  // Product-form update of the explicit inverse.
  double piv = w[leave];
  binv_.row(leave) /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == leave) continue;
    double f = w[i];
    if (std::abs(f) > kZeroTol) binv_.row(i) -= f * binv_.row(leave);
  }
  ++pivots_since_refactor_;
  ++iterations_;
  return StepResult::Step;
}

SolveStatus SimplexSolver::solve() {
  for (int j = 0; j < n_; ++j)
    if (lb_[j] > ub_[j] + kFeasTol) return SolveStatus::Infeasible;

  if (!factorized_ && !factorize()) {
    reset_slack_basis();
    factorize();
  }
  compute_basic_values();

  long iter_cap = 50000 + 200L * (n_ + m_);
  bland_ = false;
  degenerate_streak_ = 0;
  long start_iters = iterations_;
  int singular_streak = 0;
  int optimality_retries = 0;

  bool phase1 = infeasibility() > kFeasTol;
  while (true) {
    if (iterations_ - start_iters > iter_cap) return SolveStatus::Limit;
    if (pivots_since_refactor_ >= kRefactorInterval) {
      if (!factorize()) {
        reset_slack_basis();
        factorize();
      }
      compute_basic_values();
      if (infeasibility() > kFeasTol) phase1 = true;  // drift uncovered
    }
    if (phase1 && infeasibility() <= kFeasTol) phase1 = false;

    StepResult r = iterate(phase1);
    switch (r) {
      case StepResult::Step:
        singular_streak = 0;
        continue;
      case StepResult::NoCandidate:
        if (phase1) {
          if (infeasibility() > 1e-6) return SolveStatus::Infeasible;
          phase1 = false;
          continue;
        }
        // Re-verify the optimality claim against a fresh factorization;
        // accumulated drift can hide both infeasibility and candidates.
        if (pivots_since_refactor_ > 0) {
          if (++optimality_retries > 5) return SolveStatus::Limit;
          factorize();
          compute_basic_values();
          if (infeasibility() > kFeasTol) {
            phase1 = true;
            bland_ = true;
          }
          continue;
        }
        if (infeasibility() > kFeasTol) {
          if (++optimality_retries > 5) return SolveStatus::Limit;
          phase1 = true;
          bland_ = true;
          continue;
        }
        return SolveStatus::Optimal;
      case StepResult::Unbounded:
        return SolveStatus::Unbounded;
      case StepResult::Singular:
        if (++singular_streak > 5) return SolveStatus::Limit;
        if (!factorize()) {
          reset_slack_basis();
          if (!factorize()) return SolveStatus::Limit;
        }
        compute_basic_values();
        bland_ = true;
        phase1 = infeasibility() > kFeasTol;
        continue;
    }
  }
}

double SimplexSolver::objective() const {
  double obj = 0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * xval_[j];
  return obj;
}

std::vector<double> SimplexSolver::primal() const {
  return {xval_.begin(), xval_.begin() + n_};
}

std::vector<double> SimplexSolver::duals() const {
  Vec cb(m_);
  for (int k = 0; k < m_; ++k) cb[k] = cost_[basic_[k]];
  Vec y = btran(cb);
  return {y.data(), y.data() + m_};
}

}  // namespace dcp::internal
