#include "dcp/master.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>

namespace dcp {

bool ColumnPool::add(CodingGroup g) {
  if (g.destination != dest_)
    throw std::invalid_argument("column destination does not match pool");
  if (index_.count(g.id)) return false;
  index_[g.id] = static_cast<int>(cols_.size());
  cols_.push_back(std::move(g));
  return true;
}

const char* to_string(CgTermination t) {
  switch (t) {
    case CgTermination::Proven:
      return "proven";
    case CgTermination::IterationLimit:
      return "iteration_limit";
    case CgTermination::DuplicateColumn:
      return "duplicate_column";
    case CgTermination::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

ColumnPool seed_pool(const Network& net, const DemandVector& dv, NodeId d) {
  ColumnPool pool(d);
  for (NodeId f : dv.positive_sources()) {
    auto pair = disjoint_pair(net, f, d);
    if (!pair) throw UnprotectableError(net, f, d);
    pool.add(singleton_group(net, f, d, *pair));
  }
  return pool;
}

MasterSolution solve_master_lp(const ColumnPool& pool, const DemandVector& dv) {
  LinearProgram lp;
  const auto& cols = pool.columns();
  for (size_t i = 0; i < cols.size(); ++i)
    lp.add_var(0, kInfinity, cols[i].cost, VarType::Continuous,
               "n" + std::to_string(i));
  std::vector<NodeId> row_source;
  for (NodeId f = 0; f < static_cast<NodeId>(dv.t.size()); ++f) {
    if (dv.t[f] <= 0) continue;
    std::vector<std::pair<int, double>> row;
    for (size_t i = 0; i < cols.size(); ++i) {
      int c = cols[i].count_for(f);
      if (c > 0) row.emplace_back(static_cast<int>(i), c);
    }
    lp.add_row(std::move(row), RowSense::GE, static_cast<double>(dv.t[f]));
    row_source.push_back(f);
  }
  SolveResult res = solve_lp(lp);
  if (res.status == SolveStatus::Infeasible)
    throw std::runtime_error("master LP infeasible: a source is uncovered");
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error(std::string("master LP ") + to_string(res.status));
  MasterSolution ms;
  ms.n = res.x;
  ms.objective = res.objective;
  ms.duals.assign(dv.t.size(), 0.0);
  for (size_t r = 0; r < row_source.size(); ++r)
    ms.duals[row_source[r]] = std::max(0.0, res.duals[r]);
  return ms;
}

namespace {

// Final placement ILP over the pool, warm-started from the rounded-up LP
// point and the pure-seed solution.
std::pair<std::vector<long long>, double> solve_master_ilp(
    const ColumnPool& pool, const DemandVector& dv, const MasterSolution& lp_sol,
    const MipLimits& limits) {
  LinearProgram lp;
  const auto& cols = pool.columns();
  long long total = dv.total();
  for (size_t i = 0; i < cols.size(); ++i)
    lp.add_var(0, static_cast<double>(total), cols[i].cost, VarType::Integer,
               "n" + std::to_string(i));
  for (NodeId f = 0; f < static_cast<NodeId>(dv.t.size()); ++f) {
    if (dv.t[f] <= 0) continue;
    std::vector<std::pair<int, double>> row;
    for (size_t i = 0; i < cols.size(); ++i) {
      int c = cols[i].count_for(f);
      if (c > 0) row.emplace_back(static_cast<int>(i), c);
    }
    lp.add_row(std::move(row), RowSense::GE, static_cast<double>(dv.t[f]));
  }
  MipLimits lim = limits;
  std::vector<double> rounded(cols.size(), 0.0);
  for (size_t i = 0; i < lp_sol.n.size() && i < rounded.size(); ++i)
    rounded[i] = std::ceil(lp_sol.n[i] - kIntTol);
  lim.warm_starts.push_back(rounded);

  SolveResult res = solve_mip(lp, lim);
  if (res.status != SolveStatus::Optimal && res.status != SolveStatus::Limit)
    throw std::runtime_error(std::string("master ILP ") + to_string(res.status));
  if (res.x.empty()) throw std::runtime_error("master ILP found no solution");
  std::vector<long long> n(cols.size(), 0);
  for (size_t i = 0; i < cols.size(); ++i) n[i] = std::llround(res.x[i]);
  return {n, res.objective};
}

}  // namespace

DesignResult run_column_generation(const Network& net, const DemandVector& dv,
                                   NodeId d, CodingMode mode,
                                   const CgLimits& limits,
                                   const ColumnPool* initial) {
  auto t0 = std::chrono::steady_clock::now();
  DesignResult out;
  out.destination = d;
  out.mode = mode;
  out.demand_total = dv.total();
  out.pool = seed_pool(net, dv, d);
  if (initial) {
    for (const auto& g : initial->columns()) out.pool.add(g);
  }

  std::vector<CodingMode> phases;
  phases.push_back(CodingMode::SDC);
  if (mode != CodingMode::SDC) phases.push_back(CodingMode::NSDC);
  if (mode == CodingMode::CDC) phases.push_back(CodingMode::CDC);

  out.termination = CgTermination::Proven;
  int iteration = 0;
  bool stop_all = false;

  if (dv.total() == 0) {
    out.lp.objective = 0;
    out.lp.duals.assign(net.node_count(), 0.0);
    out.ilp_objective = 0;
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  for (CodingMode phase : phases) {
    if (stop_all) break;
    while (true) {
      out.lp = solve_master_lp(out.pool, dv);
      out.lp.iteration = iteration;
      if (iteration >= limits.max_iterations) {
        out.termination = CgTermination::IterationLimit;
        stop_all = true;
        break;
      }
      PricingRequest req;
      req.net = &net;
      req.destination = d;
      req.duals = out.lp.duals;
      req.mode = phase;
      req.alpha = limits.alpha;
      req.beta = limits.beta;
      req.limits = limits.pricing;
      PricingResult pr = price(req);
      ++iteration;
      if (!pr.column) {
        out.trace.push_back({iteration, phase, out.lp.objective,
                             pr.proven ? pr.reduced_cost : 0.0, ""});
        if (!pr.proven) {
          out.termination = CgTermination::Inconclusive;
          stop_all = true;
        }
        break;  // phase finished
      }
      std::string id = pr.column->id;
      bool added = out.pool.add(std::move(*pr.column));
      out.trace.push_back({iteration, phase, out.lp.objective, pr.reduced_cost, id});
      if (!added) {
        // The LP optimum already prices this column at zero; a duplicate can
        // only appear through degenerate duals, so stop rather than cycle.
        out.termination = CgTermination::DuplicateColumn;
        stop_all = true;
        break;
      }
      ++out.generated_columns;
    }
  }

  out.lp = solve_master_lp(out.pool, dv);
  out.lp.iteration = iteration;
  auto [n, obj] = solve_master_ilp(out.pool, dv, out.lp, limits.final_ilp);
  out.ilp_n = std::move(n);
  out.ilp_objective = obj;
  out.gap = out.lp.objective > 0 ? (out.ilp_objective - out.lp.objective) /
                                       out.lp.objective
                                 : 0.0;
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

double primary_routing_cost(const Network& net, const TrafficMatrix& tm) {
  double total = 0;
  for (const auto& [key, units] : tm.entries) {
    auto c = net.shortest_path_cost(key.first, key.second);
    if (!c)
      throw std::runtime_error("demand " + net.node_name(key.first) + " -> " +
                               net.node_name(key.second) + " is unroutable");
    total += *c * static_cast<double>(units);
  }
  return total;
}

Plan design_all_destinations(const Network& net, const TrafficMatrix& tm,
                             CodingMode mode, const CgLimits& limits, int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  Plan plan;
  plan.mode = mode;

  std::vector<NodeId> dests;
  for (NodeId d = 0; d < net.node_count(); ++d) {
    auto dv = aggregate_to_destination(tm, net, d);
    if (dv.total() > 0) dests.push_back(d);
  }

  auto run_one = [&](NodeId d) -> std::pair<std::optional<DesignResult>, std::string> {
    try {
      auto dv = aggregate_to_destination(tm, net, d);
      return {run_column_generation(net, dv, d, mode, limits), ""};
    } catch (const std::exception& e) {
      return {std::nullopt, net.node_name(d) + ": " + e.what()};
    }
  };

  std::vector<std::pair<std::optional<DesignResult>, std::string>> results(
      dests.size());
  if (jobs <= 1) {
    for (size_t i = 0; i < dests.size(); ++i) results[i] = run_one(dests[i]);
  } else {
    std::vector<std::future<std::pair<std::optional<DesignResult>, std::string>>>
        futs;
    size_t next = 0;
    while (next < dests.size() || !futs.empty()) {
      while (next < dests.size() &&
             static_cast<int>(futs.size()) < jobs) {
        futs.push_back(std::async(std::launch::async, run_one, dests[next]));
        ++next;
      }
      size_t idx = next - futs.size();
      results[idx] = futs.front().get();
      futs.erase(futs.begin());
    }
  }

  for (auto& [res, err] : results) {
    if (res) {
      plan.total_cost += res->ilp_objective;
      plan.destinations.push_back(std::move(*res));
    } else {
      plan.errors.push_back(err);
    }
  }
  plan.primary_cost = primary_routing_cost(net, tm);
  plan.scap = plan.primary_cost > 0
                  ? (plan.total_cost - plan.primary_cost) / plan.primary_cost
                  : 0.0;
  plan.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return plan;
}

}  // namespace dcp
