#include "dcp/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pricing_detail.hpp"

namespace dcp {

using internal::build_path_coding_model;
using internal::build_sdc_model;
using internal::default_alpha;
using internal::default_beta;

const char* to_string(CodingMode m) {
  switch (m) {
    case CodingMode::SDC:
      return "sdc";
    case CodingMode::NSDC:
      return "nsdc";
    case CodingMode::CDC:
      return "cdc";
  }
  return "unknown";
}

std::optional<CodingMode> coding_mode_from_string(const std::string& s) {
  if (s == "sdc") return CodingMode::SDC;
  if (s == "nsdc") return CodingMode::NSDC;
  if (s == "cdc") return CodingMode::CDC;
  return std::nullopt;
}

namespace {

void check_request(const PricingRequest& req) {
  if (!req.net) throw std::invalid_argument("pricing: missing network");
  for (double pi : req.duals)
    if (pi < -kLpTol) throw std::invalid_argument("pricing: negative dual price");
  if (req.alpha != 0) {
    if (req.alpha <= 0 || req.alpha > 1.0 / req.net->node_count())
      throw std::invalid_argument("pricing: alpha out of (0, 1/|V|]");
  }
  if (req.beta != 0 && req.beta < default_beta(*req.net))
    throw std::invalid_argument("pricing: beta below 2*max(|V|, max degree)");
}

// Singleton warm starts for every source with a positive dual.
template <typename Model>
void add_singleton_starts(const Model& model, const PricingRequest& req,
                          MipLimits& limits) {
  const Network& net = *req.net;
  limits.warm_starts.push_back(std::vector<double>(model.lp.num_vars(), 0.0));
  for (NodeId f = 0; f < net.node_count(); ++f) {
    if (f == req.destination) continue;
    double pi = f < static_cast<int>(req.duals.size()) ? req.duals[f] : 0.0;
    if (pi <= 0) continue;
    auto pair = disjoint_pair(net, f, req.destination);
    if (!pair) continue;
    limits.warm_starts.push_back(model.singleton_start(f, *pair));
  }
}

template <typename Model>
PricingResult run_pricing(const Model& model, const PricingRequest& req) {
  MipLimits limits = req.limits;
  add_singleton_starts(model, req, limits);
  SolveResult sol = solve_mip(model.lp, limits);

  PricingResult out;
  out.solver_status = sol.status;
  out.nodes = sol.node_count;
  out.proven = sol.status == SolveStatus::Optimal;
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Limit)
    throw std::logic_error("pricing model unexpectedly " +
                           std::string(to_string(sol.status)));
  if (sol.x.empty()) {
    out.reduced_cost = sol.best_bound;
    return out;
  }
  out.reduced_cost = sol.objective;
  if (!reduced_cost_useful(sol.objective)) return out;  // nothing useful

  CodingStructure cs = model.decode(sol.x);
  CodingGroup group = make_group(cs, *req.net);

  auto problems = validate_structure(cs, *req.net);
  VerifyReport rep = verify_group(cs, *req.net);
  if (!problems.empty() || !rep.pass) {
    std::string what = "pricing produced an invalid coding group:";
    for (const auto& p : problems) what += " " + p + ";";
    if (!rep.pass) what += " " + rep.to_string(*req.net);
    throw std::logic_error(what);
  }
  // Reduced cost re-derived from the rendered structure. A proven-optimal
  // solve must match the solver objective exactly; an incumbent from a
  // limited solve may carry stray links that the rendering drops, which
  // only makes the column cheaper.
  double dual_value = 0;
  for (const auto& [f, c] : group.counts)
    dual_value += c * (f < static_cast<int>(req.duals.size())
                           ? std::max(0.0, req.duals[f])
                           : 0.0);
  double rc = group.cost - dual_value;
  double tol = 1e-5 * std::max(1.0, std::abs(sol.objective));
  if (out.proven ? std::abs(rc - sol.objective) > tol : rc > sol.objective + tol)
    throw std::logic_error("pricing decode mismatch: structure cost " +
                           std::to_string(group.cost) + " vs objective " +
                           std::to_string(sol.objective + dual_value));
  out.column = std::move(group);
  out.reduced_cost = rc;
  return out;
}

}  // namespace

PricingResult price_sdc(const PricingRequest& req) {
  check_request(req);
  const Network& net = *req.net;
  double alpha = req.alpha != 0 ? req.alpha : default_alpha(net);
  double beta = req.beta != 0 ? req.beta : default_beta(net);
  auto model = build_sdc_model(net, req.destination, req.duals, nullptr, alpha, beta);
  return run_pricing(model, req);
}

PricingResult price_nsdc(const PricingRequest& req) {
  check_request(req);
  auto model = build_path_coding_model(*req.net, req.destination, req.duals, false);
  return run_pricing(model, req);
}

PricingResult price_cdc(const PricingRequest& req) {
  check_request(req);
  auto model = build_path_coding_model(*req.net, req.destination, req.duals, true);
  return run_pricing(model, req);
}

PricingResult price(const PricingRequest& req) {
  switch (req.mode) {
    case CodingMode::SDC:
      return price_sdc(req);
    case CodingMode::NSDC:
      return price_nsdc(req);
    case CodingMode::CDC:
      return price_cdc(req);
  }
  throw std::invalid_argument("unknown coding mode");
}

std::optional<CodingGroup> cheapest_sdc_group(const Network& net, NodeId destination,
                                              const std::map<NodeId, int>& counts,
                                              const MipLimits& limits) {
  std::vector<double> zero(net.node_count(), 0.0);
  auto model = build_sdc_model(net, destination, zero, &counts,
                               default_alpha(net), default_beta(net));
  SolveResult sol = solve_mip(model.lp, limits);
  if (sol.status == SolveStatus::Infeasible) return std::nullopt;
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("group routing hit solver limits");
  CodingStructure cs = model.decode(sol.x);
  CodingGroup g = make_group(cs, net);
  auto problems = validate_structure(cs, net);
  if (!problems.empty() || !verify_group(cs, net).pass)
    throw std::logic_error("group routing produced an invalid structure");
  return g;
}

std::string pricing_model_lp(const PricingRequest& req) {
  check_request(req);
  const Network& net = *req.net;
  std::string name = std::string("pricing_") + to_string(req.mode);
  if (req.mode == CodingMode::SDC) {
    double alpha = req.alpha != 0 ? req.alpha : default_alpha(net);
    double beta = req.beta != 0 ? req.beta : default_beta(net);
    auto model =
        build_sdc_model(net, req.destination, req.duals, nullptr, alpha, beta);
    return to_lp_format(model.lp, name);
  }
  auto model = build_path_coding_model(net, req.destination, req.duals,
                                       req.mode == CodingMode::CDC);
  return to_lp_format(model.lp, name);
}

}  // namespace dcp
