#ifndef DCP_PRICING_HPP
#define DCP_PRICING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcp/coding.hpp"
#include "dcp/lp.hpp"
#include "dcp/netgraph.hpp"
#include "dcp/traffic.hpp"

namespace dcp {

enum class CodingMode { SDC, NSDC, CDC };

const char* to_string(CodingMode m);
std::optional<CodingMode> coding_mode_from_string(const std::string& s);

// Negative-reduced-cost acceptance threshold.
inline bool reduced_cost_useful(double rc) {
  return rc < -1e-6 * std::max(1.0, std::abs(rc));
}

struct PricingRequest {
  const Network* net = nullptr;
  NodeId destination = kInvalidNode;
  std::vector<double> duals;  // per node id; zero entries for free sources
  CodingMode mode = CodingMode::SDC;
  // Anti-cycle voltage step, 0 < alpha <= 1/|V|; 0 picks 1/(2|V|).
  double alpha = 0.0;
  // Protection-flow scaling, beta >= 2*max(|V|, max nodal degree); 0 picks
  // the boundary value.
  double beta = 0.0;
  MipLimits limits;
};

struct PricingResult {
  std::optional<CodingGroup> column;
  // Reduced cost of the returned column, or the proven optimum when none.
  double reduced_cost = 0.0;
  SolveStatus solver_status = SolveStatus::Limit;
  // True when the solver proved the reported value optimal. A "none" result
  // without proof means the pricing round was inconclusive.
  bool proven = false;
  long nodes = 0;
};

// Systematic diversity coding: link-disjoint primary paths plus one
// link-disjoint protection tree carrying the parity of all signals.
PricingResult price_sdc(const PricingRequest& req);

// Nonsystematic diversity coding: any path may be coded; subgroups are
// pairwise span-disjoint and coding cycles are excluded.
PricingResult price_nsdc(const PricingRequest& req);

// Coherent diversity coding: nonsystematic model with the strict subgroup
// disjointness relaxed to pairwise path coherence.
PricingResult price_cdc(const PricingRequest& req);

PricingResult price(const PricingRequest& req);  // dispatch on req.mode

// Cheapest systematic group with an exact source multiset and zero duals;
// nullopt when no feasible routing exists. Drives the enumeration oracle.
std::optional<CodingGroup> cheapest_sdc_group(const Network& net, NodeId destination,
                                              const std::map<NodeId, int>& counts,
                                              const MipLimits& limits = {});

// The pricing model in LP text format, for external cross-checking.
std::string pricing_model_lp(const PricingRequest& req);

}  // namespace dcp

#endif  // DCP_PRICING_HPP
