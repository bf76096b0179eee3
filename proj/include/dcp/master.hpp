#ifndef DCP_MASTER_HPP
#define DCP_MASTER_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dcp/coding.hpp"
#include "dcp/lp.hpp"
#include "dcp/netgraph.hpp"
#include "dcp/pricing.hpp"
#include "dcp/traffic.hpp"

namespace dcp {

class UnprotectableError : public std::runtime_error {
 public:
  UnprotectableError(const Network& net, NodeId source, NodeId destination)
      : std::runtime_error("demand " + net.node_name(source) + " -> " +
                           net.node_name(destination) +
                           " is unprotectable: no two span-disjoint paths"),
        source(source),
        destination(destination) {}
  NodeId source, destination;
};

// Deduplicated set of candidate columns for one destination.
class ColumnPool {
 public:
  explicit ColumnPool(NodeId destination) : dest_(destination) {}

  // False when a column with the same canonical id is already present.
  bool add(CodingGroup g);
  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  const std::vector<CodingGroup>& columns() const { return cols_; }
  int size() const { return static_cast<int>(cols_.size()); }
  NodeId destination() const { return dest_; }

 private:
  NodeId dest_;
  std::vector<CodingGroup> cols_;
  std::unordered_map<std::string, int> index_;
};

struct MasterSolution {
  std::vector<double> n;      // per pool column
  double objective = 0.0;
  std::vector<double> duals;  // per node id; zero when the node has no row
  int iteration = 0;
};

// One singleton column per positive-demand source; guarantees feasibility
// of the placement LP. Throws UnprotectableError.
ColumnPool seed_pool(const Network& net, const DemandVector& dv, NodeId d);

// Placement LP over the current pool; duals are the per-source prices.
MasterSolution solve_master_lp(const ColumnPool& pool, const DemandVector& dv);

enum class CgTermination {
  Proven,           // pricing proved no negative reduced cost remains
  IterationLimit,
  DuplicateColumn,  // pricing returned an already-pooled column
  Inconclusive,     // pricing hit solver limits without a sign proof
};

const char* to_string(CgTermination t);

struct CgLimits {
  int max_iterations = 500;  // pricing rounds per destination
  MipLimits pricing;
  MipLimits final_ilp;
  double alpha = 0.0;  // 0 = default
  double beta = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  CodingMode mode = CodingMode::SDC;
  double lp_objective = 0.0;
  double reduced_cost = 0.0;
  std::string column_id;  // empty on the closing record of a phase
};

struct DesignResult {
  NodeId destination = kInvalidNode;
  CodingMode mode = CodingMode::SDC;
  ColumnPool pool{kInvalidNode};
  MasterSolution lp;
  std::vector<long long> ilp_n;  // multiplicities per pool column
  double ilp_objective = 0.0;
  double gap = 0.0;  // (ILP - LP) / LP
  CgTermination termination = CgTermination::Proven;
  std::vector<IterationRecord> trace;
  int generated_columns = 0;
  double seconds = 0.0;
  long long demand_total = 0;
};

// Full column-generation run for one destination. The richer coding modes
// follow the sequential protocol: NSDC starts from the SDC pool and CDC
// from the NSDC pool, so the pools nest and totals can only improve.
// `initial` optionally seeds extra columns (they are re-verified on add).
DesignResult run_column_generation(const Network& net, const DemandVector& dv,
                                   NodeId d, CodingMode mode,
                                   const CgLimits& limits = {},
                                   const ColumnPool* initial = nullptr);

struct Plan {
  CodingMode mode = CodingMode::SDC;
  std::vector<DesignResult> destinations;
  std::vector<std::string> errors;  // per-destination failures, run continues
  double total_cost = 0.0;
  double primary_cost = 0.0;  // shortest-path routing cost of every demand
  double scap = 0.0;          // spare / primary
  double seconds = 0.0;
};

// Independent design per destination with positive inbound demand;
// destinations can run concurrently (jobs > 1).
Plan design_all_destinations(const Network& net, const TrafficMatrix& tm,
                             CodingMode mode, const CgLimits& limits = {},
                             int jobs = 1);

// Shortest-path routing cost of all demands (the SCaP denominator).
double primary_routing_cost(const Network& net, const TrafficMatrix& tm);

}  // namespace dcp

#endif  // DCP_MASTER_HPP
