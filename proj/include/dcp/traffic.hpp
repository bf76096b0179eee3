#ifndef DCP_TRAFFIC_HPP
#define DCP_TRAFFIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcp/netgraph.hpp"

namespace dcp {

// Integer unit demands between ordered node pairs. No self-demand entries.
struct TrafficMatrix {
  std::map<std::pair<NodeId, NodeId>, long long> entries;

  long long total() const;
  void add(NodeId src, NodeId dst, long long units);
};

// Positive per-node weights used as the population proxy of the gravity
// model.
struct NodeWeights {
  std::vector<double> weight;  // indexed by NodeId
};

// Per-destination aggregation of a traffic matrix: t[f] holds the demand
// from source f to the destination.
struct DemandVector {
  NodeId destination = kInvalidNode;
  std::vector<long long> t;  // indexed by NodeId, t[destination] == 0

  long long total() const;
  std::vector<NodeId> positive_sources() const;
};

// Draws `total_demands` unit demands i.i.d.; the ordered pair (s,d), s != d,
// is selected with probability proportional to weight(s)*weight(d).
// Deterministic for a fixed seed.
TrafficMatrix generate_gravity(const Network& net, const NodeWeights& weights,
                               long long total_demands, std::uint64_t seed);

DemandVector aggregate_to_destination(const TrafficMatrix& tm, const Network& net,
                                      NodeId d);

// Multiplies every entry by `factor`; used together with per-unit cost
// rescaling for granularity studies.
TrafficMatrix split_granularity(const TrafficMatrix& tm, int factor);

// CSV round-trip: "source,destination,units" with a header line.
std::string traffic_to_csv(const TrafficMatrix& tm, const Network& net);
TrafficMatrix traffic_from_csv(const std::string& text, const Network& net);
TrafficMatrix traffic_from_csv_file(const std::string& path, const Network& net);

// Weights CSV: "node,weight" with a header line. Nodes absent from the file
// default to weight 1.
NodeWeights weights_from_csv_file(const std::string& path, const Network& net);

}  // namespace dcp

#endif  // DCP_TRAFFIC_HPP
