#ifndef DCP_TESTS_BRUTE_HPP
#define DCP_TESTS_BRUTE_HPP

#include <optional>
#include <vector>

#include "dcp/netgraph.hpp"

namespace dcp::testing {

// All simple paths from s to d as link sequences (DFS enumeration).
std::vector<std::vector<LinkId>> all_simple_paths(const Network& net, NodeId s,
                                                  NodeId d);

// Exhaustive minimum over all span-disjoint simple path pairs.
std::optional<double> brute_best_pair_cost(const Network& net, NodeId s,
                                           NodeId d);

double path_cost(const Network& net, const std::vector<LinkId>& path);

}  // namespace dcp::testing

#endif
