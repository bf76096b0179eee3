#ifndef DCP_CODING_HPP
#define DCP_CODING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcp/netgraph.hpp"

namespace dcp {

using SignalMask = std::uint64_t;

// One GF(2) coding structure protecting N unicast signals towards a single
// destination. Subgroups are the transmitted XOR combinations; every signal
// rides in exactly two subgroups, one path per (signal, subgroup) incidence.
struct CodingStructure {
  struct Path {
    int signal = -1;
    int subgroup = -1;
    std::vector<LinkId> links;  // source(signal) -> destination walk
  };

  NodeId destination = kInvalidNode;
  std::vector<NodeId> signal_sources;      // size N
  std::vector<std::vector<int>> subgroups; // signal indices per subgroup
  std::vector<Path> paths;
  // Pairs of paths that must never share a span (rule closure); symmetric,
  // stored with first < second.
  std::vector<std::pair<int, int>> noncoherent_pairs;

  int num_signals() const { return static_cast<int>(signal_sources.size()); }
  int num_subgroups() const { return static_cast<int>(subgroups.size()); }
  // Index into paths for the (signal, subgroup) incidence; -1 if absent.
  int path_index(int signal, int subgroup) const;
  // The other path carrying the same signal.
  int complement_path(int path) const;
  // Paths coded together with `path` (same subgroup, excluding itself).
  std::vector<int> coded_with(int path) const;
  bool path_uses_span(int path, const Network& net, SpanId sp) const;
};

// Received state after a failure: one GF(2) row per subgroup over the
// signals that still arrive in it; a fully dead subgroup is the zero row.
struct ReceivedVector {
  std::vector<SignalMask> rows;
};

// A priced, placeable column: per-source connection counts, total cost and
// the underlying structure.
struct CodingGroup {
  NodeId destination = kInvalidNode;
  std::map<NodeId, int> counts;  // source -> connections protected
  double cost = 0.0;
  CodingStructure structure;
  std::string id;  // stable hash of the canonical form

  int count_for(NodeId f) const {
    auto it = counts.find(f);
    return it == counts.end() ? 0 : it->second;
  }
  int size() const;  // total connections
};

// Removes every path that traverses sp; each subgroup row keeps only the
// signals whose path in that subgroup survives.
ReceivedVector simulate_span_failure(const CodingStructure& cs,
                                     const Network& net, SpanId sp);

ReceivedVector intact_vector(const CodingStructure& cs);

// Ground truth for XOR decoding: GF(2) rank of the surviving rows equals the
// signal count.
bool is_decodable(const ReceivedVector& rv, int n_signals);

// Hall-style condition: every signal is alive somewhere and every subset of
// k signals touches at least k nonzero subgroups. Exponential subset scan;
// n_signals must be <= 20.
bool hall_check(const ReceivedVector& rv, int n_signals);

struct VerifyReport {
  bool pass = true;
  std::vector<SpanId> failing_spans;       // is_decodable == false
  std::vector<SpanId> hall_disagreements;  // hall_check != is_decodable
  int scenarios = 0;

  std::string to_string(const Network& net) const;
};

// Exhaustive single-span failure sweep with the rank oracle; also records
// agreement between the Hall condition and the rank check per scenario.
VerifyReport verify_group(const CodingStructure& cs, const Network& net);

// Fixed-point application of the four coherence rules from the given path:
// 1. the complementary path is noncoherent;
// 2. paths coded with a noncoherent path are coherent;
// 3. complements of coherent paths are noncoherent;
// 4. paths coded with noncoherent paths are coherent;
// rules 3 and 4 alternate until closure, unvisited paths default to
// coherent. Returns (coherent, noncoherent) path-index sets, both sorted.
std::pair<std::vector<int>, std::vector<int>> coherence_propagate(
    const CodingStructure& cs, int path);

// Runs coherence_propagate from every path and stores the union of the
// noncoherent relations into cs.noncoherent_pairs.
void compute_coherence(CodingStructure& cs);

// Structural invariant check; returns human-readable problems (empty when
// the structure is well formed).
std::vector<std::string> validate_structure(const CodingStructure& cs,
                                            const Network& net);

// Cost of a structure: sum over links of length times the number of
// subgroups whose paths traverse that link.
double structure_cost(const CodingStructure& cs, const Network& net);

std::string canonical_form(const CodingStructure& cs, const Network& net);
std::string canonical_id(const CodingStructure& cs, const Network& net);

// Builds the CodingGroup wrapper (counts, cost, id, coherence) around a
// structure.
CodingGroup make_group(const CodingStructure& cs, const Network& net);

// Renders a span-disjoint path pair as the trivial one-signal group
// [p, p]: primary and protection each carry the raw signal.
CodingGroup singleton_group(const Network& net, NodeId source, NodeId destination,
                            const PathPair& pair);

}  // namespace dcp

#endif  // DCP_CODING_HPP
