#ifndef DCP_SRC_PRICING_DETAIL_HPP
#define DCP_SRC_PRICING_DETAIL_HPP

#include <map>
#include <optional>
#include <vector>

#include "dcp/coding.hpp"
#include "dcp/lp.hpp"
#include "dcp/pricing.hpp"

namespace dcp::internal {

double default_alpha(const Network& net);
double default_beta(const Network& net);

// Systematic model (primary paths + parity tree). Variable layout is kept
// for decoding solutions back into coding structures.
struct SdcModel {
  LinearProgram lp;
  const Network* net = nullptr;
  NodeId dest = kInvalidNode;
  double alpha = 0;
  std::vector<int> cg;    // per node, -1 at dest
  std::vector<int> dvar;  // per link (primary)
  std::vector<int> cvar;  // per link (protection)
  std::vector<int> gvar, pvar;  // voltage variables per node

  CodingStructure decode(const std::vector<double>& x) const;
  // A feasible assignment covering one singleton group, used to warm start.
  std::vector<double> singleton_start(NodeId source, const PathPair& pair) const;
};

// counts: nullptr for free pricing, otherwise the exact source multiset.
SdcModel build_sdc_model(const Network& net, NodeId dest,
                         const std::vector<double>& duals,
                         const std::map<NodeId, int>* fixed_counts, double alpha,
                         double beta);

// Shared model for the nonsystematic and coherent variants. Demand slot i
// owns paths 2i and 2i+1; one subgroup assignment per path; t compiles the
// subgroup topologies that the objective prices.
struct PathCodingModel {
  LinearProgram lp;
  const Network* net = nullptr;
  NodeId dest = kInvalidNode;
  bool coherent = false;
  int slots = 0;      // ND-1 demand slots
  int paths = 0;      // 2*slots
  int subgroups = 0;  // 2*slots
  std::vector<int> cg;                  // per node, -1 at dest
  std::vector<std::vector<int>> sigma;  // [node][slot], -1 at dest
  std::vector<std::vector<int>> x;      // [link][path]
  std::vector<std::vector<int>> nvar;   // [path][subgroup], -1 when pinned 0
  std::vector<std::vector<int>> tvar;   // [link][subgroup]
  std::vector<std::vector<int>> m;      // [path][path], -1 diagonal/siblings? no: -1 diagonal
  std::vector<std::vector<int>> theta;  // [path][path], coherent mode only
  std::vector<std::vector<int>> r;      // [path][slot]

  int sibling(int p) const { return p % 2 == 0 ? p + 1 : p - 1; }
  CodingStructure decode(const std::vector<double>& sol) const;
  std::vector<double> singleton_start(NodeId source, const PathPair& pair) const;
};

PathCodingModel build_path_coding_model(const Network& net, NodeId dest,
                                        const std::vector<double>& duals,
                                        bool coherent);

// Unit-flow walk extraction used by both decoders; throws on malformed flow.
std::vector<LinkId> walk_unit_flow(const Network& net, NodeId from, NodeId to,
                                   std::vector<int>& avail);

}  // namespace dcp::internal

#endif
