#ifndef DCP_NETGRAPH_HPP
#define DCP_NETGRAPH_HPP

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace dcp {

using NodeId = int;
using LinkId = int;
using SpanId = int;

constexpr NodeId kInvalidNode = -1;

// Thrown on malformed topology input; carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Link {
  NodeId tail = kInvalidNode;
  NodeId head = kInvalidNode;
  double length = 0.0;
  SpanId span = -1;
};

// Directed network where every link is paired with its opposite-direction
// twin into a span. Spans are the failure unit: both directions of an edge
// fail together. Immutable once built.
class Network {
 public:
  class Builder;

  Network() = default;  // empty network

  // Parses the line-oriented topology format:
  //   nodes <n>
  //   [directed]
  //   <name_a> <name_b> <length>     (one line per edge, '#' comments)
  // In the default undirected mode each line declares one span and both
  // directed links are materialized. In directed mode each line is a single
  // directed link and every link must have exactly one reverse twin of equal
  // length. Parallel spans between the same node pair are allowed.
  static Network parse(const std::string& text);

  static Network parse_file(const std::string& path);

  // Canonical serialization: undirected form, edges sorted lexicographically
  // by (name_a, name_b, length) with name_a <= name_b. parse(serialize()) is
  // the identity on the canonical form.
  std::string serialize() const;

  int node_count() const { return static_cast<int>(node_names_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  int span_count() const { return static_cast<int>(spans_.size()); }

  NodeId node(const std::string& name) const;  // throws if unknown
  std::optional<NodeId> find_node(const std::string& name) const;
  const std::string& node_name(NodeId v) const { return node_names_.at(v); }

  const Link& link(LinkId e) const { return links_.at(e); }
  LinkId reverse(LinkId e) const;  // the other link of e's span
  const std::array<LinkId, 2>& span_links(SpanId s) const {
    return spans_.at(s);
  }
  double span_length(SpanId s) const { return links_[spans_.at(s)[0]].length; }

  std::span<const LinkId> out_links(NodeId v) const {
    return {out_.at(v).data(), out_.at(v).size()};
  }
  std::span<const LinkId> in_links(NodeId v) const {
    return {in_.at(v).data(), in_.at(v).size()};
  }

  // Number of spans incident to v.
  int nodal_degree(NodeId v) const;

  // Max nodal degree over all nodes (0 on an edgeless network).
  int max_nodal_degree() const;

  // Shortest-path distance from s to d over link lengths; nullopt when d is
  // unreachable.
  std::optional<double> shortest_path_cost(NodeId s, NodeId d) const;

  // Shortest path as a link sequence; empty when s == d.
  std::optional<std::vector<LinkId>> shortest_path(NodeId s, NodeId d) const;

 private:
  std::vector<std::string> node_names_;
  std::vector<Link> links_;
  std::vector<std::array<LinkId, 2>> spans_;
  std::vector<std::vector<LinkId>> out_, in_;

  friend class Builder;
};

// Programmatic construction, mainly for tests and generated fixtures.
class Network::Builder {
 public:
  NodeId add_node(const std::string& name);
  // Adds one span (two opposite links). Returns the span id.
  SpanId add_edge(NodeId a, NodeId b, double length);
  SpanId add_edge(const std::string& a, const std::string& b, double length);
  Network build() const;

 private:
  NodeId intern(const std::string& name);
  std::vector<std::string> names_;
  std::vector<std::tuple<NodeId, NodeId, double>> edges_;
};

// A span-disjoint pair of simple paths between one source and destination.
struct PathPair {
  std::vector<LinkId> primary;
  std::vector<LinkId> protection;
  double cost = 0.0;  // sum over both paths
};

// Minimum-total-cost span-disjoint path pair from s to d, via two rounds of
// successive shortest paths with link reversal. The cost is jointly optimal,
// not the sum of two independently shortest paths. Returns nullopt when no
// two span-disjoint paths exist (the demand is unprotectable).
std::optional<PathPair> disjoint_pair(const Network& net, NodeId s, NodeId d);

}  // namespace dcp

#endif  // DCP_NETGRAPH_HPP
