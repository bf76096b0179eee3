#include "dcp/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace dcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

}  // namespace

NodeId Network::node(const std::string& name) const {
  auto id = find_node(name);
  if (!id) throw std::out_of_range("unknown node: " + name);
  return *id;
}

std::optional<NodeId> Network::find_node(const std::string& name) const {
  for (NodeId v = 0; v < node_count(); ++v)
    if (node_names_[v] == name) return v;
  return std::nullopt;
}

LinkId Network::reverse(LinkId e) const {
  const auto& pair = spans_.at(links_.at(e).span);
  return pair[0] == e ? pair[1] : pair[0];
}

int Network::nodal_degree(NodeId v) const {
  if (v < 0 || v >= node_count()) throw std::out_of_range("unknown node id");
  return static_cast<int>(out_[v].size());
}

int Network::max_nodal_degree() const {
  int d = 0;
  for (NodeId v = 0; v < node_count(); ++v)
    d = std::max(d, nodal_degree(v));
  return d;
}

NodeId Network::Builder::add_node(const std::string& name) {
  for (NodeId v = 0; v < static_cast<NodeId>(names_.size()); ++v)
    if (names_[v] == name) return v;
  names_.push_back(name);
  return static_cast<NodeId>(names_.size()) - 1;
}

NodeId Network::Builder::intern(const std::string& name) {
  return add_node(name);
}

SpanId Network::Builder::add_edge(NodeId a, NodeId b, double length) {
  if (a == b) throw std::invalid_argument("self-loop edge");
  if (!(length > 0)) throw std::invalid_argument("nonpositive edge length");
  edges_.emplace_back(a, b, length);
  return static_cast<SpanId>(edges_.size()) - 1;
}

SpanId Network::Builder::add_edge(const std::string& a, const std::string& b,
                                  double length) {
  NodeId va = intern(a);
  NodeId vb = intern(b);
  return add_edge(va, vb, length);
}

Network Network::Builder::build() const {
  Network net;
  net.node_names_ = names_;
  net.out_.assign(names_.size(), {});
  net.in_.assign(names_.size(), {});
  for (const auto& [a, b, len] : edges_) {
    LinkId fwd = static_cast<LinkId>(net.links_.size());
    SpanId sp = static_cast<SpanId>(net.spans_.size());
    net.links_.push_back({a, b, len, sp});
    net.links_.push_back({b, a, len, sp});
    net.spans_.push_back({fwd, fwd + 1});
    net.out_[a].push_back(fwd);
    net.in_[b].push_back(fwd);
    net.out_[b].push_back(fwd + 1);
    net.in_[a].push_back(fwd + 1);
  }
  return net;
}

Network Network::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  bool directed = false;
  int declared_nodes = -1;
  Builder builder;

  // Directed mode collects links first and pairs them afterwards.
  struct RawLink {
    std::string a, b;
    double len;
    int line;
  };
  std::vector<RawLink> raw;

  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "nodes")
        throw ParseError(lineno, "expected header 'nodes <n>'");
      try {
        declared_nodes = std::stoi(toks[1]);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad node count '" + toks[1] + "'");
      }
      if (declared_nodes <= 0) throw ParseError(lineno, "node count must be positive");
      saw_header = true;
      continue;
    }
    if (toks.size() == 1 && toks[0] == "directed") {
      directed = true;
      continue;
    }
    if (toks.size() != 3)
      throw ParseError(lineno, "expected '<name_a> <name_b> <length>'");
    double len;
    try {
      size_t pos = 0;
      len = std::stod(toks[2], &pos);
      if (pos != toks[2].size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad length '" + toks[2] + "'");
    }
    if (toks[0] == toks[1])
      throw ParseError(lineno, "self-loop link '" + toks[0] + "'");
    if (!(len > 0))
      throw ParseError(lineno, "nonpositive length on edge " + toks[0] + " " + toks[1]);
    if (directed) {
      raw.push_back({toks[0], toks[1], len, lineno});
    } else {
      builder.add_edge(toks[0], toks[1], len);
    }
  }
  if (!saw_header) throw ParseError(lineno, "missing 'nodes <n>' header");

  if (directed) {
    // Pair each directed link with its reverse twin of equal length.
    std::vector<bool> used(raw.size(), false);
    for (size_t i = 0; i < raw.size(); ++i) {
      for (size_t j = i + 1; j < raw.size(); ++j) {
        if (used[j]) continue;
        if (raw[i].a == raw[j].a && raw[i].b == raw[j].b &&
            raw[i].len == raw[j].len && !used[i])
          throw ParseError(raw[j].line, "duplicate link " + raw[j].a + " -> " + raw[j].b);
      }
    }
    for (size_t i = 0; i < raw.size(); ++i) {
      if (used[i]) continue;
      bool paired = false;
      for (size_t j = i + 1; j < raw.size(); ++j) {
        if (used[j]) continue;
        if (raw[i].a == raw[j].b && raw[i].b == raw[j].a) {
          if (raw[i].len != raw[j].len)
            throw ParseError(raw[j].line, "reverse link length mismatch on " +
                                              raw[j].a + " -> " + raw[j].b);
          used[i] = used[j] = true;
          builder.add_edge(raw[i].a, raw[i].b, raw[i].len);
          paired = true;
          break;
        }
      }
      if (!paired)
        throw ParseError(raw[i].line,
                         "unpaired link " + raw[i].a + " -> " + raw[i].b);
    }
  }

  Network net = builder.build();
  if (net.node_count() != declared_nodes)
    throw ParseError(lineno, "header declares " + std::to_string(declared_nodes) +
                                 " nodes, file defines " +
                                 std::to_string(net.node_count()));
  return net;
}

Network Network::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Network::serialize() const {
  struct Edge {
    std::string a, b;
    double len;
  };
  std::vector<Edge> edges;
  for (SpanId s = 0; s < span_count(); ++s) {
    const Link& l = links_[spans_[s][0]];
    std::string na = node_names_[l.tail], nb = node_names_[l.head];
    if (nb < na) std::swap(na, nb);
    edges.push_back({na, nb, l.length});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b, x.len) < std::tie(y.a, y.b, y.len);
  });
  std::ostringstream out;
  out << "nodes " << node_count() << "\n";
  for (const auto& e : edges) {
    out << e.a << " " << e.b << " ";
    std::ostringstream num;
    num.precision(15);
    num << e.len;
    out << num.str() << "\n";
  }
  return out.str();
}

std::optional<double> Network::shortest_path_cost(NodeId s, NodeId d) const {
  auto p = shortest_path(s, d);
  if (!p) return std::nullopt;
  double c = 0;
  for (LinkId e : *p) c += links_[e].length;
  return c;
}

std::optional<std::vector<LinkId>> Network::shortest_path(NodeId s,
                                                          NodeId d) const {
  if (s < 0 || s >= node_count() || d < 0 || d >= node_count())
    throw std::out_of_range("unknown node id");
  std::vector<double> dist(node_count(), kInf);
  std::vector<LinkId> via(node_count(), -1);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0;
  pq.push({0, s});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[v]) continue;
    for (LinkId e : out_[v]) {
      NodeId w = links_[e].head;
      double nd = dv + links_[e].length;
      if (nd < dist[w]) {
        dist[w] = nd;
        via[w] = e;
        pq.push({nd, w});
      }
    }
  }
  if (dist[d] == kInf) return std::nullopt;
  std::vector<LinkId> path;
  for (NodeId v = d; v != s; v = links_[via[v]].tail) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// State for the two-iteration successive-shortest-paths construction.
// Span-disjointness is obtained by banning the whole span of every link on
// the first path and allowing the reverse of used links at negative cost.
struct ResidualGraph {
  const Network& net;
  std::vector<bool> banned_link;    // cannot traverse at all
  std::vector<bool> negated_link;   // traverse at -length (undo first path)

  explicit ResidualGraph(const Network& n)
      : net(n),
        banned_link(n.link_count(), false),
        negated_link(n.link_count(), false) {}

  double cost(LinkId e) const {
    return negated_link[e] ? -net.link(e).length : net.link(e).length;
  }
};

// Bellman-Ford; tolerates the negative arcs introduced by path reversal.
std::optional<std::vector<LinkId>> residual_shortest_path(
    const ResidualGraph& rg, NodeId s, NodeId d) {
  const Network& net = rg.net;
  std::vector<double> dist(net.node_count(), kInf);
  std::vector<LinkId> via(net.node_count(), -1);
  dist[s] = 0;
  for (int round = 0; round < net.node_count(); ++round) {
    bool changed = false;
    for (LinkId e = 0; e < net.link_count(); ++e) {
      if (rg.banned_link[e]) continue;
      const Link& l = net.link(e);
      if (dist[l.tail] == kInf) continue;
      double nd = dist[l.tail] + rg.cost(e);
      if (nd < dist[l.head] - 1e-12) {
        dist[l.head] = nd;
        via[l.head] = e;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (dist[d] == kInf) return std::nullopt;
  std::vector<LinkId> path;
  std::vector<bool> seen(net.node_count(), false);
  for (NodeId v = d; v != s; v = net.link(via[v]).tail) {
    if (seen[v]) return std::nullopt;  // negative-cycle guard
    seen[v] = true;
    path.push_back(via[v]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<PathPair> disjoint_pair(const Network& net, NodeId s, NodeId d) {
  if (s == d) throw std::invalid_argument("disjoint_pair: s == d");
  auto first = net.shortest_path(s, d);
  if (!first) return std::nullopt;

  ResidualGraph rg(net);
  for (LinkId e : *first) {
    // Ban both directions of the span except the reverse arc, which becomes
    // the negative-cost undo arc.
    rg.banned_link[e] = true;
    LinkId r = net.reverse(e);
    rg.negated_link[r] = true;
  }
  auto second = residual_shortest_path(rg, s, d);
  if (!second) return std::nullopt;

  // Cancel interlacing: a span traversed by path one and undone by path two
  // drops out entirely.
  std::vector<int> use(net.link_count(), 0);
  for (LinkId e : *first) use[e] += 1;
  for (LinkId e : *second) {
    LinkId r = net.reverse(e);
    if (use[r] > 0)
      use[r] -= 1;
    else
      use[e] += 1;
  }

  // Decompose the remaining 2-unit flow into two paths from s.
  auto walk = [&](std::vector<int>& avail) -> std::vector<LinkId> {
    std::vector<LinkId> path;
    NodeId v = s;
    while (v != d) {
      LinkId next = -1;
      for (LinkId e : net.out_links(v)) {
        if (avail[e] > 0) {
          next = e;
          break;
        }
      }
      if (next < 0) throw std::logic_error("disjoint_pair: broken flow");
      avail[next] -= 1;
      path.push_back(next);
      v = net.link(next).head;
    }
    return path;
  };
  std::vector<LinkId> p1 = walk(use);
  std::vector<LinkId> p2 = walk(use);

  auto path_cost = [&](const std::vector<LinkId>& p) {
    double c = 0;
    for (LinkId e : p) c += net.link(e).length;
    return c;
  };
  double c1 = path_cost(p1), c2 = path_cost(p2);
  PathPair pair;
  if (c2 < c1 || (c1 == c2 && p2 < p1)) {
    pair.primary = std::move(p2);
    pair.protection = std::move(p1);
  } else {
    pair.primary = std::move(p1);
    pair.protection = std::move(p2);
  }
  pair.cost = c1 + c2;
  return pair;
}

}  // namespace dcp
