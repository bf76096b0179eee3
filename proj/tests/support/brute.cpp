#include "brute.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace dcp::testing {

std::vector<std::vector<LinkId>> all_simple_paths(const Network& net, NodeId s,
                                                  NodeId d) {
  std::vector<std::vector<LinkId>> out;
  std::vector<LinkId> cur;
  std::vector<bool> visited(net.node_count(), false);
  std::function<void(NodeId)> dfs = [&](NodeId v) {
    if (v == d) {
      out.push_back(cur);
      return;
    }
    visited[v] = true;
    for (LinkId e : net.out_links(v)) {
      NodeId w = net.link(e).head;
      if (visited[w]) continue;
      cur.push_back(e);
      dfs(w);
      cur.pop_back();
    }
    visited[v] = false;
  };
  dfs(s);
  return out;
}

double path_cost(const Network& net, const std::vector<LinkId>& path) {
  double c = 0;
  for (LinkId e : path) c += net.link(e).length;
  return c;
}

std::optional<double> brute_best_pair_cost(const Network& net, NodeId s,
                                           NodeId d) {
  auto paths = all_simple_paths(net, s, d);
  auto spans_of = [&](const std::vector<LinkId>& p) {
    std::set<SpanId> spans;
    for (LinkId e : p) spans.insert(net.link(e).span);
    return spans;
  };
  std::optional<double> best;
  for (size_t i = 0; i < paths.size(); ++i) {
    auto si = spans_of(paths[i]);
    for (size_t j = i + 1; j < paths.size(); ++j) {
      auto sj = spans_of(paths[j]);
      bool disjoint = true;
      for (SpanId sp : sj)
        if (si.count(sp)) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;
      double c = path_cost(net, paths[i]) + path_cost(net, paths[j]);
      if (!best || c < *best) best = c;
    }
  }
  return best;
}

}  // namespace dcp::testing
