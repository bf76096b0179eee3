#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pricing_detail.hpp"

namespace dcp::internal {

double default_alpha(const Network& net) {
  return 1.0 / (2.0 * std::max(1, net.node_count()));
}

double default_beta(const Network& net) {
  return 2.0 * std::max(net.node_count(), net.max_nodal_degree());
}

std::vector<LinkId> walk_unit_flow(const Network& net, NodeId from, NodeId to,
                                   std::vector<int>& avail) {
  std::vector<LinkId> path;
  NodeId v = from;
  int guard = 0;
  while (v != to) {
    if (++guard > net.link_count() + 1)
      throw std::logic_error("pricing solution: cyclic or broken flow");
    LinkId next = -1;
    for (LinkId e : net.out_links(v)) {
      if (avail[e] > 0) {
        next = e;
        break;
      }
    }
    if (next < 0) throw std::logic_error("pricing solution: flow dead-ends");
    avail[next] -= 1;
    path.push_back(next);
    v = net.link(next).head;
  }
  return path;
}

SdcModel build_sdc_model(const Network& net, NodeId dest,
                         const std::vector<double>& duals,
                         const std::map<NodeId, int>* fixed_counts, double alpha,
                         double beta) {
  SdcModel mm;
  mm.net = &net;
  mm.dest = dest;
  LinearProgram& lp = mm.lp;

  const int nd = net.nodal_degree(dest);
  const int max_group = std::max(0, nd - 1);
  const int V = net.node_count();
  const int E = net.link_count();

  mm.cg.assign(V, -1);
  for (NodeId f = 0; f < V; ++f) {
    if (f == dest) continue;
    double lb = 0, ub = max_group;
    if (fixed_counts) {
      auto it = fixed_counts->find(f);
      lb = ub = it == fixed_counts->end() ? 0 : it->second;
    }
    double pi = f < static_cast<int>(duals.size()) ? std::max(0.0, duals[f]) : 0.0;
    mm.cg[f] = lp.add_var(lb, ub, -pi, VarType::Integer,
                          "cg_" + net.node_name(f));
  }
  mm.alpha = alpha;
  mm.dvar.resize(E);
  mm.cvar.resize(E);
  for (LinkId e = 0; e < E; ++e) {
    const Link& l = net.link(e);
    std::string tag = net.node_name(l.tail) + "_" + net.node_name(l.head);
    mm.dvar[e] = lp.add_var(0, 1, l.length, VarType::Binary, "d_" + tag);
    mm.cvar[e] = lp.add_var(0, 1, l.length, VarType::Binary, "c_" + tag);
  }
  mm.gvar.resize(V);
  mm.pvar.resize(V);
  std::vector<int>& gvar = mm.gvar;
  std::vector<int>& pvar = mm.pvar;
  for (NodeId v = 0; v < V; ++v) {
    gvar[v] = lp.add_var(0, 1, 0, VarType::Continuous, "g_" + net.node_name(v));
    pvar[v] = lp.add_var(0, 1, 0, VarType::Continuous, "p_" + net.node_name(v));
  }

  // Group size cap: at most ND-1 connections.
  {
    std::vector<std::pair<int, double>> row;
    for (NodeId f = 0; f < V; ++f)
      if (mm.cg[f] >= 0) row.emplace_back(mm.cg[f], 1.0);
    lp.add_row(row, RowSense::LE, max_group, "group_size");
  }

  // Primary tree: origination and continuation at every non-destination
  // node, termination at the destination.
  for (NodeId f = 0; f < V; ++f) {
    if (f == dest) continue;
    std::vector<std::pair<int, double>> row;
    for (LinkId e : net.out_links(f)) row.emplace_back(mm.dvar[e], 1.0);
    for (LinkId e : net.in_links(f)) row.emplace_back(mm.dvar[e], -1.0);
    row.emplace_back(mm.cg[f], -1.0);
    lp.add_row(row, RowSense::EQ, 0, "pri_flow_" + net.node_name(f));
  }
  {
    std::vector<std::pair<int, double>> row;
    for (LinkId e : net.in_links(dest)) row.emplace_back(mm.dvar[e], 1.0);
    for (NodeId f = 0; f < V; ++f)
      if (mm.cg[f] >= 0) row.emplace_back(mm.cg[f], -1.0);
    lp.add_row(row, RowSense::EQ, 0, "pri_term");
  }
  {
    // Nothing leaves the destination on either tree.
    std::vector<std::pair<int, double>> row;
    for (LinkId e : net.out_links(dest)) {
      row.emplace_back(mm.dvar[e], 1.0);
      row.emplace_back(mm.cvar[e], 1.0);
    }
    if (!row.empty()) lp.add_row(row, RowSense::EQ, 0, "dest_no_exit");
  }

  // Protection tree origination/continuation (beta-scaled) plus integer
  // strengthenings that do not change the integer feasible set.
  for (NodeId f = 0; f < V; ++f) {
    if (f == dest) continue;
    std::vector<std::pair<int, double>> row;
    for (LinkId e : net.out_links(f)) row.emplace_back(mm.cvar[e], 1.0);
    row.emplace_back(mm.cg[f], -1.0 / beta);
    for (LinkId e : net.in_links(f)) row.emplace_back(mm.cvar[e], -1.0 / beta);
    lp.add_row(row, RowSense::GE, 0, "pro_flow_" + net.node_name(f));

    if (max_group >= 1) {
      std::vector<std::pair<int, double>> cut;
      for (LinkId e : net.out_links(f)) cut.emplace_back(mm.cvar[e], max_group);
      cut.emplace_back(mm.cg[f], -1.0);
      lp.add_row(cut, RowSense::GE, 0, "pro_orig_cut_" + net.node_name(f));
    }
    for (LinkId in : net.in_links(f)) {
      std::vector<std::pair<int, double>> cut;
      for (LinkId e : net.out_links(f)) cut.emplace_back(mm.cvar[e], 1.0);
      cut.emplace_back(mm.cvar[in], -1.0);
      lp.add_row(cut, RowSense::GE, 0);
    }
  }
  {
    std::vector<std::pair<int, double>> row;
    for (LinkId e : net.in_links(dest)) row.emplace_back(mm.cvar[e], 1.0);
    for (NodeId f = 0; f < V; ++f)
      if (mm.cg[f] >= 0) row.emplace_back(mm.cg[f], -1.0 / beta);
    lp.add_row(row, RowSense::GE, 0, "pro_term");
    if (max_group >= 1) {
      std::vector<std::pair<int, double>> cut;
      for (LinkId e : net.in_links(dest)) cut.emplace_back(mm.cvar[e], max_group);
      for (NodeId f = 0; f < V; ++f)
        if (mm.cg[f] >= 0) cut.emplace_back(mm.cg[f], -1.0);
      lp.add_row(cut, RowSense::GE, 0, "pro_term_cut");
    }
  }

  // Primary and protection trees are span-disjoint as a whole.
  for (SpanId sp = 0; sp < net.span_count(); ++sp) {
    auto [e1, e2] = net.span_links(sp);
    lp.add_row({{mm.dvar[e1], 1.0},
                {mm.dvar[e2], 1.0},
                {mm.cvar[e1], 1.0},
                {mm.cvar[e2], 1.0}},
               RowSense::LE, 1, "span_" + std::to_string(sp));
  }

  // Voltage anti-cycle rows: head minus tail potential rises by alpha along
  // every used link.
  for (LinkId e = 0; e < E; ++e) {
    const Link& l = net.link(e);
    lp.add_row({{gvar[l.head], 1.0}, {gvar[l.tail], -1.0}, {mm.dvar[e], -(alpha + 1)}},
               RowSense::GE, -1);
    lp.add_row({{pvar[l.head], 1.0}, {pvar[l.tail], -1.0}, {mm.cvar[e], -(alpha + 1)}},
               RowSense::GE, -1);
  }
  return mm;
}

CodingStructure SdcModel::decode(const std::vector<double>& x) const {
  const Network& n = *net;
  CodingStructure cs;
  cs.destination = dest;

  std::vector<int> counts(n.node_count(), 0);
  for (NodeId f = 0; f < n.node_count(); ++f)
    if (cg[f] >= 0) counts[f] = static_cast<int>(std::llround(x[cg[f]]));

  std::vector<int> pavail(n.link_count(), 0), cavail(n.link_count(), 0);
  for (LinkId e = 0; e < n.link_count(); ++e) {
    pavail[e] = static_cast<int>(std::llround(x[dvar[e]]));
    cavail[e] = static_cast<int>(std::llround(x[cvar[e]]));
  }

  // One protection branch per source, shared by all its connections; the
  // branch walk does not consume tree links since branches merge.
  auto protection_branch = [&](NodeId f) {
    std::vector<LinkId> branch;
    NodeId v = f;
    int guard = 0;
    while (v != dest) {
      if (++guard > n.link_count() + 1)
        throw std::logic_error("protection tree: cyclic walk");
      LinkId next = -1;
      for (LinkId e : n.out_links(v))
        if (cavail[e] > 0) {
          next = e;
          break;
        }
      if (next < 0) throw std::logic_error("protection tree: dead end");
      branch.push_back(next);
      v = n.link(next).head;
    }
    return branch;
  };

  int parity = -1;  // subgroup index of the parity row, assigned below
  std::vector<std::vector<LinkId>> primaries;
  std::vector<NodeId> sources;
  for (NodeId f = 0; f < n.node_count(); ++f) {
    for (int k = 0; k < counts[f]; ++k) {
      primaries.push_back(walk_unit_flow(n, f, dest, pavail));
      sources.push_back(f);
    }
  }
  int nsig = static_cast<int>(sources.size());
  cs.signal_sources = sources;
  for (int i = 0; i < nsig; ++i) cs.subgroups.push_back({i});
  std::vector<int> all(nsig);
  for (int i = 0; i < nsig; ++i) all[i] = i;
  if (nsig > 0) {
    cs.subgroups.push_back(all);
    parity = nsig;
  }
  for (int i = 0; i < nsig; ++i) cs.paths.push_back({i, i, primaries[i]});
  for (int i = 0; i < nsig; ++i)
    cs.paths.push_back({i, parity, protection_branch(sources[i])});
  return cs;
}

std::vector<double> SdcModel::singleton_start(NodeId source,
                                              const PathPair& pair) const {
  const Network& n = *net;
  std::vector<double> x(lp.num_vars(), 0.0);
  x[cg[source]] = 1.0;
  for (LinkId e : pair.primary) x[dvar[e]] = 1.0;
  for (LinkId e : pair.protection) x[cvar[e]] = 1.0;
  // Voltages step by alpha along each used link, zero elsewhere.
  double level = 0;
  for (LinkId e : pair.primary) {
    level += alpha;
    x[gvar[n.link(e).head]] = level;
  }
  level = 0;
  for (LinkId e : pair.protection) {
    level += alpha;
    x[pvar[n.link(e).head]] = level;
  }
  return x;
}

}  // namespace dcp::internal
