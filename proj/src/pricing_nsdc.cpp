#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pricing_detail.hpp"

namespace dcp::internal {

PathCodingModel build_path_coding_model(const Network& net, NodeId dest,
                                        const std::vector<double>& duals,
                                        bool coherent) {
  PathCodingModel mm;
  mm.net = &net;
  mm.dest = dest;
  mm.coherent = coherent;
  const int V = net.node_count();
  const int E = net.link_count();
  const int nd = net.nodal_degree(dest);
  mm.slots = std::max(0, nd - 1);
  mm.paths = 2 * mm.slots;
  mm.subgroups = 2 * mm.slots;
  LinearProgram& lp = mm.lp;
  const int K = mm.slots, P = mm.paths, S = mm.subgroups;

  mm.cg.assign(V, -1);
  mm.sigma.assign(V, std::vector<int>(K, -1));
  for (NodeId f = 0; f < V; ++f) {
    if (f == dest) continue;
    double pi = f < static_cast<int>(duals.size()) ? std::max(0.0, duals[f]) : 0.0;
    mm.cg[f] = lp.add_var(0, K, -pi, VarType::Integer, "cg_" + net.node_name(f));
    for (int i = 0; i < K; ++i)
      mm.sigma[f][i] = lp.add_var(0, 1, 0, VarType::Binary,
                                  "src_" + net.node_name(f) + "_" + std::to_string(i));
  }
  mm.x.assign(E, std::vector<int>(P, -1));
  for (LinkId e = 0; e < E; ++e) {
    const Link& l = net.link(e);
    std::string tag = net.node_name(l.tail) + "_" + net.node_name(l.head);
    for (int p = 0; p < P; ++p)
      mm.x[e][p] = lp.add_var(0, 1, 0, VarType::Binary,
                              "x_" + tag + "_" + std::to_string(p));
  }
  // Subgroup relabeling symmetry: path p may only sit in subgroups 0..p.
  mm.nvar.assign(P, std::vector<int>(S, -1));
  for (int p = 0; p < P; ++p)
    for (int s = 0; s <= p && s < S; ++s)
      mm.nvar[p][s] = lp.add_var(0, 1, 0, VarType::Binary,
                                 "n_" + std::to_string(p) + "_" + std::to_string(s));
  mm.tvar.assign(E, std::vector<int>(S, -1));
  for (LinkId e = 0; e < E; ++e)
    for (int s = 0; s < S; ++s)
      mm.tvar[e][s] = lp.add_var(0, 1, net.link(e).length, VarType::Binary,
                                 "t_" + std::to_string(e) + "_" + std::to_string(s));
  mm.m.assign(P, std::vector<int>(P, -1));
  for (int p = 0; p < P; ++p)
    for (int q = p + 1; q < P; ++q) {
      int v = lp.add_var(0, 1, 0, VarType::Binary,
                         "m_" + std::to_string(p) + "_" + std::to_string(q));
      mm.m[p][q] = mm.m[q][p] = v;
    }
  mm.r.assign(P, std::vector<int>(K, -1));
  for (int p = 0; p < P; ++p)
    for (int f = 0; f < K; ++f)
      mm.r[p][f] = lp.add_var(0, 1, 0, VarType::Binary,
                              "r_" + std::to_string(p) + "_" + std::to_string(f));
  if (coherent) {
    mm.theta.assign(P, std::vector<int>(P, -1));
    for (int p = 0; p < P; ++p)
      for (int q = p + 1; q < P; ++q) {
        bool siblings = mm.sibling(p) == q;
        // Rule 1: complementary paths are pinned noncoherent.
        int v = lp.add_var(siblings ? 1 : 0, 1, 0, VarType::Binary,
                           "nc_" + std::to_string(p) + "_" + std::to_string(q));
        mm.theta[p][q] = mm.theta[q][p] = v;
      }
  }

  auto cgv = [&](NodeId f) { return mm.cg[f]; };

  // Each demand slot has at most one source.
  for (int i = 0; i < K; ++i) {
    std::vector<std::pair<int, double>> row;
    for (NodeId f = 0; f < V; ++f)
      if (mm.sigma[f][i] >= 0) row.emplace_back(mm.sigma[f][i], 1.0);
    lp.add_row(row, RowSense::LE, 1, "one_source_" + std::to_string(i));
  }
  // Connection counts per source.
  for (NodeId f = 0; f < V; ++f) {
    if (cgv(f) < 0) continue;
    std::vector<std::pair<int, double>> row{{cgv(f), 1.0}};
    for (int i = 0; i < K; ++i) row.emplace_back(mm.sigma[f][i], -1.0);
    lp.add_row(row, RowSense::EQ, 0, "count_" + net.node_name(f));
  }
  // Total group size bound.
  {
    std::vector<std::pair<int, double>> row;
    for (NodeId f = 0; f < V; ++f)
      for (int i = 0; i < K; ++i)
        if (mm.sigma[f][i] >= 0) row.emplace_back(mm.sigma[f][i], 1.0);
    lp.add_row(row, RowSense::LE, K, "group_size");
  }
  // Slot symmetry: earlier slots are at least as loaded, and active slots
  // carry nondecreasing source indices.
  for (int i = 0; i + 1 < K; ++i) {
    std::vector<std::pair<int, double>> row;
    for (NodeId f = 0; f < V; ++f) {
      if (mm.sigma[f][i] < 0) continue;
      row.emplace_back(mm.sigma[f][i], 1.0);
      row.emplace_back(mm.sigma[f][i + 1], -1.0);
    }
    lp.add_row(row, RowSense::GE, 0);
    // src(i) <= src(i+1) + V * (1 - active(i+1))
    std::vector<std::pair<int, double>> order;
    for (NodeId f = 0; f < V; ++f) {
      if (mm.sigma[f][i] < 0) continue;
      order.emplace_back(mm.sigma[f][i], -static_cast<double>(f));
      order.emplace_back(mm.sigma[f][i + 1], static_cast<double>(f) - V);
    }
    lp.add_row(order, RowSense::GE, -V);
  }

  // Path flow conservation: each path of slot i carries one unit from the
  // slot's source to the destination.
  for (int i = 0; i < K; ++i) {
    for (int off = 0; off < 2; ++off) {
      int p = 2 * i + off;
      for (NodeId v = 0; v < V; ++v) {
        std::vector<std::pair<int, double>> row;
        for (LinkId e : net.in_links(v)) row.emplace_back(mm.x[e][p], 1.0);
        for (LinkId e : net.out_links(v)) row.emplace_back(mm.x[e][p], -1.0);
        if (v == dest) {
          for (NodeId f = 0; f < V; ++f)
            if (mm.sigma[f][i] >= 0) row.emplace_back(mm.sigma[f][i], -1.0);
          lp.add_row(row, RowSense::EQ, 0);
        } else {
          if (mm.sigma[v][i] >= 0) row.emplace_back(mm.sigma[v][i], 1.0);
          lp.add_row(row, RowSense::EQ, 0);
        }
      }
      // Paths terminate at the destination and never leave it.
      std::vector<std::pair<int, double>> stay;
      for (LinkId e : net.out_links(dest)) stay.emplace_back(mm.x[e][p], 1.0);
      if (!stay.empty()) lp.add_row(stay, RowSense::EQ, 0);
    }
  }

  // Every path sits in exactly one subgroup; sibling paths split.
  for (int p = 0; p < P; ++p) {
    std::vector<std::pair<int, double>> row;
    for (int s = 0; s < S; ++s)
      if (mm.nvar[p][s] >= 0) row.emplace_back(mm.nvar[p][s], 1.0);
    lp.add_row(row, RowSense::EQ, 1, "in_subgroup_" + std::to_string(p));
  }
  for (int i = 0; i < K; ++i)
    for (int s = 0; s < S; ++s) {
      int a = mm.nvar[2 * i][s], b = mm.nvar[2 * i + 1][s];
      if (a >= 0 && b >= 0)
        lp.add_row({{a, 1.0}, {b, 1.0}}, RowSense::LE, 1);
    }

  // Subgroup topology compilation.
  for (LinkId e = 0; e < E; ++e)
    for (int p = 0; p < P; ++p)
      for (int s = 0; s < S; ++s) {
        if (mm.nvar[p][s] < 0) continue;
        lp.add_row({{mm.tvar[e][s], 1.0}, {mm.x[e][p], -1.0}, {mm.nvar[p][s], -1.0}},
                   RowSense::GE, -1);
      }

  if (!coherent) {
    // Strict inter-subgroup span-disjointness.
    for (SpanId sp = 0; sp < net.span_count(); ++sp) {
      auto [e1, e2] = net.span_links(sp);
      for (int s1 = 0; s1 < S; ++s1)
        for (int s2 = s1 + 1; s2 < S; ++s2)
          lp.add_row({{mm.tvar[e1][s1], 1.0},
                      {mm.tvar[e2][s1], 1.0},
                      {mm.tvar[e1][s2], 1.0},
                      {mm.tvar[e2][s2], 1.0}},
                     RowSense::LE, 1);
    }
  }

  // Paths in the same subgroup are coded together.
  for (int p = 0; p < P; ++p)
    for (int q = p + 1; q < P; ++q)
      for (int s = 0; s < S; ++s) {
        if (mm.nvar[p][s] < 0 || mm.nvar[q][s] < 0) continue;
        lp.add_row({{mm.m[p][q], 1.0}, {mm.nvar[p][s], -1.0}, {mm.nvar[q][s], -1.0}},
                   RowSense::GE, -1);
      }

  // Indirect relation seeding: path p relates to demand f through a path j
  // coded with p whose sibling is coded with one of f's paths, unless p is
  // itself coded with f's paths.
  for (int p = 0; p < P; ++p)
    for (int f = 0; f < K; ++f) {
      int fa = 2 * f, fb = 2 * f + 1;
      if (p == fa || p == fb) continue;
      for (int j = 0; j < P; ++j) {
        if (j == p || j == fa || j == fb) continue;
        int js = mm.sibling(j);
        std::vector<std::pair<int, double>> row{{mm.r[p][f], 1.0},
                                                {mm.m[p][j], -1.0}};
        if (js != fa && mm.m[js][fa] >= 0) row.emplace_back(mm.m[js][fa], -1.0);
        if (js != fb && mm.m[js][fb] >= 0) row.emplace_back(mm.m[js][fb], -1.0);
        row.emplace_back(mm.m[p][fa], 1.0);
        row.emplace_back(mm.m[p][fb], 1.0);
        lp.add_row(row, RowSense::GE, -1);
      }
    }
  // Indirect relation transitivity across demands.
  for (int p = 0; p < P; ++p)
    for (int f = 0; f < K; ++f) {
      if (p == 2 * f || p == 2 * f + 1) continue;
      for (int g = 0; g < K; ++g) {
        if (g == f || p == 2 * g || p == 2 * g + 1) continue;
        lp.add_row({{mm.r[p][f], 1.0},
                    {mm.r[p][g], -1.0},
                    {mm.m[2 * g][2 * f], -1.0},
                    {mm.m[2 * g][2 * f + 1], -1.0},
                    {mm.m[2 * g + 1][2 * f], -1.0},
                    {mm.m[2 * g + 1][2 * f + 1], -1.0}},
                   RowSense::GE, -2);
      }
    }
  // Two demands are either indirectly related or directly coded, never
  // both and never twice: excludes coding cycles.
  for (int f = 0; f < K; ++f)
    for (int g = 0; g < K; ++g) {
      if (f == g) continue;
      lp.add_row({{mm.r[2 * f][g], 1.0},
                  {mm.r[2 * f + 1][g], 1.0},
                  {mm.m[2 * f][2 * g], 1.0},
                  {mm.m[2 * f + 1][2 * g], 1.0},
                  {mm.m[2 * f][2 * g + 1], 1.0},
                  {mm.m[2 * f + 1][2 * g + 1], 1.0}},
                 RowSense::LE, 1);
    }

  if (coherent) {
    // Rules 2+3: siblings coded together force noncoherence.
    for (int p = 0; p < P; ++p)
      for (int q = p + 1; q < P; ++q) {
        if (mm.sibling(p) == q) continue;
        int ps = mm.sibling(p), qs = mm.sibling(q);
        if (ps == qs) continue;
        lp.add_row({{mm.theta[p][q], 1.0}, {mm.m[ps][qs], -1.0}}, RowSense::GE, 0);
      }
    // Rules 3+4 closure: noncoherent with j and j coded with k's sibling
    // makes k noncoherent too.
    for (int p = 0; p < P; ++p)
      for (int j = 0; j < P; ++j) {
        if (j == p) continue;
        for (int k = 0; k < P; ++k) {
          if (k == p || k == j) continue;
          int ks = mm.sibling(k);
          if (ks == j) continue;
          lp.add_row({{mm.theta[p][k], 1.0},
                      {mm.theta[p][j], -1.0},
                      {mm.m[j][ks], -1.0}},
                     RowSense::GE, -1);
        }
      }
    // Noncoherent paths cannot share a span.
    for (SpanId sp = 0; sp < net.span_count(); ++sp) {
      auto [e1, e2] = net.span_links(sp);
      for (int p = 0; p < P; ++p)
        for (int q = p + 1; q < P; ++q)
          lp.add_row({{mm.x[e1][p], 1.0},
                      {mm.x[e2][p], 1.0},
                      {mm.x[e1][q], 1.0},
                      {mm.x[e2][q], 1.0},
                      {mm.theta[p][q], 1.0}},
                     RowSense::LE, 2);
    }
  }
  return mm;
}

CodingStructure PathCodingModel::decode(const std::vector<double>& sol) const {
  const Network& n = *net;
  CodingStructure cs;
  cs.destination = dest;

  auto bin = [&](int var) { return var >= 0 && std::llround(sol[var]) == 1; };

  // Active slots become signals, in slot order.
  std::vector<int> slot_signal(slots, -1);
  for (int i = 0; i < slots; ++i) {
    for (NodeId f = 0; f < n.node_count(); ++f) {
      if (sigma[f][i] >= 0 && bin(sigma[f][i])) {
        slot_signal[i] = static_cast<int>(cs.signal_sources.size());
        cs.signal_sources.push_back(f);
        break;
      }
    }
  }

  // Map used subgroup ids onto a compact range.
  std::vector<int> sub_map(subgroups, -1);
  auto path_subgroup = [&](int p) {
    for (int s = 0; s < subgroups; ++s)
      if (nvar[p][s] >= 0 && bin(nvar[p][s])) return s;
    throw std::logic_error("pricing solution: path without subgroup");
  };
  for (int i = 0; i < slots; ++i) {
    if (slot_signal[i] < 0) continue;
    for (int off = 0; off < 2; ++off) {
      int s = path_subgroup(2 * i + off);
      if (sub_map[s] < 0) {
        sub_map[s] = static_cast<int>(cs.subgroups.size());
        cs.subgroups.emplace_back();
      }
    }
  }
  for (int i = 0; i < slots; ++i) {
    if (slot_signal[i] < 0) continue;
    NodeId src = cs.signal_sources[slot_signal[i]];
    for (int off = 0; off < 2; ++off) {
      int p = 2 * i + off;
      int s = sub_map[path_subgroup(p)];
      std::vector<int> avail(n.link_count(), 0);
      for (LinkId e = 0; e < n.link_count(); ++e)
        avail[e] = bin(x[e][p]) ? 1 : 0;
      std::vector<LinkId> links = walk_unit_flow(n, src, dest, avail);
      cs.subgroups[s].push_back(slot_signal[i]);
      cs.paths.push_back({slot_signal[i], s, links});
    }
  }
  return cs;
}

std::vector<double> PathCodingModel::singleton_start(NodeId source,
                                                     const PathPair& pair) const {
  std::vector<double> sol(lp.num_vars(), 0.0);
  if (slots < 1) return sol;
  const Network& n = *net;
  sol[sigma[source][0]] = 1.0;
  sol[cg[source]] = 1.0;
  for (LinkId e : pair.primary) sol[x[e][0]] = 1.0;
  for (LinkId e : pair.protection) sol[x[e][1]] = 1.0;
  for (int p = 0; p < paths; ++p) sol[nvar[p][p]] = 1.0;
  for (LinkId e : pair.primary) sol[tvar[e][0]] = 1.0;
  for (LinkId e : pair.protection) sol[tvar[e][1]] = 1.0;
  if (coherent)
    for (int i = 0; i < slots; ++i) sol[theta[2 * i][2 * i + 1]] = 1.0;
  return sol;
}

}  // namespace dcp::internal
