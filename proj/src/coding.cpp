#include "dcp/coding.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace dcp {

int CodingStructure::path_index(int signal, int subgroup) const {
  for (int p = 0; p < static_cast<int>(paths.size()); ++p)
    if (paths[p].signal == signal && paths[p].subgroup == subgroup) return p;
  return -1;
}

int CodingStructure::complement_path(int path) const {
  const Path& p = paths.at(path);
  for (int q = 0; q < static_cast<int>(paths.size()); ++q)
    if (q != path && paths[q].signal == p.signal) return q;
  return -1;
}

std::vector<int> CodingStructure::coded_with(int path) const {
  std::vector<int> out;
  int sg = paths.at(path).subgroup;
  for (int q = 0; q < static_cast<int>(paths.size()); ++q)
    if (q != path && paths[q].subgroup == sg) out.push_back(q);
  return out;
}

bool CodingStructure::path_uses_span(int path, const Network& net,
                                     SpanId sp) const {
  for (LinkId e : paths.at(path).links)
    if (net.link(e).span == sp) return true;
  return false;
}

int CodingGroup::size() const {
  int s = 0;
  for (const auto& [f, c] : counts) s += c;
  return s;
}

ReceivedVector intact_vector(const CodingStructure& cs) {
  ReceivedVector rv;
  rv.rows.assign(cs.num_subgroups(), 0);
  for (const auto& p : cs.paths)
    rv.rows[p.subgroup] |= SignalMask{1} << p.signal;
  return rv;
}

ReceivedVector simulate_span_failure(const CodingStructure& cs,
                                     const Network& net, SpanId sp) {
  if (sp < 0 || sp >= net.span_count())
    throw std::out_of_range("unknown span id");
  ReceivedVector rv;
  rv.rows.assign(cs.num_subgroups(), 0);
  for (int p = 0; p < static_cast<int>(cs.paths.size()); ++p) {
    if (cs.path_uses_span(p, net, sp)) continue;
    rv.rows[cs.paths[p].subgroup] |= SignalMask{1} << cs.paths[p].signal;
  }
  return rv;
}

bool is_decodable(const ReceivedVector& rv, int n_signals) {
  // GF(2) Gaussian elimination over the bit rows.
  std::vector<SignalMask> rows;
  for (SignalMask r : rv.rows)
    if (r) rows.push_back(r);
  int rank = 0;
  for (int bit = 0; bit < n_signals; ++bit) {
    SignalMask mask = SignalMask{1} << bit;
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i] & mask) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank == n_signals;
}

bool hall_check(const ReceivedVector& rv, int n_signals) {
  if (n_signals > 20)
    throw std::invalid_argument("hall_check limited to 20 signals");
  if (n_signals == 0) return true;
  std::vector<SignalMask> rows;
  for (SignalMask r : rv.rows)
    if (r) rows.push_back(r);
  // Every subset of k signals must touch at least k nonzero subgroups (the
  // k = 1 case is exactly "one copy of each signal is alive").
  for (SignalMask subset = 1; subset < (SignalMask{1} << n_signals); ++subset) {
    int k = std::popcount(subset);
    int touched = 0;
    for (SignalMask r : rows)
      if (r & subset) ++touched;
    if (touched < k) return false;
  }
  return true;
}

VerifyReport verify_group(const CodingStructure& cs, const Network& net) {
  VerifyReport rep;
  int n = cs.num_signals();
  if (!is_decodable(intact_vector(cs), n)) {
    rep.pass = false;
    rep.failing_spans.push_back(-1);  // -1 marks the intact scenario
  }
  for (SpanId sp = 0; sp < net.span_count(); ++sp) {
    ReceivedVector rv = simulate_span_failure(cs, net, sp);
    bool dec = is_decodable(rv, n);
    ++rep.scenarios;
    if (!dec) {
      rep.pass = false;
      rep.failing_spans.push_back(sp);
    }
    if (n <= 20) {
      if (hall_check(rv, n) != dec) rep.hall_disagreements.push_back(sp);
    }
  }
  return rep;
}

std::string VerifyReport::to_string(const Network& net) const {
  std::ostringstream out;
  out << (pass ? "pass" : "FAIL") << " (" << scenarios << " span scenarios)";
  for (SpanId sp : failing_spans) {
    if (sp < 0) {
      out << "; intact structure not decodable";
      continue;
    }
    const Link& l = net.link(net.span_links(sp)[0]);
    out << "; failure of span " << net.node_name(l.tail) << "-"
        << net.node_name(l.head) << " breaks decoding";
  }
  return out.str();
}

std::pair<std::vector<int>, std::vector<int>> coherence_propagate(
    const CodingStructure& cs, int path) {
  if (path < 0 || path >= static_cast<int>(cs.paths.size()))
    throw std::out_of_range("unknown path id");
  int total = static_cast<int>(cs.paths.size());
  enum : char { Unseen, Coh, Noncoh };
  std::vector<char> mark(total, Unseen);

  auto set_noncoh = [&](int p) {
    if (p == path || mark[p] != Unseen) return false;
    mark[p] = Noncoh;
    return true;
  };
  auto set_coh = [&](int p) {
    if (p == path || mark[p] != Unseen) return false;
    mark[p] = Coh;
    return true;
  };

  int comp = cs.complement_path(path);
  if (comp >= 0) set_noncoh(comp);                   // rule 1
  if (comp >= 0)
    for (int q : cs.coded_with(comp)) set_coh(q);    // rule 2

  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < total; ++p) {
      if (mark[p] == Coh) {  // rule 3
        int c = cs.complement_path(p);
        if (c >= 0 && set_noncoh(c)) changed = true;
      }
    }
    for (int p = 0; p < total; ++p) {
      if (mark[p] == Noncoh) {  // rule 4
        for (int q : cs.coded_with(p))
          if (set_coh(q)) changed = true;
      }
    }
  }

  std::vector<int> coherent, noncoherent;
  for (int p = 0; p < total; ++p) {
    if (p == path) continue;
    if (mark[p] == Noncoh)
      noncoherent.push_back(p);
    else
      coherent.push_back(p);  // unvisited paths default to coherent
  }
  return {coherent, noncoherent};
}

void compute_coherence(CodingStructure& cs) {
  std::set<std::pair<int, int>> pairs;
  for (int p = 0; p < static_cast<int>(cs.paths.size()); ++p) {
    auto [coh, noncoh] = coherence_propagate(cs, p);
    for (int q : noncoh) pairs.insert({std::min(p, q), std::max(p, q)});
  }
  cs.noncoherent_pairs.assign(pairs.begin(), pairs.end());
}

std::vector<std::string> validate_structure(const CodingStructure& cs,
                                            const Network& net) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };

  int n = cs.num_signals();
  std::vector<int> incidences(n, 0);
  for (int s = 0; s < cs.num_subgroups(); ++s) {
    if (cs.subgroups[s].empty()) complain("empty subgroup " + std::to_string(s));
    for (int sig : cs.subgroups[s]) {
      if (sig < 0 || sig >= n) {
        complain("subgroup references unknown signal");
        continue;
      }
      ++incidences[sig];
      if (cs.path_index(sig, s) < 0)
        complain("missing path for signal " + std::to_string(sig) +
                 " in subgroup " + std::to_string(s));
    }
  }
  for (int sig = 0; sig < n; ++sig)
    if (incidences[sig] != 2)
      complain("signal " + std::to_string(sig) + " appears in " +
               std::to_string(incidences[sig]) + " subgroups (want 2)");
  if (static_cast<int>(cs.paths.size()) != 2 * n)
    complain("path count != 2 * signals");

  // Path shape: a simple source->destination walk that never leaves d.
  for (const auto& p : cs.paths) {
    if (p.signal < 0 || p.signal >= n) {
      complain("path with unknown signal");
      continue;
    }
    NodeId at = cs.signal_sources[p.signal];
    std::set<NodeId> visited{at};
    bool ok = true;
    for (LinkId e : p.links) {
      if (net.link(e).tail != at) {
        complain("disconnected path for signal " + std::to_string(p.signal));
        ok = false;
        break;
      }
      if (at == cs.destination) {
        complain("path leaves the destination");
        ok = false;
        break;
      }
      at = net.link(e).head;
      if (!visited.insert(at).second) {
        complain("path revisits a node");
        ok = false;
        break;
      }
    }
    if (ok && at != cs.destination) complain("path does not reach destination");
  }

  // The two paths of one signal must be span-disjoint.
  for (int sig = 0; sig < n; ++sig) {
    std::vector<int> ps;
    for (int p = 0; p < static_cast<int>(cs.paths.size()); ++p)
      if (cs.paths[p].signal == sig) ps.push_back(p);
    if (ps.size() != 2) continue;
    std::set<SpanId> spans;
    for (LinkId e : cs.paths[ps[0]].links) spans.insert(net.link(e).span);
    for (LinkId e : cs.paths[ps[1]].links)
      if (spans.count(net.link(e).span)) {
        complain("the two paths of signal " + std::to_string(sig) +
                 " share a span");
        break;
      }
  }

  // Paths sharing any span must be pairwise coherent.
  for (int p = 0; p < static_cast<int>(cs.paths.size()); ++p) {
    auto [coh, noncoh] = coherence_propagate(cs, p);
    for (int q : noncoh) {
      if (q < p) continue;
      for (LinkId e : cs.paths[p].links) {
        SpanId sp = net.link(e).span;
        if (cs.path_uses_span(q, net, sp)) {
          complain("noncoherent paths " + std::to_string(p) + "," +
                   std::to_string(q) + " share a span");
          break;
        }
      }
    }
  }
  return problems;
}

double structure_cost(const CodingStructure& cs, const Network& net) {
  double cost = 0;
  for (int s = 0; s < cs.num_subgroups(); ++s) {
    std::set<LinkId> used;
    for (const auto& p : cs.paths)
      if (p.subgroup == s) used.insert(p.links.begin(), p.links.end());
    for (LinkId e : used) cost += net.link(e).length;
  }
  return cost;
}

namespace {

std::string links_text(const std::vector<LinkId>& links, const Network& net) {
  std::ostringstream out;
  out.precision(15);
  for (LinkId e : links)
    out << net.node_name(net.link(e).tail) << ">" << net.node_name(net.link(e).head)
        << "@" << net.link(e).length << ",";
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string canonical_form(const CodingStructure& cs, const Network& net) {
  int n = cs.num_signals();
  // Normalized signal order: by source name, then by the sorted pair of path
  // prints. Interchangeable signals compare equal, which is fine: swapping
  // them is the same structure.
  struct SignalDesc {
    std::string key;
    int index;
  };
  std::vector<SignalDesc> sig(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> pp;
    for (const auto& p : cs.paths)
      if (p.signal == i) pp.push_back(links_text(p.links, net));
    std::sort(pp.begin(), pp.end());
    std::string key = net.node_name(cs.signal_sources[i]) + "|";
    for (const auto& t : pp) key += t + "|";
    sig[i] = {key, i};
  }
  std::sort(sig.begin(), sig.end(),
            [](const SignalDesc& a, const SignalDesc& b) { return a.key < b.key; });
  std::vector<int> relabel(n);
  for (int pos = 0; pos < n; ++pos) relabel[sig[pos].index] = pos;

  struct SubDesc {
    std::string key;
  };
  std::vector<std::string> subs;
  for (int s = 0; s < cs.num_subgroups(); ++s) {
    std::vector<std::string> members;
    for (int sigi : cs.subgroups[s]) {
      std::string t = std::to_string(relabel[sigi]) + ":";
      int p = cs.path_index(sigi, s);
      if (p >= 0) t += links_text(cs.paths[p].links, net);
      members.push_back(t);
    }
    std::sort(members.begin(), members.end());
    std::string key;
    for (const auto& m : members) key += m + ";";
    subs.push_back(key);
  }
  std::sort(subs.begin(), subs.end());

  std::ostringstream out;
  out << "d=" << net.node_name(cs.destination) << "#";
  for (const auto& s : sig) out << s.key << "#";
  for (const auto& s : subs) out << s << "#";
  return out.str();
}

std::string canonical_id(const CodingStructure& cs, const Network& net) {
  std::uint64_t h = fnv1a(canonical_form(cs, net));
  char buf[20];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CodingGroup make_group(const CodingStructure& cs, const Network& net) {
  CodingGroup g;
  g.destination = cs.destination;
  g.structure = cs;
  for (NodeId src : cs.signal_sources) g.counts[src] += 1;
  g.cost = structure_cost(cs, net);
  compute_coherence(g.structure);
  g.id = canonical_id(cs, net);
  return g;
}

CodingGroup singleton_group(const Network& net, NodeId source, NodeId destination,
                            const PathPair& pair) {
  CodingStructure cs;
  cs.destination = destination;
  cs.signal_sources = {source};
  cs.subgroups = {{0}, {0}};
  cs.paths.push_back({0, 0, pair.primary});
  cs.paths.push_back({0, 1, pair.protection});
  return make_group(cs, net);
}

}  // namespace dcp
