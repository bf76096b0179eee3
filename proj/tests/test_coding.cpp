#include <doctest.h>

#include <algorithm>
#include <set>

#include "dcp/coding.hpp"

using namespace dcp;

namespace {

// Network with one dedicated span per simple route plus a shared middle span
// M-D used by the paths of signals a and b, mirroring the five-demand
// received-vector walkthrough: [a+c, b, a+e, c, b+d+e, d].
struct FiveDemandFixture {
  Network net;
  CodingStructure cs;
  SpanId shared_span;

  FiveDemandFixture() {
    Network::Builder b;
    SpanId sam = b.add_edge("Sa", "M", 1);
    SpanId sbm = b.add_edge("Sb", "M", 1);
    SpanId md = b.add_edge("M", "D", 1);
    // Parallel spans give every other path a private route.
    SpanId sc1 = b.add_edge("Sc", "D", 1);
    SpanId sc2 = b.add_edge("Sc", "D", 1);
    SpanId sa2 = b.add_edge("Sa", "D", 1);
    SpanId se1 = b.add_edge("Se", "D", 1);
    SpanId se2 = b.add_edge("Se", "D", 1);
    SpanId sb2 = b.add_edge("Sb", "D", 1);
    SpanId sd1 = b.add_edge("Sd", "D", 1);
    SpanId sd2 = b.add_edge("Sd", "D", 1);
    net = b.build();
    shared_span = md;

    auto fwd = [&](SpanId sp) { return net.span_links(sp)[0]; };

    cs.destination = net.node("D");
    // signals: 0=a 1=b 2=c 3=d 4=e
    cs.signal_sources = {net.node("Sa"), net.node("Sb"), net.node("Sc"),
                         net.node("Sd"), net.node("Se")};
    cs.subgroups = {{0, 2}, {1}, {0, 4}, {2}, {1, 3, 4}, {3}};
    cs.paths = {
        {0, 0, {fwd(sam), fwd(md)}},  // a in subgroup 0 (via M)
        {2, 0, {fwd(sc1)}},           // c in subgroup 0
        {1, 1, {fwd(sbm), fwd(md)}},  // b in subgroup 1 (via M)
        {0, 2, {fwd(sa2)}},           // a in subgroup 2
        {4, 2, {fwd(se1)}},           // e in subgroup 2
        {2, 3, {fwd(sc2)}},           // c in subgroup 3
        {1, 4, {fwd(sb2)}},           // b in subgroup 4
        {3, 4, {fwd(sd1)}},           // d in subgroup 4
        {4, 4, {fwd(se2)}},           // e in subgroup 4
        {3, 5, {fwd(sd2)}},           // d in subgroup 5
    };
  }
};

CodingStructure systematic_two(const Network& net, SpanId p1a, SpanId p1b,
                               SpanId p2a, SpanId p2b, NodeId s1, NodeId s2,
                               NodeId d) {
  CodingStructure cs;
  cs.destination = d;
  cs.signal_sources = {s1, s2};
  cs.subgroups = {{0}, {1}, {0, 1}};
  auto fwd = [&](SpanId sp) { return net.span_links(sp)[0]; };
  cs.paths = {{0, 0, {fwd(p1a)}},
              {1, 1, {fwd(p2a)}},
              {0, 2, {fwd(p1b)}},
              {1, 2, {fwd(p2b)}}};
  return cs;
}

}  // namespace

TEST_CASE("simulate and rank oracle on the five demand code") {
  FiveDemandFixture fx;
  const int n = 5;

  // No path uses an untouched span: vector equals the intact code.
  ReceivedVector intact = intact_vector(fx.cs);
  CHECK(is_decodable(intact, n));
  CHECK(hall_check(intact, n));

  // Failing M-D removes a@subgroup0 and b@subgroup1 together.
  ReceivedVector rv = simulate_span_failure(fx.cs, fx.net, fx.shared_span);
  CHECK(rv.rows[0] == (SignalMask{1} << 2));  // only c remains
  CHECK(rv.rows[1] == 0);                     // b's subgroup went dark
  CHECK(rv.rows[2] == ((SignalMask{1} << 0) | (SignalMask{1} << 4)));
  CHECK(!is_decodable(rv, n));
  CHECK(!hall_check(rv, n));  // {a,e,b,d} fit in three subgroups

  CHECK_THROWS(simulate_span_failure(fx.cs, fx.net, 999));
}

TEST_CASE("single signal code tolerates losing one copy") {
  Network::Builder b;
  SpanId s1 = b.add_edge("S", "D", 1);
  SpanId s2 = b.add_edge("S", "D", 1);
  Network net = b.build();
  CodingStructure cs;
  cs.destination = net.node("D");
  cs.signal_sources = {net.node("S")};
  cs.subgroups = {{0}, {0}};
  cs.paths = {{0, 0, {net.span_links(s1)[0]}}, {0, 1, {net.span_links(s2)[0]}}};

  ReceivedVector rv = simulate_span_failure(cs, net, s1);
  CHECK(rv.rows[0] == 0);
  CHECK(rv.rows[1] == 1);
  CHECK(is_decodable(rv, 1));

  auto [coh, noncoh] = coherence_propagate(cs, 0);
  CHECK(coh.empty());
  CHECK(noncoh == std::vector<int>{1});  // rule 1 only

  VerifyReport rep = verify_group(cs, net);
  CHECK(rep.pass);
  CHECK(rep.hall_disagreements.empty());
}

TEST_CASE("rank decides decodability") {
  // [p1+p2, p1+p2] has rank 1.
  ReceivedVector rv;
  rv.rows = {0b11, 0b11};
  CHECK(!is_decodable(rv, 2));
  // intact systematic code
  rv.rows = {0b01, 0b10, 0b11};
  CHECK(is_decodable(rv, 2));
  CHECK(hall_check(rv, 2));
  // diagonal
  rv.rows = {0b01, 0b10};
  CHECK(hall_check(rv, 2));
  CHECK(is_decodable(rv, 2));
  // empty structure is vacuously fine
  ReceivedVector empty;
  CHECK(is_decodable(empty, 0));
  CHECK(hall_check(empty, 0));
  CHECK_THROWS(hall_check(rv, 21));
}

TEST_CASE("coherence propagation on the five demand code") {
  FiveDemandFixture fx;
  // Path of interest: b in the second subgroup (index 2 in the path list).
  auto [coh, noncoh] = coherence_propagate(fx.cs, 2);
  // expected: coherent {d@4, e@4, a@2, c@0}; noncoherent {b@4, e@2, d@5, a@0, c@3}
  std::vector<int> expect_coh = {1, 3, 7, 8};   // c@0grp, a@2grp, d@4grp, e@4grp
  std::vector<int> expect_non = {0, 4, 5, 6, 9};
  CHECK(coh == expect_coh);
  CHECK(noncoh == expect_non);
  CHECK_THROWS(coherence_propagate(fx.cs, 99));
}

TEST_CASE("coherence propagation on the systematic two demand code") {
  Network::Builder b;
  SpanId e1 = b.add_edge("S1", "D", 1);
  SpanId e2 = b.add_edge("S2", "D", 1);
  SpanId e3 = b.add_edge("S1", "D", 1);
  SpanId e4 = b.add_edge("S2", "D", 1);
  Network net = b.build();
  CodingStructure cs = systematic_two(net, e1, e3, e2, e4, net.node("S1"),
                                      net.node("S2"), net.node("D"));
  // paths: 0 = p1@1, 1 = p2@2, 2 = p1@3, 3 = p2@3
  auto [coh, noncoh] = coherence_propagate(cs, 0);
  CHECK(coh == std::vector<int>{3});     // p2@3
  CHECK(noncoh == std::vector<int>{1, 2});

  // Symmetry of the relation over all pairs.
  int total = static_cast<int>(cs.paths.size());
  for (int p = 0; p < total; ++p) {
    auto [cp, np] = coherence_propagate(cs, p);
    for (int q : np) {
      auto [cq, nq] = coherence_propagate(cs, q);
      CHECK(std::count(nq.begin(), nq.end(), p) == 1);
    }
  }

  compute_coherence(cs);
  std::set<std::pair<int, int>> pairs(cs.noncoherent_pairs.begin(),
                                      cs.noncoherent_pairs.end());
  // Subgroup mates (2,3) merge anyway and stay coherent.
  CHECK(pairs == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}});
}

TEST_CASE("noncoherent pairs break decoding when they fail together") {
  Network::Builder b;
  SpanId e1 = b.add_edge("S1", "D", 1);
  SpanId e2 = b.add_edge("S2", "D", 1);
  SpanId e3 = b.add_edge("S1", "D", 1);
  SpanId e4 = b.add_edge("S2", "D", 1);
  Network net = b.build();
  CodingStructure cs = systematic_two(net, e1, e3, e2, e4, net.node("S1"),
                                      net.node("S2"), net.node("D"));
  compute_coherence(cs);
  for (auto [p, q] : cs.noncoherent_pairs) {
    // Remove every link of both paths, then check what survives.
    std::set<SpanId> dead;
    for (LinkId e : cs.paths[p].links) dead.insert(net.link(e).span);
    for (LinkId e : cs.paths[q].links) dead.insert(net.link(e).span);
    ReceivedVector rv;
    rv.rows.assign(cs.num_subgroups(), 0);
    for (int r = 0; r < static_cast<int>(cs.paths.size()); ++r) {
      bool alive = true;
      for (LinkId e : cs.paths[r].links)
        if (dead.count(net.link(e).span)) alive = false;
      if (alive)
        rv.rows[cs.paths[r].subgroup] |= SignalMask{1} << cs.paths[r].signal;
    }
    CHECK(!is_decodable(rv, cs.num_signals()));
  }
}

TEST_CASE("verify_group accepts a diversity tree and flags bad sharing") {
  // Three sources, direct primaries, protection tree merging at P.
  Network::Builder b;
  SpanId p1 = b.add_edge("S1", "D", 2);
  SpanId p2 = b.add_edge("S2", "D", 2);
  SpanId p3 = b.add_edge("S3", "D", 2);
  SpanId t1 = b.add_edge("S1", "P", 1);
  SpanId t2 = b.add_edge("S2", "P", 1);
  SpanId t3 = b.add_edge("S3", "P", 1);
  SpanId td = b.add_edge("P", "D", 1);
  Network net = b.build();
  auto fwd = [&](SpanId sp) { return net.span_links(sp)[0]; };

  CodingStructure cs;
  cs.destination = net.node("D");
  cs.signal_sources = {net.node("S1"), net.node("S2"), net.node("S3")};
  cs.subgroups = {{0}, {1}, {2}, {0, 1, 2}};
  cs.paths = {{0, 0, {fwd(p1)}},
              {1, 1, {fwd(p2)}},
              {2, 2, {fwd(p3)}},
              {0, 3, {fwd(t1), fwd(td)}},
              {1, 3, {fwd(t2), fwd(td)}},
              {2, 3, {fwd(t3), fwd(td)}}};
  CHECK(validate_structure(cs, net).empty());
  VerifyReport rep = verify_group(cs, net);
  CHECK(rep.pass);
  CHECK(rep.failing_spans.empty());
  CHECK(rep.hall_disagreements.empty());
  CHECK(structure_cost(cs, net) == doctest::Approx(10.0));

  // Mutate: route the primary of signal 1 over signal 0's primary span.
  CodingStructure bad = cs;
  bad.paths[1].links = {fwd(p1)};
  // (structure now has two noncoherent paths sharing span p1)
  CHECK(!validate_structure(bad, net).empty());
  VerifyReport repbad = verify_group(bad, net);
  CHECK(!repbad.pass);
  CHECK(!repbad.failing_spans.empty());
}

TEST_CASE("verify_group on an empty structure passes vacuously") {
  Network::Builder b;
  b.add_edge("a", "b", 1);
  Network net = b.build();
  CodingStructure cs;
  cs.destination = net.node("b");
  VerifyReport rep = verify_group(cs, net);
  CHECK(rep.pass);
}

TEST_CASE("canonical ids are stable under relabeling") {
  Network::Builder b;
  SpanId e1 = b.add_edge("S1", "D", 1);
  SpanId e2 = b.add_edge("S2", "D", 1);
  SpanId e3 = b.add_edge("S1", "D", 1);
  SpanId e4 = b.add_edge("S2", "D", 2);
  Network net = b.build();
  CodingStructure cs = systematic_two(net, e1, e3, e2, e4, net.node("S1"),
                                      net.node("S2"), net.node("D"));

  // Same structure with signals renumbered and subgroups shuffled:
  // subgroup 0 holds the coded pair, signal 0 is now the S2 demand.
  CodingStructure cs2;
  cs2.destination = cs.destination;
  cs2.signal_sources = {net.node("S2"), net.node("S1")};
  cs2.subgroups = {{0, 1}, {0}, {1}};
  auto fwd = [&](SpanId sp) { return net.span_links(sp)[0]; };
  cs2.paths = {{1, 2, {fwd(e1)}},
               {0, 1, {fwd(e2)}},
               {1, 0, {fwd(e3)}},
               {0, 0, {fwd(e4)}}};
  CHECK(canonical_id(cs, net) == canonical_id(cs2, net));

  // Swapping the two equal-length parallel spans of S1 is an isomorphic
  // structure and hashes identically.
  CodingStructure other = systematic_two(net, e3, e1, e2, e4, net.node("S1"),
                                         net.node("S2"), net.node("D"));
  CHECK(canonical_id(cs, net) == canonical_id(other, net));

  // Moving the raw S2 signal onto the length-2 span is a different column.
  CodingStructure diff = systematic_two(net, e1, e3, e4, e2, net.node("S1"),
                                        net.node("S2"), net.node("D"));
  CHECK(canonical_id(cs, net) != canonical_id(diff, net));
}

TEST_CASE("make_group recomputes cost and counts") {
  Network::Builder b;
  SpanId e1 = b.add_edge("S1", "D", 3);
  SpanId e2 = b.add_edge("S1", "D", 4);
  Network net = b.build();
  PathPair pair;
  pair.primary = {net.span_links(e1)[0]};
  pair.protection = {net.span_links(e2)[0]};
  pair.cost = 7;
  CodingGroup g = singleton_group(net, net.node("S1"), net.node("D"), pair);
  CHECK(g.cost == doctest::Approx(7.0));
  CHECK(g.counts.at(net.node("S1")) == 1);
  CHECK(g.size() == 1);
  CHECK(!g.id.empty());
  CHECK(verify_group(g.structure, net).pass);
}
