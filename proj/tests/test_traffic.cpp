#include <doctest.h>

#include <cmath>

#include "dcp/traffic.hpp"

using namespace dcp;

namespace {

Network two_nodes() {
  Network::Builder b;
  b.add_edge("a", "b", 1);
  return b.build();
}

Network path3() {
  Network::Builder b;
  b.add_edge("a", "b", 1);
  b.add_edge("b", "d", 1);
  return b.build();
}

}  // namespace

TEST_CASE("gravity sampling is symmetric for equal weights") {
  Network net = two_nodes();
  NodeWeights w{{1.0, 1.0}};
  auto tm = generate_gravity(net, w, 1000, 7);
  long long ab = tm.entries.count({0, 1}) ? tm.entries.at({0, 1}) : 0;
  long long ba = tm.entries.count({1, 0}) ? tm.entries.at({1, 0}) : 0;
  CHECK(ab + ba == 1000);
  // 3 sigma of Binomial(1000, 0.5)
  CHECK(std::abs(ab - 500.0) < 3 * std::sqrt(1000 * 0.25) + 1);
}

TEST_CASE("gravity frequencies are uniform for equal weights") {
  Network::Builder b;
  b.add_edge("a", "b", 1);
  b.add_edge("b", "c", 1);
  b.add_edge("c", "d", 1);
  Network net = b.build();
  NodeWeights w{{1, 1, 1, 1}};
  const long long total = 12000;
  auto tm = generate_gravity(net, w, total, 99);
  double expect = total / 12.0;  // 12 ordered pairs
  double sigma = std::sqrt(total * (1.0 / 12) * (11.0 / 12));
  for (const auto& [key, units] : tm.entries)
    CHECK(std::abs(units - expect) < 4 * sigma + 1);
  CHECK(tm.total() == total);
}

TEST_CASE("gravity is deterministic per seed") {
  Network net = two_nodes();
  NodeWeights w{{2.0, 3.0}};
  auto a = generate_gravity(net, w, 500, 42);
  auto b = generate_gravity(net, w, 500, 42);
  CHECK(a.entries == b.entries);
  auto c = generate_gravity(net, w, 500, 43);
  CHECK(a.entries != c.entries);
}

TEST_CASE("gravity rejects degenerate inputs") {
  Network net = two_nodes();
  CHECK_THROWS(generate_gravity(net, NodeWeights{{1.0, 0.0}}, 10, 1));
  CHECK_THROWS(generate_gravity(net, NodeWeights{{1.0, 1.0}}, 0, 1));
}

TEST_CASE("aggregation filters by destination") {
  Network net = path3();
  NodeId a = net.node("a"), b = net.node("b"), d = net.node("d");
  TrafficMatrix tm;
  tm.add(a, d, 3);
  tm.add(b, d, 2);
  tm.add(a, b, 9);
  auto dv = aggregate_to_destination(tm, net, d);
  CHECK(dv.t[a] == 3);
  CHECK(dv.t[b] == 2);
  CHECK(dv.total() == 5);

  auto none = aggregate_to_destination(tm, net, a);
  CHECK(none.total() == 0);
}

TEST_CASE("aggregation over all destinations partitions the matrix") {
  Network net = path3();
  NodeWeights w{{1, 2, 3}};
  auto tm = generate_gravity(net, w, 333, 5);
  long long sum = 0;
  for (NodeId d = 0; d < net.node_count(); ++d)
    sum += aggregate_to_destination(tm, net, d).total();
  CHECK(sum == tm.total());
}

TEST_CASE("granularity splitting multiplies entries") {
  Network net = path3();
  TrafficMatrix tm;
  tm.add(net.node("a"), net.node("d"), 3);
  auto out = split_granularity(tm, 10);
  CHECK(out.entries.at({net.node("a"), net.node("d")}) == 30);
  auto same = split_granularity(tm, 1);
  CHECK(same.entries == tm.entries);
  CHECK_THROWS(split_granularity(tm, 0));
  // 300 -> 3000 -> 30000
  TrafficMatrix big;
  big.add(net.node("a"), net.node("d"), 300);
  CHECK(split_granularity(split_granularity(big, 10), 10).total() == 30000);
}

TEST_CASE("traffic csv round-trip") {
  Network net = path3();
  TrafficMatrix tm;
  tm.add(net.node("a"), net.node("d"), 3);
  tm.add(net.node("b"), net.node("d"), 1);
  auto text = traffic_to_csv(tm, net);
  auto back = traffic_from_csv(text, net);
  CHECK(back.entries == tm.entries);
}
