#include "dcp/traffic.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcp {

long long TrafficMatrix::total() const {
  long long s = 0;
  for (const auto& [k, v] : entries) s += v;
  return s;
}

void TrafficMatrix::add(NodeId src, NodeId dst, long long units) {
  if (src == dst) throw std::invalid_argument("self-demand not allowed");
  if (units < 0) throw std::invalid_argument("negative demand");
  if (units == 0) return;
  entries[{src, dst}] += units;
}

long long DemandVector::total() const {
  long long s = 0;
  for (long long v : t) s += v;
  return s;
}

std::vector<NodeId> DemandVector::positive_sources() const {
  std::vector<NodeId> out;
  for (NodeId f = 0; f < static_cast<NodeId>(t.size()); ++f)
    if (t[f] > 0) out.push_back(f);
  return out;
}

TrafficMatrix generate_gravity(const Network& net, const NodeWeights& weights,
                               long long total_demands, std::uint64_t seed) {
  const int n = net.node_count();
  if (static_cast<int>(weights.weight.size()) != n)
    throw std::invalid_argument("weights size does not match node count");
  int positive = 0;
  for (double w : weights.weight) {
    if (w < 0) throw std::invalid_argument("negative node weight");
    if (w > 0) ++positive;
  }
  if (positive < 2)
    throw std::invalid_argument("need at least 2 nodes with positive weight");
  if (total_demands < 1) throw std::invalid_argument("total_demands must be >= 1");

  // Cumulative distribution over ordered pairs (s,d), s != d.
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> cum;
  double acc = 0;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = 0; d < n; ++d) {
      if (s == d) continue;
      double p = weights.weight[s] * weights.weight[d];
      if (p <= 0) continue;
      acc += p;
      pairs.emplace_back(s, d);
      cum.push_back(acc);
    }
  }

  std::mt19937_64 rng(seed);
  TrafficMatrix tm;
  for (long long k = 0; k < total_demands; ++k) {
    // Top 53 bits give a uniform double in [0,1); avoids the
    // implementation-defined std::uniform_real_distribution.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    size_t idx = std::min<size_t>(it - cum.begin(), pairs.size() - 1);
    tm.add(pairs[idx].first, pairs[idx].second, 1);
  }
  return tm;
}

DemandVector aggregate_to_destination(const TrafficMatrix& tm, const Network& net,
                                      NodeId d) {
  if (d < 0 || d >= net.node_count()) throw std::out_of_range("unknown node id");
  DemandVector dv;
  dv.destination = d;
  dv.t.assign(net.node_count(), 0);
  for (const auto& [key, units] : tm.entries)
    if (key.second == d) dv.t[key.first] += units;
  return dv;
}

TrafficMatrix split_granularity(const TrafficMatrix& tm, int factor) {
  if (factor < 1) throw std::invalid_argument("granularity factor must be >= 1");
  TrafficMatrix out;
  for (const auto& [key, units] : tm.entries)
    out.entries[key] = units * factor;
  return out;
}

std::string traffic_to_csv(const TrafficMatrix& tm, const Network& net) {
  std::ostringstream out;
  out << "source,destination,units\n";
  for (const auto& [key, units] : tm.entries)
    out << net.node_name(key.first) << "," << net.node_name(key.second) << ","
        << units << "\n";
  return out.str();
}

TrafficMatrix traffic_from_csv(const std::string& text, const Network& net) {
  std::istringstream is(text);
  std::string line;
  TrafficMatrix tm;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("source,", 0) == 0) continue;
    std::istringstream ls(line);
    std::string src, dst, units;
    if (!std::getline(ls, src, ',') || !std::getline(ls, dst, ',') ||
        !std::getline(ls, units, ','))
      throw ParseError(lineno, "expected 'source,destination,units'");
    long long u;
    try {
      u = std::stoll(units);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad unit count '" + units + "'");
    }
    if (u < 0) throw ParseError(lineno, "negative unit count");
    tm.add(net.node(src), net.node(dst), u);
  }
  return tm;
}

TrafficMatrix traffic_from_csv_file(const std::string& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open traffic file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return traffic_from_csv(ss.str(), net);
}

NodeWeights weights_from_csv_file(const std::string& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  NodeWeights w;
  w.weight.assign(net.node_count(), 1.0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("node,", 0) == 0) continue;
    std::istringstream ls(line);
    std::string node, weight;
    if (!std::getline(ls, node, ',') || !std::getline(ls, weight, ','))
      throw ParseError(lineno, "expected 'node,weight'");
    double v;
    try {
      v = std::stod(weight);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad weight '" + weight + "'");
    }
    if (!(v > 0)) throw ParseError(lineno, "weight must be positive");
    w.weight[net.node(node)] = v;
  }
  return w;
}

}  // namespace dcp
