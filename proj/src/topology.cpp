#include "isnr/topology.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>

namespace isnr {

namespace {

constexpr int kUnreached = -1;

// Hop counts from `source` over a simple adjacency list; -1 for unreachable.
std::vector<int> bfs(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t source) {
  std::vector<int> hops(adjacency.size(), kUnreached);
  std::queue<std::size_t> frontier;
  hops[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adjacency[u]) {
      if (hops[v] == kUnreached) {
        hops[v] = hops[u] + 1;
        frontier.push(v);
      }
    }
  }
  return hops;
}

}  // namespace

DistanceMatrix all_pairs_distance(const PowerNetwork& net) {
  const std::size_t n = net.bus_count();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto nb = net.neighbors(i);
    adjacency[i].assign(nb.begin(), nb.end());
  }
  std::vector<int> hops(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::vector<int> row = bfs(adjacency, s);
    for (std::size_t t = 0; t < n; ++t) {
      assert(row[t] != kUnreached && "network must be connected");
      hops[s * n + t] = row[t];
    }
  }
  return DistanceMatrix(n, std::move(hops));
}

ContractedGraph contract_node(const PowerNetwork& net, std::size_t bus_index) {
  const std::size_t n = net.bus_count();
  // node_of[b] = contracted node holding original bus b
  std::vector<std::size_t> node_of(n, std::numeric_limits<std::size_t>::max());
  ContractedGraph g;
  g.members.push_back({bus_index});
  node_of[bus_index] = 0;
  for (std::size_t nb : net.neighbors(bus_index)) {
    g.members[0].push_back(nb);
    node_of[nb] = 0;
  }
  std::sort(g.members[0].begin(), g.members[0].end());
  for (std::size_t b = 0; b < n; ++b) {
    if (node_of[b] == std::numeric_limits<std::size_t>::max()) {
      node_of[b] = g.members.size();
      g.members.push_back({b});
    }
  }

  g.adjacency.assign(g.members.size(), {});
  for (std::size_t k = 0; k < net.branch_count(); ++k) {
    const auto [a, b] = net.endpoints(k);
    const std::size_t u = node_of[a];
    const std::size_t v = node_of[b];
    if (u == v) continue;
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& row : g.adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return g;
}

ImportanceVector bus_importance(const PowerNetwork& net) {
  const std::size_t n = net.bus_count();
  ImportanceVector out;
  out.raw.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ContractedGraph g = contract_node(net, i);
    const std::size_t nodes = g.node_count();
    if (nodes == 1) {
      out.raw[i] = 1.0;
      continue;
    }
    long long pair_hops = 0;
    for (std::size_t s = 0; s < nodes; ++s) {
      const std::vector<int> row = bfs(g.adjacency, s);
      for (std::size_t t = s + 1; t < nodes; ++t) pair_hops += row[t];
    }
    const double pairs = static_cast<double>(nodes) * static_cast<double>(nodes - 1) / 2.0;
    const double mean_distance = static_cast<double>(pair_hops) / pairs;
    out.raw[i] = 1.0 / (static_cast<double>(nodes) * mean_distance);
  }
  const double top = *std::max_element(out.raw.begin(), out.raw.end());
  out.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.alpha[i] = out.raw[i] / top;
  return out;
}

double network_distance(const DistanceMatrix& dist, std::span<const std::size_t> energized) {
  double total = 0.0;
  for (std::size_t a = 0; a < energized.size(); ++a)
    for (std::size_t b = a + 1; b < energized.size(); ++b)
      total += dist(energized[a], energized[b]);
  return total;
}

double importance_total(std::span<const double> alpha, std::span<const std::size_t> energized) {
  double total = 0.0;
  for (std::size_t i : energized) total += alpha[i];
  return total;
}

double quality_index(const DistanceMatrix& dist, std::span<const double> alpha,
                     std::span<const std::size_t> energized, double beta, double gamma) {
  return beta * importance_total(alpha, energized) + gamma * network_distance(dist, energized);
}

}  // namespace isnr
