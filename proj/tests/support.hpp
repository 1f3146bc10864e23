#pragma once

// Shared generators and brute-force oracles for the test suites. Nothing
// here calls into the BFS/contraction/formulation code it is used to check.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "isnr/network.hpp"

namespace isnr::testing {

/// Connected random graph on buses 1..n: a random spanning tree plus extra edges.
inline PowerNetwork random_network(std::mt19937& rng, int n, int extra_edges) {
  std::vector<BusId> buses;
  for (int b = 1; b <= n; ++b) buses.push_back(BusId{b});
  std::set<BranchKey> edges;
  std::vector<Branch> branches;
  for (int b = 2; b <= n; ++b) {
    std::uniform_int_distribution<int> pick(1, b - 1);
    const Branch br{BusId{pick(rng)}, BusId{b}};
    edges.insert(br.key());
    branches.push_back(br);
  }
  std::uniform_int_distribution<int> any(1, n);
  for (int tries = 0; tries < 20 * extra_edges && extra_edges > 0; ++tries) {
    const int a = any(rng), b = any(rng);
    if (a == b) continue;
    const Branch br{BusId{a}, BusId{b}};
    if (!edges.insert(br.key()).second) continue;
    branches.push_back(br);
    if (--extra_edges == 0) break;
  }
  std::shuffle(branches.begin(), branches.end(), rng);
  return PowerNetwork::build(std::move(buses), std::move(branches));
}

/// Critical schedule sampled from a random feasible restoration: one root bus
/// at step 1, then each step closes random branches touching the live set.
/// Each energized element becomes critical with probability `p_critical`.
inline BlackStartSchedule random_schedule(std::mt19937& rng, const PowerNetwork& net, int horizon,
                                          double p_critical) {
  std::map<BusId, int> bus_at;
  std::map<BranchKey, int> branch_at;
  std::uniform_int_distribution<std::size_t> root_pick(0, net.bus_count() - 1);
  bus_at[net.buses()[root_pick(rng)]] = 1;
  std::bernoulli_distribution close(0.5);
  for (int t = 2; t <= horizon; ++t) {
    for (const Branch& br : net.branches()) {
      if (branch_at.contains(br.key())) continue;
      const bool from_live = bus_at.contains(br.from) && bus_at[br.from] <= t - 1;
      const bool to_live = bus_at.contains(br.to) && bus_at[br.to] <= t - 1;
      if (!(from_live || to_live) || !close(rng)) continue;
      branch_at[br.key()] = t;
      if (!bus_at.contains(br.from)) bus_at[br.from] = t;
      if (!bus_at.contains(br.to)) bus_at[br.to] = t;
    }
  }
  std::bernoulli_distribution keep(p_critical);
  std::map<BusId, int> crit_bus;
  std::map<BranchKey, int> crit_branch;
  for (const auto& [b, s] : bus_at)
    if (keep(rng)) crit_bus[b] = s;
  for (const auto& [k, s] : branch_at)
    if (keep(rng)) {
      crit_branch[k] = s;
      // A critical branch drags its terminals along, as a black-start path would.
      crit_bus[k.low] = bus_at[k.low];
      crit_bus[k.high] = bus_at[k.high];
    }
  return BlackStartSchedule::build(net, 5, horizon, crit_bus, crit_branch);
}

/// Hop distance by exhaustive simple-path enumeration (exponential; tiny graphs).
inline int brute_force_distance(const PowerNetwork& net, BusId from, BusId to) {
  std::map<int, std::vector<int>> adj;
  for (const Branch& br : net.branches()) {
    adj[br.from.value].push_back(br.to.value);
    adj[br.to.value].push_back(br.from.value);
  }
  int best = -1;
  std::set<int> on_path{from.value};
  auto dfs = [&](auto&& self, int u, int len) -> void {
    if (best >= 0 && len >= best) return;
    if (u == to.value) {
      best = len;
      return;
    }
    for (int v : adj[u]) {
      if (on_path.insert(v).second) {
        self(self, v, len + 1);
        on_path.erase(v);
      }
    }
  };
  dfs(dfs, from.value, 0);
  return best;
}

/// Incremental distance recursion over ordered pairs:
/// d_t = d_{t-1} + sum_{i!=j} d_ij v_i u_j,t-1 + sum_{i!=j} d_ij v_i v_j / 2.
/// `hops` is any symmetric distance table; `on[t][i]` the monotone trajectory.
template <class Hops>
std::vector<double> incremental_distance(const Hops& hops, const std::vector<std::vector<int>>& on) {
  std::vector<double> d(on.size(), 0.0);
  const std::size_t n = on.empty() ? 0 : on[0].size();
  for (std::size_t t = 1; t < on.size(); ++t) {
    double inc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int vi = on[t][i] - on[t - 1][i];
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const int vj = on[t][j] - on[t - 1][j];
        inc += hops(i, j) * vi * on[t - 1][j] + hops(i, j) * vi * vj / 2.0;
      }
    }
    d[t] = d[t - 1] + inc;
  }
  return d;
}

}  // namespace isnr::testing
