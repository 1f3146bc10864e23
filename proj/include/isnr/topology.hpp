#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isnr/network.hpp"

namespace isnr {

/// All-pairs hop counts on the full pre-blackout network, indexed by the
/// network's dense bus indices.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<int> hops) : n_(n), hops_(std::move(hops)) {}

  std::size_t size() const { return n_; }
  int operator()(std::size_t i, std::size_t j) const { return hops_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<int> hops_;
};

/// Breadth-first hop counts from every bus. Requires a connected network.
DistanceMatrix all_pairs_distance(const PowerNetwork& net);

/// Graph left after merging a bus with all of its neighbors.
struct ContractedGraph {
  /// Original dense bus indices making up each node; node 0 is the super-node.
  std::vector<std::vector<std::size_t>> members;
  /// Simple undirected adjacency between contracted nodes.
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t node_count() const { return members.size(); }
};

ContractedGraph contract_node(const PowerNetwork& net, std::size_t bus_index);

/// Node-contraction importance: raw(i) = 1 / (n_i * l_i), where n_i is the
/// node count after contracting bus i and l_i the mean hop count over all
/// unordered node pairs of the contracted graph. A contraction that leaves a
/// single node scores raw = 1. `alpha` is raw scaled so its maximum is 1.
struct ImportanceVector {
  std::vector<double> raw;
  std::vector<double> alpha;
};

ImportanceVector bus_importance(const PowerNetwork& net);

/// Sum of hop counts over unordered pairs of the given buses (dense indices).
double network_distance(const DistanceMatrix& dist, std::span<const std::size_t> energized);

/// beta * sum(alpha over energized) + gamma * network_distance(energized).
double quality_index(const DistanceMatrix& dist, std::span<const double> alpha,
                     std::span<const std::size_t> energized, double beta, double gamma);

/// Sum of alpha over the given buses.
double importance_total(std::span<const double> alpha, std::span<const std::size_t> energized);

}  // namespace isnr
