#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "isnr/milp.hpp"
#include "isnr/network.hpp"
#include "isnr/plan.hpp"
#include "isnr/solvers.hpp"
#include "isnr/topology.hpp"

namespace isnr {

using milp::VarRef;

/// Weights and threshold of the skeleton quality index
/// eta = beta * sum(alpha) + gamma * distance, qualified when eta >= threshold.
struct IsnrConfig {
  double beta = 150.0;
  double gamma = 0.7;
  double quality_threshold = 1500.0;
  int horizon_steps = 14;
  int step_minutes = 5;
};

/// Pairs the derived topology data every builder needs.
struct TopologyData {
  DistanceMatrix distance;
  ImportanceVector importance;

  static TopologyData of(const PowerNetwork& net) {
    return {all_pairs_distance(net), bus_importance(net)};
  }
};

/// Where each decision symbol lives in the model. Step t runs 1..horizon;
/// slot 0 of every per-step table is unused (step 0 is the blackout, all zero).
class VariableIndex {
 public:
  VariableIndex() = default;
  VariableIndex(int horizon, std::size_t buses, std::size_t branches, bool with_quality);

  int horizon() const { return horizon_; }
  std::size_t bus_count() const { return buses_; }
  std::size_t branch_count() const { return branches_; }
  bool has_quality() const { return with_quality_; }

  VarRef bus_on(std::size_t bus, int t) const { return bus_on_[t][bus]; }
  VarRef bus_change(std::size_t bus, int t) const { return bus_change_[t][bus]; }
  VarRef branch_on(std::size_t branch, int t) const { return branch_on_[t][branch]; }
  VarRef qualified(int t) const { return qualified_[t]; }
  VarRef qualified_change(int t) const { return qualified_change_[t]; }
  VarRef distance(int t) const { return distance_[t]; }
  VarRef quality(int t) const { return quality_[t]; }
  /// u_i,t * u_j,t; symmetric, so any order of (i, j) works.
  VarRef both_on(std::size_t i, std::size_t j, int t) const;
  /// u_i,t-1 * u_j,t; ordered.
  VarRef carried_on(std::size_t i, std::size_t j, int t) const { return carried_on_[t][i * buses_ + j]; }

 private:
  friend class IsnrBuilder;

  int horizon_ = 0;
  std::size_t buses_ = 0;
  std::size_t branches_ = 0;
  bool with_quality_ = false;
  std::vector<std::vector<VarRef>> bus_on_, bus_change_, branch_on_;
  std::vector<VarRef> qualified_, qualified_change_, distance_, quality_;
  std::vector<std::vector<VarRef>> both_on_;     // [t][pair index, i < j]
  std::vector<std::vector<VarRef>> carried_on_;  // [t][i * n + j]

 public:
  static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);
};

struct BuiltModel {
  milp::MilpModel model;
  VariableIndex index;
};

/// The integrated skeleton-network reconfiguration MILP. Throws InputError for
/// an empty network, a horizon shorter than the schedule, or a schedule that
/// breaks the energization rules.
BuiltModel build_isnr_model(const PowerNetwork& net, const TopologyData& topo,
                            const BlackStartSchedule& sched, const IsnrConfig& cfg);

/// Fixed-target baseline: energize every target branch as early as possible
/// under the same energization rules; other branches stay open.
BuiltModel build_sequencing_model(const PowerNetwork& net, std::span<const BranchKey> target,
                                  const BlackStartSchedule& sched, const IsnrConfig& cfg);

/// Rounds the solver's binaries, derives start steps and recomputes the
/// trajectory with the topology oracles. For the ISNR model the solver's d_t
/// and eta_t are attached and must agree with the recomputation to 1e-4.
/// Throws SolverError when the solution is not optimal, a binary is off by
/// more than 1e-6, or the recomputation disagrees.
RestorationPlan extract_plan(const milp::Solution& solution, const VariableIndex& index,
                             const PowerNetwork& net, const TopologyData& topo,
                             const IsnrConfig& cfg);

/// How to pick among alternate optima of the ISNR model.
enum class TieBreak {
  None,
  /// Re-solve with the qualification objective capped at its optimum and
  /// energize as many elements as early as possible.
  MaxEnergization,
};

struct IsnrResult {
  RestorationPlan plan;
  /// Optimal value of the qualification objective (unqualified steps).
  double objective = 0.0;
};

/// Builds, solves and extracts the ISNR plan. Throws SolverError when the
/// backend does not report an optimal solution.
IsnrResult solve_isnr(const PowerNetwork& net, const TopologyData& topo,
                      const BlackStartSchedule& sched, const IsnrConfig& cfg,
                      const milp::SolverBackend& backend, TieBreak tie_break = TieBreak::None);

RestorationPlan solve_sequencing(const PowerNetwork& net, const TopologyData& topo,
                                 std::span<const BranchKey> target,
                                 const BlackStartSchedule& sched, const IsnrConfig& cfg,
                                 const milp::SolverBackend& backend);

/// Plan whose trajectory is recomputed from the given start steps.
RestorationPlan plan_from_starts(const PowerNetwork& net, const TopologyData& topo,
                                 const IsnrConfig& cfg, std::map<BusId, int> bus_start,
                                 std::map<BranchKey, int> branch_start,
                                 std::optional<int> first_qualified);

}  // namespace isnr
