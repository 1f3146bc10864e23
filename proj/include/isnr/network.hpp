#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace isnr {

/// External bus number as it appears in case files.
struct BusId {
  int value = 0;

  friend auto operator<=>(const BusId&, const BusId&) = default;
};

/// Orientation-free branch identity, `low < high`.
struct BranchKey {
  BusId low;
  BusId high;

  static BranchKey of(BusId a, BusId b) { return a < b ? BranchKey{a, b} : BranchKey{b, a}; }

  friend auto operator<=>(const BranchKey&, const BranchKey&) = default;
};

struct Branch {
  BusId from;
  BusId to;

  BranchKey key() const { return BranchKey::of(from, to); }

  friend bool operator==(const Branch&, const Branch&) = default;
};

std::string to_string(BusId bus);
/// "i-j" with i < j.
std::string to_string(BranchKey branch);

/// Pre-blackout grid topology. Buses and branches keep their input order;
/// every bus also has a dense index in [0, bus_count()).
class PowerNetwork {
 public:
  /// Validates and builds a network. Throws InputError on duplicate buses,
  /// dangling endpoints, self-loops, parallel branches, or a disconnected graph.
  static PowerNetwork build(std::vector<BusId> buses, std::vector<Branch> branches);

  std::span<const BusId> buses() const { return buses_; }
  std::span<const Branch> branches() const { return branches_; }
  std::size_t bus_count() const { return buses_.size(); }
  std::size_t branch_count() const { return branches_.size(); }

  bool contains(BusId bus) const { return bus_index_.contains(bus.value); }
  bool contains(BranchKey branch) const { return branch_index_.contains(branch); }

  /// Dense index of a bus; throws InputError for unknown ids.
  std::size_t index_of(BusId bus) const;
  std::size_t index_of(BranchKey branch) const;

  /// Branch indices incident to the bus with dense index `bus_index`.
  std::span<const std::size_t> incident_branches(std::size_t bus_index) const {
    return incidence_[bus_index];
  }
  /// Neighbor bus indices of the bus with dense index `bus_index`.
  std::span<const std::size_t> neighbors(std::size_t bus_index) const {
    return adjacency_[bus_index];
  }
  std::pair<std::size_t, std::size_t> endpoints(std::size_t branch_index) const {
    return branch_endpoints_[branch_index];
  }

  friend bool operator==(const PowerNetwork& a, const PowerNetwork& b) {
    return a.buses_ == b.buses_ && a.branches_ == b.branches_;
  }

 private:
  PowerNetwork() = default;

  std::vector<BusId> buses_;
  std::vector<Branch> branches_;
  std::unordered_map<int, std::size_t> bus_index_;
  std::map<BranchKey, std::size_t> branch_index_;
  std::vector<std::vector<std::size_t>> incidence_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> branch_endpoints_;
};

/// Critical-element energization steps from the black-start stage.
///
/// Step 0 is the total blackout; scheduled steps are in [1, horizon_steps].
/// The trajectory of a critical element is 0 before its step and 1 from it on.
class BlackStartSchedule {
 public:
  /// Throws InputError for unknown elements, non-positive steps, steps past
  /// the horizon, or a non-positive step length/horizon.
  static BlackStartSchedule build(const PowerNetwork& net, int step_minutes, int horizon_steps,
                                  std::map<BusId, int> bus_steps,
                                  std::map<BranchKey, int> branch_steps);

  int step_minutes() const { return step_minutes_; }
  int horizon_steps() const { return horizon_steps_; }
  const std::map<BusId, int>& critical_buses() const { return bus_steps_; }
  const std::map<BranchKey, int>& critical_branches() const { return branch_steps_; }

  bool is_critical(BusId bus) const { return bus_steps_.contains(bus); }
  bool is_critical(BranchKey branch) const { return branch_steps_.contains(branch); }
  std::optional<int> step_of(BusId bus) const;
  std::optional<int> step_of(BranchKey branch) const;

  /// u^C at step t. Only meaningful for critical elements.
  bool energized(BusId bus, int t) const;
  bool energized(BranchKey branch, int t) const;

  /// Latest scheduled step (0 when nothing is scheduled).
  int latest_step() const;

  /// Copy with a different horizon; throws InputError if a step would fall outside.
  BlackStartSchedule with_horizon(const PowerNetwork& net, int horizon_steps) const;

  friend bool operator==(const BlackStartSchedule&, const BlackStartSchedule&) = default;

 private:
  BlackStartSchedule() = default;

  int step_minutes_ = 1;
  int horizon_steps_ = 1;
  std::map<BusId, int> bus_steps_;
  std::map<BranchKey, int> branch_steps_;
};

/// A critical trajectory that breaks one of the energization rules.
struct ScheduleViolation {
  std::string element;   // "bus 4" or "branch 1-2"
  std::string equation;  // rule id matching the row family: "(9)", "(10)" or "(11)"
  std::string message;
};

/// Checks the critical trajectories against the branch/terminal rules:
/// a branch is energized no earlier than its terminal buses, and no earlier
/// than one step after its first energized terminal. A rule is only checked
/// when every bus it mentions is critical; free buses are for the optimizer.
std::vector<ScheduleViolation> validate_schedule(const BlackStartSchedule& sched,
                                                 const PowerNetwork& net);

// Case and schedule files are JSON documents. Parse errors carry line/column.
PowerNetwork parse_network(std::string_view text);
BlackStartSchedule parse_schedule(std::string_view text, const PowerNetwork& net);
std::string serialize_network(const PowerNetwork& net);
std::string serialize_schedule(const BlackStartSchedule& sched);

/// Branch list files: `{"branches": [[from, to], ...]}`.
std::vector<BranchKey> parse_branch_list(std::string_view text, const PowerNetwork& net);
std::string serialize_branch_list(std::span<const BranchKey> branches);

/// The New England 39-bus system and its black-start critical schedule.
struct TestCase {
  PowerNetwork network;
  BlackStartSchedule schedule;
};
TestCase new_england_39();

/// Skeleton branch set of the published 39-bus restoration (critical
/// branches plus 9-39), used as the fixed target of the sequencing baseline.
std::vector<BranchKey> new_england_39_skeleton_branches();

}  // namespace isnr

template <>
struct std::hash<isnr::BusId> {
  std::size_t operator()(isnr::BusId bus) const noexcept { return std::hash<int>{}(bus.value); }
};
