#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isnr/network.hpp"

namespace isnr {

/// Network state at the end of one step.
struct TrajectoryPoint {
  int step = 0;
  int energized_buses = 0;
  double importance = 0.0;  // sum of alpha over energized buses
  double distance = 0.0;    // pairwise hop total over energized buses
  double quality = 0.0;     // beta * importance + gamma * distance
  bool qualified = false;
  std::optional<double> solver_distance;
  std::optional<double> solver_quality;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// Start times of every energized element and the quality trajectory.
/// Elements without an entry are never energized within the horizon.
struct RestorationPlan {
  int step_minutes = 1;
  int horizon_steps = 0;
  double beta = 0.0;
  double gamma = 0.0;
  double quality_threshold = 0.0;
  std::map<BusId, int> bus_start;
  std::map<BranchKey, int> branch_start;
  /// Importance degree of each energized bus.
  std::map<BusId, double> bus_importance;
  std::optional<int> first_qualified_step;
  std::vector<TrajectoryPoint> trajectory;  // steps 1..horizon_steps

  std::vector<BusId> skeleton_buses() const;
  std::vector<BranchKey> skeleton_branches() const;
  /// Sum of importance over skeleton buses.
  double total_importance() const;
  /// Steps before qualification (horizon when never qualified).
  int unqualified_steps() const;

  friend bool operator==(const RestorationPlan&, const RestorationPlan&) = default;
};

/// Bus table (bus, start minute, importance degree) and branch table
/// (from-to, start minute), sorted by bus id and branch pair.
std::string render_tables(const RestorationPlan& plan);

/// One-line-per-fact summary used by the CLI report.
std::string render_summary(const RestorationPlan& plan);

enum class PlanFormat { Csv, Json };

/// CSV: trajectory only, header
/// `step,minute,importance_term,distance_term,quality_index,qualified`.
/// JSON: the whole plan, lossless.
std::string export_plan(const RestorationPlan& plan, PlanFormat format);

/// Reads the JSON export back. Throws InputError on malformed input.
RestorationPlan import_plan(std::string_view text);

struct PlanComparison {
  int step_minutes = 1;
  std::vector<int> steps;
  std::vector<double> importance_a, importance_b;
  std::vector<double> distance_a, distance_b;
  std::vector<double> quality_a, quality_b;
  std::optional<int> first_qualified_a, first_qualified_b;
  std::size_t skeleton_buses_a = 0, skeleton_buses_b = 0;
  std::size_t skeleton_branches_a = 0, skeleton_branches_b = 0;
  double total_importance_a = 0.0, total_importance_b = 0.0;
};

/// Aligns two plans step by step. Throws InputError when step length or
/// horizon differ.
PlanComparison compare_plans(const RestorationPlan& a, const RestorationPlan& b);

/// Plot-ready series, one row per step.
std::string comparison_csv(const PlanComparison& cmp);
std::string comparison_summary(const PlanComparison& cmp, std::string_view name_a,
                               std::string_view name_b);

}  // namespace isnr
