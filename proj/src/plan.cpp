#include "isnr/plan.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "isnr/error.hpp"

namespace isnr {

using nlohmann::json;

std::vector<BusId> RestorationPlan::skeleton_buses() const {
  std::vector<BusId> out;
  for (const auto& [bus, _] : bus_start) out.push_back(bus);
  return out;
}

std::vector<BranchKey> RestorationPlan::skeleton_branches() const {
  std::vector<BranchKey> out;
  for (const auto& [branch, _] : branch_start) out.push_back(branch);
  return out;
}

double RestorationPlan::total_importance() const {
  double total = 0.0;
  for (const auto& [_, alpha] : bus_importance) total += alpha;
  return total;
}

int RestorationPlan::unqualified_steps() const {
  return first_qualified_step ? *first_qualified_step - 1 : horizon_steps;
}

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

// Shortest round-trip representation.
std::string exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

std::string render_tables(const RestorationPlan& plan) {
  std::ostringstream out;
  out << "bus,start_minute,importance_degree\n";
  for (const auto& [bus, step] : plan.bus_start) {
    auto it = plan.bus_importance.find(bus);
    out << bus.value << ", " << step * plan.step_minutes << ", "
        << fixed(it == plan.bus_importance.end() ? 0.0 : it->second, 3) << "\n";
  }
  out << "\nbranch,start_minute\n";
  for (const auto& [branch, step] : plan.branch_start)
    out << branch.low.value << "-" << branch.high.value << ", " << step * plan.step_minutes << "\n";
  return out.str();
}

std::string render_summary(const RestorationPlan& plan) {
  std::ostringstream out;
  if (plan.first_qualified_step) {
    out << "first qualified minute: " << *plan.first_qualified_step * plan.step_minutes
        << " (step " << *plan.first_qualified_step << ")\n";
  } else {
    out << "first qualified minute: none within " << plan.horizon_steps * plan.step_minutes
        << " minutes\n";
  }
  out << "unqualified steps: " << plan.unqualified_steps() << "\n";
  out << "skeleton buses: " << plan.bus_start.size() << "\n";
  out << "skeleton branches: " << plan.branch_start.size() << "\n";
  out << "total importance degree: " << fixed(plan.total_importance(), 3) << "\n";
  return out.str();
}

std::string export_plan(const RestorationPlan& plan, PlanFormat format) {
  if (format == PlanFormat::Csv) {
    std::ostringstream out;
    out << "step,minute,importance_term,distance_term,quality_index,qualified\n";
    for (const TrajectoryPoint& p : plan.trajectory)
      out << p.step << "," << p.step * plan.step_minutes << "," << exact(p.importance) << ","
          << exact(p.distance) << "," << exact(p.quality) << "," << (p.qualified ? 1 : 0) << "\n";
    return out.str();
  }

  json doc;
  doc["step_minutes"] = plan.step_minutes;
  doc["horizon_steps"] = plan.horizon_steps;
  doc["beta"] = plan.beta;
  doc["gamma"] = plan.gamma;
  doc["quality_threshold"] = plan.quality_threshold;
  doc["first_qualified_step"] =
      plan.first_qualified_step ? json(*plan.first_qualified_step) : json(nullptr);
  doc["buses"] = json::array();
  for (const auto& [bus, step] : plan.bus_start) {
    auto it = plan.bus_importance.find(bus);
    doc["buses"].push_back({{"bus", bus.value},
                            {"step", step},
                            {"importance", it == plan.bus_importance.end() ? 0.0 : it->second}});
  }
  doc["branches"] = json::array();
  for (const auto& [branch, step] : plan.branch_start)
    doc["branches"].push_back({{"from", branch.low.value}, {"to", branch.high.value}, {"step", step}});
  doc["trajectory"] = json::array();
  for (const TrajectoryPoint& p : plan.trajectory) {
    json row = {{"step", p.step},
                {"energized_buses", p.energized_buses},
                {"importance_term", p.importance},
                {"distance_term", p.distance},
                {"quality_index", p.quality},
                {"qualified", p.qualified}};
    if (p.solver_distance) row["solver_distance"] = *p.solver_distance;
    if (p.solver_quality) row["solver_quality"] = *p.solver_quality;
    doc["trajectory"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

RestorationPlan import_plan(std::string_view text) {
  RestorationPlan plan;
  try {
    const json doc = json::parse(text.begin(), text.end());
    plan.step_minutes = doc.at("step_minutes").get<int>();
    plan.horizon_steps = doc.at("horizon_steps").get<int>();
    plan.beta = doc.at("beta").get<double>();
    plan.gamma = doc.at("gamma").get<double>();
    plan.quality_threshold = doc.at("quality_threshold").get<double>();
    if (!doc.at("first_qualified_step").is_null())
      plan.first_qualified_step = doc.at("first_qualified_step").get<int>();
    for (const json& b : doc.at("buses")) {
      const BusId bus{b.at("bus").get<int>()};
      plan.bus_start[bus] = b.at("step").get<int>();
      plan.bus_importance[bus] = b.at("importance").get<double>();
    }
    for (const json& br : doc.at("branches"))
      plan.branch_start[BranchKey::of(BusId{br.at("from").get<int>()}, BusId{br.at("to").get<int>()})] =
          br.at("step").get<int>();
    for (const json& row : doc.at("trajectory")) {
      TrajectoryPoint p;
      p.step = row.at("step").get<int>();
      p.energized_buses = row.at("energized_buses").get<int>();
      p.importance = row.at("importance_term").get<double>();
      p.distance = row.at("distance_term").get<double>();
      p.quality = row.at("quality_index").get<double>();
      p.qualified = row.at("qualified").get<bool>();
      if (row.contains("solver_distance")) p.solver_distance = row["solver_distance"].get<double>();
      if (row.contains("solver_quality")) p.solver_quality = row["solver_quality"].get<double>();
      plan.trajectory.push_back(p);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed plan file: ") + e.what());
  }
  if (plan.step_minutes <= 0) throw InputError("plan step_minutes must be positive");
  if (static_cast<int>(plan.trajectory.size()) != plan.horizon_steps)
    throw InputError("plan trajectory has " + std::to_string(plan.trajectory.size()) +
                     " rows for a horizon of " + std::to_string(plan.horizon_steps) + " steps");
  return plan;
}

PlanComparison compare_plans(const RestorationPlan& a, const RestorationPlan& b) {
  if (a.step_minutes != b.step_minutes)
    throw InputError("plans use different step lengths (" + std::to_string(a.step_minutes) +
                     " vs " + std::to_string(b.step_minutes) + " min)");
  if (a.horizon_steps != b.horizon_steps || a.trajectory.size() != b.trajectory.size())
    throw InputError("plans have different horizons (" + std::to_string(a.horizon_steps) +
                     " vs " + std::to_string(b.horizon_steps) + " steps)");
  PlanComparison cmp;
  cmp.step_minutes = a.step_minutes;
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) {
    const TrajectoryPoint& pa = a.trajectory[k];
    const TrajectoryPoint& pb = b.trajectory[k];
    cmp.steps.push_back(pa.step);
    cmp.importance_a.push_back(pa.importance);
    cmp.importance_b.push_back(pb.importance);
    cmp.distance_a.push_back(pa.distance);
    cmp.distance_b.push_back(pb.distance);
    cmp.quality_a.push_back(pa.quality);
    cmp.quality_b.push_back(pb.quality);
  }
  cmp.first_qualified_a = a.first_qualified_step;
  cmp.first_qualified_b = b.first_qualified_step;
  cmp.skeleton_buses_a = a.bus_start.size();
  cmp.skeleton_buses_b = b.bus_start.size();
  cmp.skeleton_branches_a = a.branch_start.size();
  cmp.skeleton_branches_b = b.branch_start.size();
  cmp.total_importance_a = a.total_importance();
  cmp.total_importance_b = b.total_importance();
  return cmp;
}

std::string comparison_csv(const PlanComparison& cmp) {
  std::ostringstream out;
  out << "step,minute,importance_a,importance_b,distance_a,distance_b,quality_a,quality_b\n";
  for (std::size_t k = 0; k < cmp.steps.size(); ++k)
    out << cmp.steps[k] << "," << cmp.steps[k] * cmp.step_minutes << ","
        << exact(cmp.importance_a[k]) << "," << exact(cmp.importance_b[k]) << ","
        << exact(cmp.distance_a[k]) << "," << exact(cmp.distance_b[k]) << ","
        << exact(cmp.quality_a[k]) << "," << exact(cmp.quality_b[k]) << "\n";
  return out.str();
}

std::string comparison_summary(const PlanComparison& cmp, std::string_view name_a,
                               std::string_view name_b) {
  std::ostringstream out;
  auto minute = [&](std::optional<int> s) {
    return s ? std::to_string(*s * cmp.step_minutes) : std::string("none");
  };
  out << "plan,first_qualified_minute,skeleton_buses,skeleton_branches,total_importance\n";
  out << name_a << "," << minute(cmp.first_qualified_a) << "," << cmp.skeleton_buses_a << ","
      << cmp.skeleton_branches_a << "," << fixed(cmp.total_importance_a, 3) << "\n";
  out << name_b << "," << minute(cmp.first_qualified_b) << "," << cmp.skeleton_buses_b << ","
      << cmp.skeleton_branches_b << "," << fixed(cmp.total_importance_b, 3) << "\n";
  return out.str();
}

}  // namespace isnr
