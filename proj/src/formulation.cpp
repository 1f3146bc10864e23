#include "isnr/formulation.hpp"

#include <cmath>
#include <set>
#include <string>

#include "isnr/error.hpp"

namespace isnr {

using milp::LinExpr;
using milp::MilpModel;
using milp::Sense;

VariableIndex::VariableIndex(int horizon, std::size_t buses, std::size_t branches,
                             bool with_quality)
    : horizon_(horizon), buses_(buses), branches_(branches), with_quality_(with_quality) {
  const auto slots = static_cast<std::size_t>(horizon + 1);
  bus_on_.assign(slots, std::vector<VarRef>(buses));
  bus_change_.assign(slots, std::vector<VarRef>(buses));
  branch_on_.assign(slots, std::vector<VarRef>(branches));
  if (with_quality) {
    qualified_.resize(slots);
    qualified_change_.resize(slots);
    distance_.resize(slots);
    quality_.resize(slots);
    both_on_.assign(slots, std::vector<VarRef>(buses * (buses - 1) / 2));
    carried_on_.assign(slots, std::vector<VarRef>(buses * buses));
  }
}

std::size_t VariableIndex::pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  // Row-major index into the strict upper triangle.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

VarRef VariableIndex::both_on(std::size_t i, std::size_t j, int t) const {
  return both_on_[t][pair_index(i, j, buses_)];
}

// Emits variables time-major (every symbol of step t before step t+1) so the
// exhaustive backend can close each step before branching on the next.
class IsnrBuilder {
 public:
  IsnrBuilder(const PowerNetwork& net, const TopologyData* topo, const BlackStartSchedule& sched,
              const IsnrConfig& cfg)
      : net_(net), topo_(topo), sched_(sched), cfg_(cfg) {
    if (net.bus_count() == 0) throw InputError("network has no buses");
    if (cfg.horizon_steps < 1) throw InputError("horizon must be at least one step");
    if (cfg.step_minutes != sched.step_minutes())
      throw InputError("configured step length " + std::to_string(cfg.step_minutes) +
                       " min differs from the schedule's " +
                       std::to_string(sched.step_minutes()) + " min");
    if (cfg.horizon_steps < sched.latest_step())
      throw InputError("horizon of " + std::to_string(cfg.horizon_steps) +
                       " steps ends before the last scheduled step " +
                       std::to_string(sched.latest_step()));
    const auto bad = validate_schedule(sched, net);
    if (!bad.empty()) {
      std::string msg = "black-start schedule breaks the energization rules:";
      for (const auto& v : bad) msg += "\n  " + v.element + " violates rule " + v.equation + ": " + v.message;
      throw InputError(msg);
    }
    if (cfg.beta < 0 || cfg.gamma < 0 || cfg.quality_threshold < 0)
      throw InputError("beta, gamma and the quality threshold must be non-negative");
  }

  BuiltModel build() {
    const bool quality = topo_ != nullptr;
    idx_ = VariableIndex(cfg_.horizon_steps, net_.bus_count(), net_.branch_count(), quality);
    for (int t = 1; t <= cfg_.horizon_steps; ++t) {
      add_step_variables(t);
      add_energization_rows(t);
      if (quality) add_quality_rows(t);
    }
    if (quality) {
      LinExpr obj;
      for (int t = 1; t <= cfg_.horizon_steps; ++t) obj.add_constant(1.0).add(idx_.qualified(t), -1.0);
      model_.minimize(std::move(obj));
    }
    return {std::move(model_), std::move(idx_)};
  }

 private:
  std::string bus_name(std::size_t b) const { return std::to_string(net_.buses()[b].value); }
  std::string branch_name(std::size_t k) const {
    const BranchKey key = net_.branches()[k].key();
    return std::to_string(key.low.value) + "_" + std::to_string(key.high.value);
  }
  static std::string step(int t) { return "_t" + std::to_string(t); }

  void add_step_variables(int t) {
    const std::size_t n = net_.bus_count();
    for (std::size_t b = 0; b < n; ++b)
      idx_.bus_on_[t][b] = model_.add_binary("u_b" + bus_name(b) + step(t));
    for (std::size_t k = 0; k < net_.branch_count(); ++k)
      idx_.branch_on_[t][k] = model_.add_binary("uL_" + branch_name(k) + step(t));
    if (topo_) idx_.qualified_[t] = model_.add_binary("uS" + step(t));

    for (std::size_t b = 0; b < n; ++b)
      idx_.bus_change_[t][b] = model_.add_continuous("v_b" + bus_name(b) + step(t), 0.0, 1.0);
    if (!topo_) return;
    idx_.qualified_change_[t] = model_.add_continuous("vS" + step(t), 0.0, 1.0);
    // Name by external bus ids; i < j refers to the id order.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        idx_.both_on_[t][VariableIndex::pair_index(i, j, n)] = model_.add_continuous(
            "y1_" + ordered_pair_name(i, j) + step(t), 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          idx_.carried_on_[t][i * n + j] =
              model_.add_continuous("y2_" + bus_name(i) + "_" + bus_name(j) + step(t), 0.0, 1.0);
    idx_.distance_[t] = model_.add_continuous("d" + step(t), 0.0, milp::kInfinity);
    idx_.quality_[t] = model_.add_continuous("eta" + step(t), 0.0, milp::kInfinity);
  }

  std::string ordered_pair_name(std::size_t i, std::size_t j) const {
    const BusId a = net_.buses()[i];
    const BusId b = net_.buses()[j];
    return a < b ? bus_name(i) + "_" + bus_name(j) : bus_name(j) + "_" + bus_name(i);
  }

  // u at step t as an expression; step 0 is the all-zero blackout.
  LinExpr bus_at(std::size_t b, int t) const {
    return t == 0 ? LinExpr() : LinExpr(idx_.bus_on(b, t));
  }
  LinExpr branch_at(std::size_t k, int t) const {
    return t == 0 ? LinExpr() : LinExpr(idx_.branch_on(k, t));
  }

  void row(LinExpr e, Sense s, double rhs, std::string label) {
    model_.add_constraint(std::move(e), s, rhs, std::move(label));
  }

  void add_energization_rows(int t) {
    const std::size_t n = net_.bus_count();
    for (std::size_t k = 0; k < net_.branch_count(); ++k) {
      const Branch& br = net_.branches()[k];
      const std::size_t lo = net_.index_of(br.key().low);
      const std::size_t hi = net_.index_of(br.key().high);
      const std::string tag = branch_name(k) + step(t);
      const VarRef on = idx_.branch_on(k, t);
      // Terminal buses of an energized branch are energized.
      row(on - bus_at(lo, t), Sense::LessEqual, 0, "eq9_" + tag);
      row(on - bus_at(hi, t), Sense::LessEqual, 0, "eq10_" + tag);
      // A branch closes only onto a terminal live at the previous step.
      row(on - bus_at(lo, t - 1) - bus_at(hi, t - 1), Sense::LessEqual, 0, "eq11_" + tag);
      if (t > 1) row(branch_at(k, t - 1) - on, Sense::LessEqual, 0, "eq13_" + tag);
      if (const auto s = sched_.step_of(br.key()))
        row(LinExpr(on), Sense::Equal, t >= *s ? 1.0 : 0.0, "eq15_" + tag);
    }
    for (std::size_t b = 0; b < n; ++b) {
      const BusId id = net_.buses()[b];
      const std::string tag = "b" + bus_name(b) + step(t);
      const VarRef on = idx_.bus_on(b, t);
      if (!sched_.is_critical(id)) {
        LinExpr e(on);
        for (std::size_t k : net_.incident_branches(b)) e.add(idx_.branch_on(k, t), -1.0);
        row(std::move(e), Sense::LessEqual, 0, "eq12_" + tag);
      }
      if (t > 1) row(bus_at(b, t - 1) - on, Sense::LessEqual, 0, "mono_" + tag);
      row(LinExpr(idx_.bus_change(b, t)) - on + bus_at(b, t - 1), Sense::Equal, 0, "eq14_" + tag);
      if (const auto s = sched_.step_of(id))
        row(LinExpr(on), Sense::Equal, t >= *s ? 1.0 : 0.0, "eq16_" + tag);
    }
  }

  void add_quality_rows(int t) {
    const std::size_t n = net_.bus_count();
    const std::string st = step(t);
    const VarRef uS = idx_.qualified(t);
    const LinExpr uS_prev = t == 1 ? LinExpr() : LinExpr(idx_.qualified(t - 1));

    if (t > 1) row(uS_prev - uS, Sense::LessEqual, 0, "eq2" + st);
    row(LinExpr(idx_.qualified_change(t)) - uS + uS_prev, Sense::Equal, 0, "eq3" + st);

    LinExpr eta(idx_.quality(t));
    for (std::size_t b = 0; b < n; ++b)
      eta.add(idx_.bus_on(b, t), -cfg_.beta * topo_->importance.alpha[b]);
    eta.add(idx_.distance(t), -cfg_.gamma);
    row(std::move(eta), Sense::Equal, 0, "eq4" + st);

    row(LinExpr(idx_.quality(t)) - cfg_.quality_threshold * LinExpr(idx_.qualified_change(t)),
        Sense::GreaterEqual, 0, "eq8" + st);

    // d_t = d_{t-1} + sum_{i<j} d_ij (y1_ij,t - y1_ij,t-1): the exact
    // expansion of the incremental distance recursion for monotone u.
    LinExpr dist(idx_.distance(t));
    if (t > 1) dist.add(idx_.distance(t - 1), -1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dij = topo_->distance(i, j);
        dist.add(idx_.both_on(i, j, t), -dij);
        if (t > 1) dist.add(idx_.both_on(i, j, t - 1), dij);
      }
    }
    row(std::move(dist), Sense::Equal, 0, "eq19" + st);

    // McCormick envelopes of the binary products.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const VarRef y = idx_.both_on(i, j, t);
        const std::string tag = ordered_pair_name(i, j) + st;
        row(LinExpr(y) - bus_at(i, t) - bus_at(j, t), Sense::GreaterEqual, -1, "eq20a_" + tag);
        row(LinExpr(y) - bus_at(i, t), Sense::LessEqual, 0, "eq20b_" + tag);
        row(LinExpr(y) - bus_at(j, t), Sense::LessEqual, 0, "eq20c_" + tag);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const VarRef y = idx_.carried_on(i, j, t);
        const std::string tag = bus_name(i) + "_" + bus_name(j) + st;
        row(LinExpr(y) - bus_at(i, t - 1) - bus_at(j, t), Sense::GreaterEqual, -1, "eq21a_" + tag);
        row(LinExpr(y) - bus_at(i, t - 1), Sense::LessEqual, 0, "eq21b_" + tag);
        row(LinExpr(y) - bus_at(j, t), Sense::LessEqual, 0, "eq21c_" + tag);
      }
    }
  }

  const PowerNetwork& net_;
  const TopologyData* topo_;
  const BlackStartSchedule& sched_;
  const IsnrConfig& cfg_;
  MilpModel model_;
  VariableIndex idx_;
};

BuiltModel build_isnr_model(const PowerNetwork& net, const TopologyData& topo,
                            const BlackStartSchedule& sched, const IsnrConfig& cfg) {
  return IsnrBuilder(net, &topo, sched, cfg).build();
}

BuiltModel build_sequencing_model(const PowerNetwork& net, std::span<const BranchKey> target,
                                  const BlackStartSchedule& sched, const IsnrConfig& cfg) {
  const std::set<BranchKey> targets(target.begin(), target.end());
  for (BranchKey key : targets)
    if (!net.contains(key)) throw InputError("target references unknown branch " + to_string(key));
  for (const auto& [key, _] : sched.critical_branches())
    if (!targets.contains(key))
      throw InputError("target branch set is missing critical branch " + to_string(key));

  if (!targets.empty()) {
    // The target branches and their endpoints must form one connected graph.
    std::map<BusId, std::vector<BusId>> adj;
    for (BranchKey key : targets) {
      adj[key.low].push_back(key.high);
      adj[key.high].push_back(key.low);
    }
    std::set<BusId> seen{adj.begin()->first};
    std::vector<BusId> stack{adj.begin()->first};
    while (!stack.empty()) {
      const BusId u = stack.back();
      stack.pop_back();
      for (BusId v : adj[u])
        if (seen.insert(v).second) stack.push_back(v);
    }
    if (seen.size() != adj.size())
      throw InputError("target branch set is disconnected");
  }

  BuiltModel built = IsnrBuilder(net, nullptr, sched, cfg).build();
  LinExpr obj;
  for (int t = 1; t <= cfg.horizon_steps; ++t) {
    for (std::size_t k = 0; k < net.branch_count(); ++k) {
      const BranchKey key = net.branches()[k].key();
      const VarRef on = built.index.branch_on(k, t);
      if (targets.contains(key)) {
        obj.add_constant(1.0).add(on, -1.0);
      } else {
        built.model.add_constraint(LinExpr(on), Sense::Equal, 0,
                                   "offtarget_" + std::to_string(key.low.value) + "_" +
                                       std::to_string(key.high.value) + "_t" + std::to_string(t));
      }
    }
  }
  built.model.minimize(std::move(obj));
  return built;
}

RestorationPlan plan_from_starts(const PowerNetwork& net, const TopologyData& topo,
                                 const IsnrConfig& cfg, std::map<BusId, int> bus_start,
                                 std::map<BranchKey, int> branch_start,
                                 std::optional<int> first_qualified) {
  RestorationPlan plan;
  plan.step_minutes = cfg.step_minutes;
  plan.horizon_steps = cfg.horizon_steps;
  plan.beta = cfg.beta;
  plan.gamma = cfg.gamma;
  plan.quality_threshold = cfg.quality_threshold;
  plan.bus_start = std::move(bus_start);
  plan.branch_start = std::move(branch_start);
  plan.first_qualified_step = first_qualified;
  for (const auto& [bus, _] : plan.bus_start)
    plan.bus_importance[bus] = topo.importance.alpha[net.index_of(bus)];

  for (int t = 1; t <= cfg.horizon_steps; ++t) {
    std::vector<std::size_t> live;
    for (const auto& [bus, s] : plan.bus_start)
      if (s <= t) live.push_back(net.index_of(bus));
    TrajectoryPoint p;
    p.step = t;
    p.energized_buses = static_cast<int>(live.size());
    p.importance = importance_total(topo.importance.alpha, live);
    p.distance = network_distance(topo.distance, live);
    p.quality = cfg.beta * p.importance + cfg.gamma * p.distance;
    p.qualified = first_qualified && t >= *first_qualified;
    plan.trajectory.push_back(p);
  }
  return plan;
}

RestorationPlan extract_plan(const milp::Solution& solution, const VariableIndex& index,
                             const PowerNetwork& net, const TopologyData& topo,
                             const IsnrConfig& cfg) {
  if (!solution.optimal())
    throw SolverError("cannot extract a plan from a " + std::string(milp::to_string(solution.status)) +
                      " solution" + (solution.message.empty() ? "" : ": " + solution.message));
  if (index.horizon() != cfg.horizon_steps)
    throw SolverError("variable index horizon differs from the configuration");

  auto binary = [&](VarRef v) {
    const double x = solution.value(v);
    const double r = std::round(x);
    if (std::abs(x - r) > milp::kTolerance || (r != 0.0 && r != 1.0))
      throw SolverError("binary variable at index " + std::to_string(v.index()) + " has value " +
                        std::to_string(x));
    return r == 1.0;
  };

  const int horizon = index.horizon();
  std::map<BusId, int> bus_start;
  for (std::size_t b = 0; b < net.bus_count(); ++b)
    for (int t = 1; t <= horizon; ++t)
      if (binary(index.bus_on(b, t))) {
        bus_start[net.buses()[b]] = t;
        break;
      }
  std::map<BranchKey, int> branch_start;
  for (std::size_t k = 0; k < net.branch_count(); ++k)
    for (int t = 1; t <= horizon; ++t)
      if (binary(index.branch_on(k, t))) {
        branch_start[net.branches()[k].key()] = t;
        break;
      }

  std::optional<int> first_qualified;
  if (index.has_quality()) {
    for (int t = 1; t <= horizon && !first_qualified; ++t)
      if (binary(index.qualified(t))) first_qualified = t;
  }

  RestorationPlan plan = plan_from_starts(net, topo, cfg, std::move(bus_start),
                                          std::move(branch_start), first_qualified);
  if (!index.has_quality()) {
    for (const TrajectoryPoint& p : plan.trajectory) {
      if (p.quality >= cfg.quality_threshold) {
        plan.first_qualified_step = p.step;
        break;
      }
    }
    for (TrajectoryPoint& p : plan.trajectory)
      p.qualified = plan.first_qualified_step && p.step >= *plan.first_qualified_step;
    return plan;
  }

  for (TrajectoryPoint& p : plan.trajectory) {
    p.solver_distance = solution.value(index.distance(p.step));
    p.solver_quality = solution.value(index.quality(p.step));
    if (std::abs(*p.solver_distance - p.distance) > 1e-4)
      throw SolverError("solver distance at step " + std::to_string(p.step) + " is " +
                        std::to_string(*p.solver_distance) + ", pairwise recomputation gives " +
                        std::to_string(p.distance));
    if (std::abs(*p.solver_quality - p.quality) > 1e-4)
      throw SolverError("solver quality index at step " + std::to_string(p.step) + " is " +
                        std::to_string(*p.solver_quality) + ", recomputation gives " +
                        std::to_string(p.quality));
  }
  return plan;
}

namespace {

milp::Solution solve_checked(const milp::SolverBackend& backend, const MilpModel& model,
                             std::string_view what) {
  milp::Solution sol = backend.solve(model);
  if (!sol.optimal())
    throw SolverError(std::string(what) + ": " + backend.name() + " backend returned " +
                      std::string(milp::to_string(sol.status)) +
                      (sol.message.empty() ? "" : " (" + sol.message + ")"));
  return sol;
}

}  // namespace

IsnrResult solve_isnr(const PowerNetwork& net, const TopologyData& topo,
                      const BlackStartSchedule& sched, const IsnrConfig& cfg,
                      const milp::SolverBackend& backend, TieBreak tie_break) {
  BuiltModel built = build_isnr_model(net, topo, sched, cfg);
  milp::Solution sol = solve_checked(backend, built.model, "ISNR solve");
  const double objective = std::round(sol.objective_value);

  if (tie_break == TieBreak::MaxEnergization) {
    LinExpr qualified_steps;
    LinExpr unenergized;
    for (int t = 1; t <= cfg.horizon_steps; ++t) {
      qualified_steps.add(built.index.qualified(t), 1.0);
      for (std::size_t b = 0; b < net.bus_count(); ++b)
        unenergized.add_constant(1.0).add(built.index.bus_on(b, t), -1.0);
      for (std::size_t k = 0; k < net.branch_count(); ++k)
        unenergized.add_constant(1.0).add(built.index.branch_on(k, t), -1.0);
    }
    built.model.add_constraint(std::move(qualified_steps), Sense::GreaterEqual,
                               cfg.horizon_steps - objective, "tiebreak_qualification");
    built.model.minimize(std::move(unenergized));
    sol = solve_checked(backend, built.model, "ISNR tie-break solve");
  }

  return {extract_plan(sol, built.index, net, topo, cfg), objective};
}

RestorationPlan solve_sequencing(const PowerNetwork& net, const TopologyData& topo,
                                 std::span<const BranchKey> target,
                                 const BlackStartSchedule& sched, const IsnrConfig& cfg,
                                 const milp::SolverBackend& backend) {
  BuiltModel built = build_sequencing_model(net, target, sched, cfg);
  const milp::Solution sol = solve_checked(backend, built.model, "sequencing solve");
  return extract_plan(sol, built.index, net, topo, cfg);
}

}  // namespace isnr
