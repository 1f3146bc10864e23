#include "isnr/network.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <json.hpp>

#include "isnr/error.hpp"

namespace isnr {

using nlohmann::json;

std::string to_string(BusId bus) { return std::to_string(bus.value); }

std::string to_string(BranchKey branch) {
  return std::to_string(branch.low.value) + "-" + std::to_string(branch.high.value);
}

// ---------------------------------------------------------------------------
// PowerNetwork

PowerNetwork PowerNetwork::build(std::vector<BusId> buses, std::vector<Branch> branches) {
  if (buses.empty()) throw InputError("network has no buses");

  PowerNetwork net;
  net.buses_ = std::move(buses);
  net.branches_ = std::move(branches);

  for (std::size_t i = 0; i < net.buses_.size(); ++i) {
    if (!net.bus_index_.emplace(net.buses_[i].value, i).second)
      throw InputError("duplicate bus id " + to_string(net.buses_[i]));
  }

  const std::size_t n = net.buses_.size();
  net.incidence_.assign(n, {});
  net.adjacency_.assign(n, {});
  net.branch_endpoints_.reserve(net.branches_.size());

  for (std::size_t k = 0; k < net.branches_.size(); ++k) {
    const Branch& br = net.branches_[k];
    const std::string label = to_string(br.from) + "-" + to_string(br.to);
    if (br.from == br.to) throw InputError("self-loop branch " + label);
    auto fi = net.bus_index_.find(br.from.value);
    auto ti = net.bus_index_.find(br.to.value);
    if (fi == net.bus_index_.end())
      throw InputError("branch " + label + " references unknown bus " + to_string(br.from));
    if (ti == net.bus_index_.end())
      throw InputError("branch " + label + " references unknown bus " + to_string(br.to));
    if (!net.branch_index_.emplace(br.key(), k).second)
      throw InputError("duplicate branch " + to_string(br.key()));

    net.incidence_[fi->second].push_back(k);
    net.incidence_[ti->second].push_back(k);
    net.adjacency_[fi->second].push_back(ti->second);
    net.adjacency_[ti->second].push_back(fi->second);
    net.branch_endpoints_.emplace_back(fi->second, ti->second);
  }

  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : net.adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  if (reached != n) {
    const auto it = std::find(seen.begin(), seen.end(), false);
    throw InputError("network is disconnected: bus " +
                     to_string(net.buses_[static_cast<std::size_t>(it - seen.begin())]) +
                     " is unreachable from bus " + to_string(net.buses_[0]));
  }
  return net;
}

std::size_t PowerNetwork::index_of(BusId bus) const {
  auto it = bus_index_.find(bus.value);
  if (it == bus_index_.end()) throw InputError("unknown bus " + to_string(bus));
  return it->second;
}

std::size_t PowerNetwork::index_of(BranchKey branch) const {
  auto it = branch_index_.find(branch);
  if (it == branch_index_.end()) throw InputError("unknown branch " + to_string(branch));
  return it->second;
}

// ---------------------------------------------------------------------------
// BlackStartSchedule

BlackStartSchedule BlackStartSchedule::build(const PowerNetwork& net, int step_minutes,
                                             int horizon_steps, std::map<BusId, int> bus_steps,
                                             std::map<BranchKey, int> branch_steps) {
  if (step_minutes <= 0) throw InputError("step_minutes must be positive");
  if (horizon_steps <= 0) throw InputError("horizon_steps must be positive");

  auto check_step = [&](const std::string& what, int step) {
    if (step < 1) throw InputError(what + " scheduled at step " + std::to_string(step) +
                                   "; steps start at 1");
    if (step > horizon_steps)
      throw InputError(what + " scheduled at step " + std::to_string(step) +
                       " beyond horizon " + std::to_string(horizon_steps));
  };
  for (const auto& [bus, step] : bus_steps) {
    if (!net.contains(bus)) throw InputError("schedule references unknown bus " + to_string(bus));
    check_step("bus " + to_string(bus), step);
  }
  for (const auto& [branch, step] : branch_steps) {
    if (!net.contains(branch))
      throw InputError("schedule references unknown branch " + to_string(branch));
    check_step("branch " + to_string(branch), step);
  }

  BlackStartSchedule s;
  s.step_minutes_ = step_minutes;
  s.horizon_steps_ = horizon_steps;
  s.bus_steps_ = std::move(bus_steps);
  s.branch_steps_ = std::move(branch_steps);
  return s;
}

std::optional<int> BlackStartSchedule::step_of(BusId bus) const {
  auto it = bus_steps_.find(bus);
  if (it == bus_steps_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> BlackStartSchedule::step_of(BranchKey branch) const {
  auto it = branch_steps_.find(branch);
  if (it == branch_steps_.end()) return std::nullopt;
  return it->second;
}

bool BlackStartSchedule::energized(BusId bus, int t) const {
  auto step = step_of(bus);
  return step && t >= *step;
}

bool BlackStartSchedule::energized(BranchKey branch, int t) const {
  auto step = step_of(branch);
  return step && t >= *step;
}

int BlackStartSchedule::latest_step() const {
  int latest = 0;
  for (const auto& [_, step] : bus_steps_) latest = std::max(latest, step);
  for (const auto& [_, step] : branch_steps_) latest = std::max(latest, step);
  return latest;
}

BlackStartSchedule BlackStartSchedule::with_horizon(const PowerNetwork& net,
                                                    int horizon_steps) const {
  return build(net, step_minutes_, horizon_steps, bus_steps_, branch_steps_);
}

// ---------------------------------------------------------------------------
// Schedule validation

std::vector<ScheduleViolation> validate_schedule(const BlackStartSchedule& sched,
                                                 const PowerNetwork& net) {
  std::vector<ScheduleViolation> out;
  for (const Branch& br : net.branches()) {
    const auto branch_step = sched.step_of(br.key());
    if (!branch_step) continue;
    const std::string element = "branch " + to_string(br.key());
    const auto from_step = sched.step_of(br.from);
    const auto to_step = sched.step_of(br.to);

    if (from_step && *branch_step < *from_step)
      out.push_back({element, "(9)",
                     "energized at step " + std::to_string(*branch_step) + " before bus " +
                         to_string(br.from) + " (step " + std::to_string(*from_step) + ")"});
    if (to_step && *branch_step < *to_step)
      out.push_back({element, "(10)",
                     "energized at step " + std::to_string(*branch_step) + " before bus " +
                         to_string(br.to) + " (step " + std::to_string(*to_step) + ")"});
    if (from_step && to_step) {
      const int earliest = std::min(*from_step, *to_step);
      if (*branch_step < earliest + 1)
        out.push_back({element, "(11)",
                       "energized at step " + std::to_string(*branch_step) +
                           " with no terminal bus energized at the previous step"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON files

namespace {

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError(std::string(what) + " syntax error at line " + std::to_string(line) +
                     ", column " + std::to_string(column) + ": " + e.what());
  }
}

const json& field(const json& obj, const char* name, std::string_view what) {
  if (!obj.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  auto it = obj.find(name);
  if (it == obj.end())
    throw InputError(std::string(what) + ": missing field '" + name + "'");
  return *it;
}

int integer(const json& value, std::string_view what) {
  if (!value.is_number_integer())
    throw InputError(std::string(what) + ": expected an integer, got " + value.dump());
  return value.get<int>();
}

const json& array(const json& value, std::string_view what) {
  if (!value.is_array()) throw InputError(std::string(what) + ": expected a list");
  return value;
}

Branch branch_pair(const json& value, std::string_view what) {
  if (!value.is_array() || value.size() != 2)
    throw InputError(std::string(what) + ": expected a [from, to] pair, got " + value.dump());
  return {BusId{integer(value[0], what)}, BusId{integer(value[1], what)}};
}

int minute_to_step(int minute, int step_minutes, const std::string& element) {
  if (minute % step_minutes != 0)
    throw InputError(element + ": time " + std::to_string(minute) +
                     " min is not a multiple of step_minutes " + std::to_string(step_minutes));
  return minute / step_minutes;
}

}  // namespace

PowerNetwork parse_network(std::string_view text) {
  const json doc = parse_json(text, "case file");
  std::vector<BusId> buses;
  for (const json& b : array(field(doc, "buses", "case file"), "case file 'buses'"))
    buses.push_back(BusId{integer(b, "case file bus id")});
  std::vector<Branch> branches;
  for (const json& br : array(field(doc, "branches", "case file"), "case file 'branches'"))
    branches.push_back(branch_pair(br, "case file branch"));
  return PowerNetwork::build(std::move(buses), std::move(branches));
}

BlackStartSchedule parse_schedule(std::string_view text, const PowerNetwork& net) {
  const json doc = parse_json(text, "schedule file");
  const int step_minutes = integer(field(doc, "step_minutes", "schedule file"), "step_minutes");
  const int horizon = integer(field(doc, "horizon_steps", "schedule file"), "horizon_steps");
  if (step_minutes <= 0) throw InputError("step_minutes must be positive");

  std::map<BusId, int> bus_steps;
  for (const json& entry :
       array(field(doc, "critical_buses", "schedule file"), "schedule 'critical_buses'")) {
    const BusId bus{integer(field(entry, "bus", "critical bus entry"), "critical bus id")};
    const std::string element = "bus " + to_string(bus);
    const int step =
        minute_to_step(integer(field(entry, "minute", element), element), step_minutes, element);
    if (!bus_steps.emplace(bus, step).second)
      throw InputError("schedule lists " + element + " twice");
  }

  std::map<BranchKey, int> branch_steps;
  for (const json& entry :
       array(field(doc, "critical_branches", "schedule file"), "schedule 'critical_branches'")) {
    const BranchKey key = BranchKey::of(
        BusId{integer(field(entry, "from", "critical branch entry"), "critical branch from")},
        BusId{integer(field(entry, "to", "critical branch entry"), "critical branch to")});
    const std::string element = "branch " + to_string(key);
    const int step =
        minute_to_step(integer(field(entry, "minute", element), element), step_minutes, element);
    if (!branch_steps.emplace(key, step).second)
      throw InputError("schedule lists " + element + " twice");
  }

  return BlackStartSchedule::build(net, step_minutes, horizon, std::move(bus_steps),
                                   std::move(branch_steps));
}

std::string serialize_network(const PowerNetwork& net) {
  json doc;
  doc["buses"] = json::array();
  for (BusId b : net.buses()) doc["buses"].push_back(b.value);
  doc["branches"] = json::array();
  for (const Branch& br : net.branches()) doc["branches"].push_back({br.from.value, br.to.value});
  return doc.dump(2) + "\n";
}

std::string serialize_schedule(const BlackStartSchedule& sched) {
  json doc;
  doc["step_minutes"] = sched.step_minutes();
  doc["horizon_steps"] = sched.horizon_steps();
  doc["critical_buses"] = json::array();
  for (const auto& [bus, step] : sched.critical_buses())
    doc["critical_buses"].push_back({{"bus", bus.value}, {"minute", step * sched.step_minutes()}});
  doc["critical_branches"] = json::array();
  for (const auto& [branch, step] : sched.critical_branches())
    doc["critical_branches"].push_back({{"from", branch.low.value},
                                        {"to", branch.high.value},
                                        {"minute", step * sched.step_minutes()}});
  return doc.dump(2) + "\n";
}

std::vector<BranchKey> parse_branch_list(std::string_view text, const PowerNetwork& net) {
  const json doc = parse_json(text, "branch list");
  std::vector<BranchKey> out;
  std::set<BranchKey> seen;
  for (const json& br : array(field(doc, "branches", "branch list"), "branch list 'branches'")) {
    const BranchKey key = branch_pair(br, "branch list entry").key();
    if (!net.contains(key)) throw InputError("branch list references unknown branch " + to_string(key));
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

std::string serialize_branch_list(std::span<const BranchKey> branches) {
  json doc;
  doc["branches"] = json::array();
  for (BranchKey key : branches) doc["branches"].push_back({key.low.value, key.high.value});
  return doc.dump(2) + "\n";
}

}  // namespace isnr
