// Command-line front end: metrics, solve, sequence, compare, export-lp.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isnr/error.hpp"
#include "isnr/formulation.hpp"
#include "isnr/network.hpp"
#include "isnr/plan.hpp"
#include "isnr/solvers.hpp"
#include "isnr/topology.hpp"

namespace {

enum ExitCode { kOk = 0, kInputError = 1, kSolverFailure = 2, kNeverQualified = 3 };

struct Options {
  std::string case_path = "ne39";
  std::string schedule_path = "fixture";
  double beta = 150.0;
  double gamma = 0.7;
  double quality_threshold = 1500.0;
  std::optional<int> horizon;
  std::optional<int> step_minutes;
  std::string solver = "external";
  std::string solver_cmd = isnr::milp::default_external_command();
  std::size_t exhaustive_limit = isnr::milp::kDefaultExhaustiveLimit;
  std::string tie_break = "none";
  std::string out;
  std::string targets;
  std::string plan_json;
  std::string trajectory_csv;
  std::string series_csv;
  std::string plan_a;
  std::string plan_b;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw isnr::InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw isnr::InputError("cannot write " + path);
}

struct Inputs {
  isnr::PowerNetwork network;
  isnr::BlackStartSchedule schedule;
  isnr::IsnrConfig config;
};

Inputs load_inputs(const Options& opt) {
  const bool builtin_case = opt.case_path == "ne39";
  std::optional<isnr::TestCase> fixture;
  if (builtin_case || opt.schedule_path == "fixture") fixture = isnr::new_england_39();

  isnr::PowerNetwork net =
      builtin_case ? fixture->network : isnr::parse_network(read_file(opt.case_path));
  isnr::BlackStartSchedule sched = [&] {
    if (opt.schedule_path == "fixture") {
      if (!builtin_case)
        throw isnr::InputError("the built-in schedule 'fixture' only applies to case 'ne39'");
      return fixture->schedule;
    }
    return isnr::parse_schedule(read_file(opt.schedule_path), net);
  }();

  if (opt.step_minutes && *opt.step_minutes != sched.step_minutes())
    throw isnr::InputError("--step-minutes " + std::to_string(*opt.step_minutes) +
                           " differs from the schedule's step length " +
                           std::to_string(sched.step_minutes()));
  if (opt.horizon) sched = sched.with_horizon(net, *opt.horizon);

  isnr::IsnrConfig cfg;
  cfg.beta = opt.beta;
  cfg.gamma = opt.gamma;
  cfg.quality_threshold = opt.quality_threshold;
  cfg.horizon_steps = sched.horizon_steps();
  cfg.step_minutes = sched.step_minutes();
  return {std::move(net), std::move(sched), cfg};
}

std::unique_ptr<isnr::milp::SolverBackend> make_backend(const Options& opt) {
  if (opt.solver == "exhaustive")
    return std::make_unique<isnr::milp::ExhaustiveBackend>(opt.exhaustive_limit);
  return std::make_unique<isnr::milp::ExternalBackend>(opt.solver_cmd);
}

std::vector<isnr::BranchKey> load_targets(const Options& opt, const isnr::PowerNetwork& net) {
  if (opt.targets.empty()) throw isnr::InputError("--targets is required");
  if (opt.targets == "ne39-skeleton") return isnr::new_england_39_skeleton_branches();
  return isnr::parse_branch_list(read_file(opt.targets), net);
}

void write_plan_files(const Options& opt, const isnr::RestorationPlan& plan) {
  if (!opt.plan_json.empty())
    write_output(opt.plan_json, isnr::export_plan(plan, isnr::PlanFormat::Json));
  if (!opt.trajectory_csv.empty())
    write_output(opt.trajectory_csv, isnr::export_plan(plan, isnr::PlanFormat::Csv));
}

int run_metrics(const Options& opt) {
  const Inputs in = load_inputs(opt);
  const isnr::ImportanceVector imp = isnr::bus_importance(in.network);
  std::vector<std::pair<isnr::BusId, std::size_t>> order;
  for (std::size_t i = 0; i < in.network.bus_count(); ++i) order.emplace_back(in.network.buses()[i], i);
  std::sort(order.begin(), order.end());
  std::ostringstream out;
  out << "bus,raw,alpha\n";
  char buf[96];
  for (const auto& [bus, i] : order) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", bus.value, imp.raw[i], imp.alpha[i]);
    out << buf;
  }
  write_output(opt.out, out.str());
  return kOk;
}

int run_solve(const Options& opt) {
  const Inputs in = load_inputs(opt);
  const auto topo = isnr::TopologyData::of(in.network);
  const auto backend = make_backend(opt);
  const auto tie = opt.tie_break == "max-energization" ? isnr::TieBreak::MaxEnergization
                                                       : isnr::TieBreak::None;
  const isnr::IsnrResult result =
      isnr::solve_isnr(in.network, topo, in.schedule, in.config, *backend, tie);

  std::ostringstream report;
  report << isnr::render_summary(result.plan);
  report << "objective: " << result.objective << "\n\n";
  report << isnr::render_tables(result.plan) << "\n";
  report << isnr::export_plan(result.plan, isnr::PlanFormat::Csv);
  write_output(opt.out, report.str());
  write_plan_files(opt, result.plan);
  if (!result.plan.first_qualified_step) {
    std::cerr << "isnr: the network never reaches the quality threshold within the horizon\n";
    return kNeverQualified;
  }
  return kOk;
}

int run_sequence(const Options& opt) {
  const Inputs in = load_inputs(opt);
  const auto topo = isnr::TopologyData::of(in.network);
  const auto targets = load_targets(opt, in.network);
  const auto backend = make_backend(opt);
  const isnr::RestorationPlan plan =
      isnr::solve_sequencing(in.network, topo, targets, in.schedule, in.config, *backend);

  std::ostringstream report;
  report << isnr::render_summary(plan) << "\n";
  report << isnr::render_tables(plan) << "\n";
  report << isnr::export_plan(plan, isnr::PlanFormat::Csv);
  write_output(opt.out, report.str());
  write_plan_files(opt, plan);
  return kOk;
}

int run_compare(const Options& opt) {
  const isnr::RestorationPlan a = isnr::import_plan(read_file(opt.plan_a));
  const isnr::RestorationPlan b = isnr::import_plan(read_file(opt.plan_b));
  const isnr::PlanComparison cmp = isnr::compare_plans(a, b);
  write_output(opt.out, isnr::comparison_summary(cmp, "a", "b") + "\n" + isnr::comparison_csv(cmp));
  if (!opt.series_csv.empty()) write_output(opt.series_csv, isnr::comparison_csv(cmp));
  return kOk;
}

int run_export_lp(const Options& opt) {
  const Inputs in = load_inputs(opt);
  const auto topo = isnr::TopologyData::of(in.network);
  if (!opt.targets.empty()) {
    const auto targets = load_targets(opt, in.network);
    write_output(opt.out, isnr::milp::write_lp(
                              isnr::build_sequencing_model(in.network, targets, in.schedule, in.config).model));
  } else {
    write_output(opt.out, isnr::milp::write_lp(
                              isnr::build_isnr_model(in.network, topo, in.schedule, in.config).model));
  }
  return kOk;
}

void add_input_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--case", opt.case_path, "Case file (JSON) or 'ne39'")->capture_default_str();
  cmd->add_option("--schedule", opt.schedule_path, "Schedule file (JSON) or 'fixture'")
      ->capture_default_str();
  cmd->add_option("--beta", opt.beta, "Network importance weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--gamma", opt.gamma, "Network distance weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--quality-threshold", opt.quality_threshold, "Quality index requirement N")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--horizon", opt.horizon, "Horizon in steps (default: schedule's)")->check(CLI::PositiveNumber);
  cmd->add_option("--step-minutes", opt.step_minutes, "Minutes per step (must match schedule)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opt.out, "Output file (default: stdout)");
}

void add_solver_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--solver", opt.solver, "Solver backend")
      ->check(CLI::IsMember({"exhaustive", "external"}))
      ->capture_default_str();
  cmd->add_option("--solver-cmd", opt.solver_cmd, "External solver command with {lp} and {sol}")
      ->capture_default_str();
  cmd->add_option("--exhaustive-limit", opt.exhaustive_limit, "Maximum binaries for the exhaustive solver")
      ->capture_default_str();
  cmd->add_option("--plan-json", opt.plan_json, "Write the full plan as JSON");
  cmd->add_option("--trajectory-csv", opt.trajectory_csv, "Write the trajectory CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeleton-network reconfiguration optimizer"};
  app.require_subcommand(1);
  Options opt;

  auto* metrics = app.add_subcommand("metrics", "Bus importance degrees as CSV");
  add_input_flags(metrics, opt);

  auto* solve = app.add_subcommand("solve", "Solve the integrated reconfiguration model");
  add_input_flags(solve, opt);
  add_solver_flags(solve, opt);
  solve->add_option("--tie-break", opt.tie_break, "Choice among alternate optima")
      ->check(CLI::IsMember({"none", "max-energization"}))
      ->capture_default_str();

  auto* sequence = app.add_subcommand("sequence", "Sequence a fixed target network");
  add_input_flags(sequence, opt);
  add_solver_flags(sequence, opt);
  sequence->add_option("--targets", opt.targets, "Branch list file (JSON) or 'ne39-skeleton'")
      ->required();

  auto* compare = app.add_subcommand("compare", "Compare two exported JSON plans");
  compare->add_option("plan_a", opt.plan_a, "First plan (JSON)")->required()->check(CLI::ExistingFile);
  compare->add_option("plan_b", opt.plan_b, "Second plan (JSON)")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", opt.out, "Output file (default: stdout)");
  compare->add_option("--series-csv", opt.series_csv, "Write only the aligned series CSV");

  auto* export_lp = app.add_subcommand("export-lp", "Write the model as CPLEX LP text");
  add_input_flags(export_lp, opt);
  export_lp->add_option("--targets", opt.targets,
                        "Export the sequencing model for this branch list instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*metrics) return run_metrics(opt);
    if (*solve) return run_solve(opt);
    if (*sequence) return run_sequence(opt);
    if (*compare) return run_compare(opt);
    if (*export_lp) return run_export_lp(opt);
  } catch (const isnr::InputError& e) {
    std::cerr << "isnr: " << e.what() << "\n";
    return kInputError;
  } catch (const isnr::ModelError& e) {
    std::cerr << "isnr: " << e.what() << "\n";
    return kInputError;
  } catch (const isnr::SolverError& e) {
    std::cerr << "isnr: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kInputError;
}
