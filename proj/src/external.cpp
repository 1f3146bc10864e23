#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "isnr/error.hpp"
#include "isnr/solvers.hpp"

#ifndef ISNR_HIGHS_SCRIPT
#define ISNR_HIGHS_SCRIPT "highs_solve.py"
#endif

namespace isnr::milp {

namespace {

std::atomic<unsigned> next_job{0};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string replace_all(std::string text, std::string_view key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

Solution failed(SolveStatus status, std::string message) {
  Solution s;
  s.status = status;
  s.message = std::move(message);
  return s;
}

}  // namespace

std::string default_external_command() {
  return "python3 " + shell_quote(ISNR_HIGHS_SCRIPT) + " {lp} {sol}";
}

Solution read_solution(std::string_view text, const MilpModel& model) {
  Solution sol;
  sol.status = SolveStatus::Optimal;
  sol.values.assign(model.variables().size(), 0.0);

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream directive(line.substr(first + 1));
      std::string key, value;
      directive >> key >> value;
      if (key == "status:") {
        if (value == "optimal") sol.status = SolveStatus::Optimal;
        else if (value == "infeasible") sol.status = SolveStatus::Infeasible;
        else sol.status = SolveStatus::Error;
        if (sol.status == SolveStatus::Error) sol.message = "solver reported status '" + value + "'";
      }
      continue;
    }
    std::istringstream fields(line);
    std::string name, value_text, extra;
    if (!(fields >> name >> value_text) || (fields >> extra))
      throw SolverError("solution file line " + std::to_string(line_no) +
                        ": expected 'name value', got '" + line + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument(value_text);
    } catch (const std::exception&) {
      throw SolverError("solution file line " + std::to_string(line_no) + ": bad value '" +
                        value_text + "'");
    }
    if (!model.has(name)) continue;
    const VarRef v = model.find(name);
    if (model.variable(v).kind == VarKind::Binary && std::abs(value - std::round(value)) <= kTolerance)
      value = std::round(value);
    sol.values[v.index()] = value;
  }

  if (sol.status != SolveStatus::Optimal) {
    sol.values.clear();
    return sol;
  }
  const auto bad = violations(model, sol.values);
  if (!bad.empty()) {
    sol.status = SolveStatus::Error;
    sol.message = "solver solution violates the model (" + std::to_string(bad.size()) +
                  " violations), first: " + bad.front();
    return sol;
  }
  sol.objective_value = model.objective().evaluate(sol.values);
  return sol;
}

Solution solve_external(const MilpModel& model, std::string_view command_template,
                        const std::filesystem::path& workdir) {
  const std::string tmpl(command_template);
  if (tmpl.find("{lp}") == std::string::npos || tmpl.find("{sol}") == std::string::npos)
    throw ModelError("solver command template must contain {lp} and {sol}");

  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  if (ec) return failed(SolveStatus::Error, "cannot create workdir " + workdir.string());

  const std::string stem = "isnr-" + std::to_string(::getpid()) + "-" + std::to_string(next_job++);
  const auto lp_path = workdir / (stem + ".lp");
  const auto sol_path = workdir / (stem + ".sol");
  {
    std::ofstream lp(lp_path);
    lp << write_lp(model);
    if (!lp) return failed(SolveStatus::Error, "cannot write " + lp_path.string());
  }
  std::filesystem::remove(sol_path, ec);

  std::string command = replace_all(tmpl, "{lp}", shell_quote(lp_path.string()));
  command = replace_all(command, "{sol}", shell_quote(sol_path.string()));
  const int raw = std::system(command.c_str());
  if (raw == -1) return failed(SolveStatus::Error, "cannot launch solver command: " + command);
  const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : 128;
  if (code == 127) return failed(SolveStatus::NoSolver, "solver command not found: " + command);
  if (code != 0)
    return failed(SolveStatus::Error,
                  "solver command exited with status " + std::to_string(code) + ": " + command);

  std::ifstream in(sol_path);
  if (!in) return failed(SolveStatus::Error, "solver produced no solution file " + sol_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Solution sol;
  try {
    sol = read_solution(buf.str(), model);
  } catch (const SolverError& e) {
    return failed(SolveStatus::Error, e.what());
  }
  std::filesystem::remove(lp_path, ec);
  std::filesystem::remove(sol_path, ec);
  return sol;
}

Solution ExternalBackend::solve(const MilpModel& model) const {
  if (!workdir_.empty()) return solve_external(model, command_, workdir_);
  const auto dir = std::filesystem::temp_directory_path() /
                   ("isnr-solve-" + std::to_string(::getpid()));
  return solve_external(model, command_, dir);
}

}  // namespace isnr::milp
