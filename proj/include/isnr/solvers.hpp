#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "isnr/milp.hpp"

namespace isnr::milp {

inline constexpr std::size_t kDefaultExhaustiveLimit = 32;

/// Provably optimal solve by depth-first enumeration of binary assignments,
/// pruned by bound propagation and the objective bound. Continuous variables
/// must be pinned by the constraints once every binary is fixed.
///
/// Throws ModelError when the model has more than `max_binaries` binaries or
/// a continuous variable is left undetermined at a leaf.
Solution solve_exhaustive(const MilpModel& model,
                          std::size_t max_binaries = kDefaultExhaustiveLimit);

/// Calls `visit` with the full value vector of every feasible assignment.
/// Returns the number of assignments visited. Same preconditions as
/// solve_exhaustive.
std::size_t for_each_feasible(const MilpModel& model, std::size_t max_binaries,
                              const std::function<void(std::span<const double>)>& visit);

/// Parses a `name value` solution file. Lines starting with '#' are comments,
/// except `# status: <optimal|infeasible|error>` which sets the status.
/// Unknown names are ignored; missing variables default to 0; binaries within
/// tolerance of an integer are snapped to it. An optimal claim is replayed
/// against the model and downgraded to Error when it violates anything.
Solution read_solution(std::string_view text, const MilpModel& model);

/// Writes `model` as LP text into `workdir`, runs `command_template` with
/// `{lp}` and `{sol}` replaced by the (quoted) file paths, and reads the
/// solution file back. A shell exit status of 127 maps to NoSolver.
Solution solve_external(const MilpModel& model, std::string_view command_template,
                        const std::filesystem::path& workdir);

/// Command template for the bundled HiGHS driver script.
std::string default_external_command();

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual Solution solve(const MilpModel& model) const = 0;
  virtual std::string name() const = 0;
};

class ExhaustiveBackend final : public SolverBackend {
 public:
  explicit ExhaustiveBackend(std::size_t max_binaries = kDefaultExhaustiveLimit)
      : max_binaries_(max_binaries) {}
  Solution solve(const MilpModel& model) const override {
    return solve_exhaustive(model, max_binaries_);
  }
  std::string name() const override { return "exhaustive"; }

 private:
  std::size_t max_binaries_;
};

class ExternalBackend final : public SolverBackend {
 public:
  /// An empty workdir means a fresh directory under the system temp path.
  explicit ExternalBackend(std::string command_template = default_external_command(),
                           std::filesystem::path workdir = {})
      : command_(std::move(command_template)), workdir_(std::move(workdir)) {}
  Solution solve(const MilpModel& model) const override;
  std::string name() const override { return "external"; }

 private:
  std::string command_;
  std::filesystem::path workdir_;
};

}  // namespace isnr::milp
