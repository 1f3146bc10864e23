#pragma once

#include <stdexcept>
#include <string>

namespace isnr {

/// Malformed or inconsistent input data (case files, schedules, plans).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Misuse of the modeling layer: duplicate names, foreign variables,
/// models outside what a solver backend accepts.
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A solver ran but its result could not be trusted or interpreted.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isnr
