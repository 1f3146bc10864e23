#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace isnr::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Feasibility and integrality tolerance shared by all backends.
inline constexpr double kTolerance = 1e-6;

enum class VarKind { Binary, Continuous };

/// Handle to a model variable. Carries the owning model's identity so
/// expressions built from another model are rejected.
class VarRef {
 public:
  VarRef() = default;

  std::size_t index() const { return index_; }
  std::uint64_t model_id() const { return model_id_; }

  friend auto operator<=>(const VarRef&, const VarRef&) = default;

 private:
  friend class MilpModel;
  VarRef(std::uint64_t model_id, std::size_t index) : model_id_(model_id), index_(index) {}

  std::uint64_t model_id_ = 0;
  std::size_t index_ = 0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

/// Sparse affine expression. Terms with a zero coefficient are dropped.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT: implicit by design of the algebra
  LinExpr(VarRef v) { add(v, 1.0); }                  // NOLINT

  LinExpr& add(VarRef v, double coef);
  LinExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::map<VarRef, double>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool empty() const { return terms_.empty(); }

  double evaluate(std::span<const double> values) const;

  LinExpr& operator+=(const LinExpr& rhs);
  LinExpr& operator-=(const LinExpr& rhs);
  LinExpr& operator*=(double s);

  friend bool operator==(const LinExpr&, const LinExpr&) = default;

 private:
  std::map<VarRef, double> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double s, LinExpr e);
LinExpr operator*(LinExpr e, double s);

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
  LinExpr expr;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string label;
};

class MilpModel {
 public:
  MilpModel();

  /// Throws ModelError when the name is already taken.
  VarRef add_binary(std::string name);
  VarRef add_continuous(std::string name, double lower, double upper);

  /// Appends `expr sense rhs`. Throws ModelError for foreign variables or a
  /// label already in use; an empty label becomes "c<index>".
  std::size_t add_constraint(LinExpr expr, Sense sense, double rhs, std::string label);

  /// Minimization objective.
  void minimize(LinExpr objective);

  std::span<const Variable> variables() const { return variables_; }
  std::span<const Constraint> constraints() const { return constraints_; }
  const LinExpr& objective() const { return objective_; }

  const Variable& variable(VarRef v) const { return variables_[v.index()]; }
  VarRef var(std::size_t index) const { return VarRef(id_, index); }
  /// Lookup by name; throws ModelError when absent.
  VarRef find(std::string_view name) const;
  bool has(std::string_view name) const { return by_name_.contains(std::string(name)); }
  std::size_t binary_count() const;

  bool owns(VarRef v) const { return v.model_id() == id_ && v.index() < variables_.size(); }

 private:
  void check_owned(const LinExpr& e, std::string_view where) const;
  VarRef add_variable(Variable v);

  std::uint64_t id_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<std::string, std::size_t> by_label_;
};

enum class SolveStatus { Optimal, Infeasible, NoSolver, Error };

std::string_view to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::Error;
  /// One value per model variable, in creation order.
  std::vector<double> values;
  double objective_value = 0.0;
  std::string message;

  double value(VarRef v) const { return values.at(v.index()); }
  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Constraint/bound/integrality violations of `values` beyond `tol`, as
/// human-readable lines naming the offending row or variable.
std::vector<std::string> violations(const MilpModel& model, std::span<const double> values,
                                    double tol = kTolerance);

/// CPLEX-style LP text: Minimize / Subject To / Bounds / Binaries / End.
/// Deterministic; coefficients printed with up to 12 significant digits.
std::string write_lp(const MilpModel& model);

/// Formats a number the way write_lp does.
std::string format_number(double value);

}  // namespace isnr::milp
