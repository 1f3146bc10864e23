#include "isnr/milp.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "isnr/error.hpp"

namespace isnr::milp {

namespace {

std::atomic<std::uint64_t> next_model_id{1};

// Terms per LP line before wrapping; keeps lines well under the 510-char
// limit some readers impose.
constexpr std::size_t kTermsPerLine = 8;

}  // namespace

// ---------------------------------------------------------------------------
// LinExpr

LinExpr& LinExpr::add(VarRef v, double coef) {
  if (coef == 0.0) return *this;
  auto [it, inserted] = terms_.emplace(v, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

double LinExpr::evaluate(std::span<const double> values) const {
  double total = constant_;
  for (const auto& [v, c] : terms_) total += c * values[v.index()];
  return total;
}

LinExpr& LinExpr::operator+=(const LinExpr& rhs) {
  for (const auto& [v, c] : rhs.terms_) add(v, c);
  constant_ += rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& rhs) {
  for (const auto& [v, c] : rhs.terms_) add(v, -c);
  constant_ -= rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto& [_, c] : terms_) c *= s;
  constant_ *= s;
  return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double s, LinExpr e) { return e *= s; }
LinExpr operator*(LinExpr e, double s) { return e *= s; }

// ---------------------------------------------------------------------------
// MilpModel

MilpModel::MilpModel() : id_(next_model_id.fetch_add(1)) {}

VarRef MilpModel::add_variable(Variable v) {
  if (v.name.empty()) throw ModelError("variable name must not be empty");
  if (by_name_.contains(v.name)) throw ModelError("duplicate variable name '" + v.name + "'");
  const std::size_t index = variables_.size();
  by_name_.emplace(v.name, index);
  variables_.push_back(std::move(v));
  return VarRef(id_, index);
}

VarRef MilpModel::add_binary(std::string name) {
  return add_variable({std::move(name), VarKind::Binary, 0.0, 1.0});
}

VarRef MilpModel::add_continuous(std::string name, double lower, double upper) {
  if (lower > upper) throw ModelError("variable '" + name + "' has lower bound above upper bound");
  return add_variable({std::move(name), VarKind::Continuous, lower, upper});
}

void MilpModel::check_owned(const LinExpr& e, std::string_view where) const {
  for (const auto& [v, _] : e.terms()) {
    if (!owns(v))
      throw ModelError("foreign variable in " + std::string(where) + " (index " +
                       std::to_string(v.index()) + ")");
  }
}

std::size_t MilpModel::add_constraint(LinExpr expr, Sense sense, double rhs, std::string label) {
  const std::size_t index = constraints_.size();
  if (label.empty()) label = "c" + std::to_string(index);
  check_owned(expr, "constraint '" + label + "'");
  if (by_label_.contains(label)) throw ModelError("duplicate constraint label '" + label + "'");
  by_label_.emplace(label, index);
  constraints_.push_back({std::move(expr), sense, rhs, std::move(label)});
  return index;
}

void MilpModel::minimize(LinExpr objective) {
  check_owned(objective, "objective");
  objective_ = std::move(objective);
}

VarRef MilpModel::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) throw ModelError("unknown variable '" + std::string(name) + "'");
  return VarRef(id_, it->second);
}

std::size_t MilpModel::binary_count() const {
  std::size_t n = 0;
  for (const Variable& v : variables_) n += v.kind == VarKind::Binary;
  return n;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NoSolver: return "no-solver";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// Feasibility replay

std::vector<std::string> violations(const MilpModel& model, std::span<const double> values,
                                    double tol) {
  std::vector<std::string> out;
  if (values.size() != model.variables().size()) {
    out.push_back("value vector has " + std::to_string(values.size()) + " entries, model has " +
                  std::to_string(model.variables().size()) + " variables");
    return out;
  }
  const auto vars = model.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double x = values[i];
    if (!std::isfinite(x)) {
      out.push_back(vars[i].name + " is not finite");
      continue;
    }
    if (x < vars[i].lower - tol || x > vars[i].upper + tol)
      out.push_back(vars[i].name + " = " + format_number(x) + " outside its bounds");
    if (vars[i].kind == VarKind::Binary && std::abs(x - std::round(x)) > tol)
      out.push_back(vars[i].name + " = " + format_number(x) + " is not integral");
  }
  for (const Constraint& c : model.constraints()) {
    const double lhs = c.expr.evaluate(values);
    const bool ok = c.sense == Sense::LessEqual  ? lhs <= c.rhs + tol
                    : c.sense == Sense::Equal    ? std::abs(lhs - c.rhs) <= tol
                                                 : lhs >= c.rhs - tol;
    if (!ok)
      out.push_back(c.label + ": lhs " + format_number(lhs) + " violates rhs " +
                    format_number(c.rhs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP writer

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

void write_terms(std::ostringstream& out, const MilpModel& model, const LinExpr& expr) {
  if (expr.empty()) {
    out << "0 " << model.variables().front().name;
    return;
  }
  std::size_t count = 0;
  for (const auto& [v, c] : expr.terms()) {
    if (count > 0 && count % kTermsPerLine == 0) out << "\n   ";
    const bool negative = c < 0.0;
    const double magnitude = std::abs(c);
    if (count == 0) {
      if (negative) out << "- ";
    } else {
      out << (negative ? " - " : " + ");
    }
    if (magnitude != 1.0) out << format_number(magnitude) << ' ';
    out << model.variable(v).name;
    ++count;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "=";
}

}  // namespace

std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ ISNR MILP: " << model.variables().size() << " variables, "
      << model.constraints().size() << " constraints\n";
  if (model.variables().empty()) {
    out << "Minimize\n obj:\nSubject To\nBounds\nBinaries\nEnd\n";
    return out.str();
  }

  out << "Minimize\n obj: ";
  write_terms(out, model, model.objective());
  const double offset = model.objective().constant();
  if (offset != 0.0) out << (offset < 0 ? " - " : " + ") << format_number(std::abs(offset));
  out << "\n";

  out << "Subject To\n";
  for (const Constraint& c : model.constraints()) {
    out << ' ' << c.label << ": ";
    write_terms(out, model, c.expr);
    out << ' ' << sense_text(c.sense) << ' ' << format_number(c.rhs - c.expr.constant()) << "\n";
  }

  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::Binary) continue;
    const bool lo_inf = std::isinf(v.lower);
    const bool hi_inf = std::isinf(v.upper);
    out << ' ';
    if (lo_inf && hi_inf) {
      out << v.name << " free";
    } else if (!lo_inf && !hi_inf && v.lower == v.upper) {
      out << v.name << " = " << format_number(v.lower);
    } else if (hi_inf) {
      out << v.name << " >= " << format_number(v.lower);
    } else {
      out << format_number(v.lower) << " <= " << v.name << " <= " << format_number(v.upper);
    }
    out << "\n";
  }

  out << "Binaries\n";
  for (const Variable& v : model.variables())
    if (v.kind == VarKind::Binary) out << ' ' << v.name << "\n";
  out << "End\n";
  return out.str();
}

}  // namespace isnr::milp
