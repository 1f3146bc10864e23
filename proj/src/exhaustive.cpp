#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "isnr/error.hpp"
#include "isnr/solvers.hpp"

namespace isnr::milp {

namespace {

constexpr double kPropagationEps = 1e-9;

struct Row {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs = 0.0;  // constant folded
  bool upper = false;  // sum <= rhs applies
  bool lower = false;  // sum >= rhs applies
};

// Depth-first search over binaries with activity-bound propagation and a
// trail for undo. Rows touching a changed variable are re-propagated until
// fixpoint.
class Search {
 public:
  Search(const MilpModel& model, bool optimize) : model_(model), optimize_(optimize) {
    const auto vars = model.variables();
    lo_.resize(vars.size());
    hi_.resize(vars.size());
    binary_.resize(vars.size());
    rows_of_.resize(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      lo_[i] = vars[i].lower;
      hi_[i] = vars[i].upper;
      binary_[i] = vars[i].kind == VarKind::Binary;
      if (binary_[i]) binaries_.push_back(i);
    }
    for (const Constraint& c : model.constraints()) {
      Row r;
      r.rhs = c.rhs - c.expr.constant();
      r.upper = c.sense != Sense::GreaterEqual;
      r.lower = c.sense != Sense::LessEqual;
      for (const auto& [v, coef] : c.expr.terms()) {
        r.terms.emplace_back(v.index(), coef);
        rows_of_[v.index()].push_back(rows_.size());
      }
      rows_.push_back(std::move(r));
    }
    objective_coef_.assign(vars.size(), 0.0);
    for (const auto& [v, coef] : model.objective().terms()) {
      objective_.emplace_back(v.index(), coef);
      objective_coef_[v.index()] = coef;
    }
    queued_.assign(rows_.size(), false);
  }

  void run(const std::function<void(std::span<const double>)>& visit) {
    visit_ = &visit;
    std::vector<std::size_t> all(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) all[r] = r;
    if (!propagate(all)) return;
    dfs(0);
  }

  bool found() const { return best_.has_value(); }
  const std::vector<double>& best() const { return *best_; }
  double best_objective() const { return best_objective_; }
  std::size_t visited() const { return visited_; }

 private:
  struct TrailEntry {
    std::size_t var;
    double lo;
    double hi;
  };

  void dfs(std::size_t cursor) {
    while (cursor < binaries_.size() && lo_[binaries_[cursor]] == hi_[binaries_[cursor]]) ++cursor;
    if (optimize_ && best_ && objective_lower_bound() >= best_objective_ - kPropagationEps) return;
    if (cursor == binaries_.size()) {
      leaf();
      return;
    }
    const std::size_t var = binaries_[cursor];
    const double first = objective_coef_[var] < 0.0 ? 1.0 : 0.0;
    for (double value : {first, 1.0 - first}) {
      const std::size_t mark = trail_.size();
      set_bounds(var, value, value);
      if (propagate(rows_of_[var])) dfs(cursor + 1);
      undo(mark);
    }
  }

  void leaf() {
    const auto vars = model_.variables();
    std::vector<double> values(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (hi_[i] - lo_[i] > 1e-7 * std::max(1.0, std::abs(lo_[i]))) {
        throw ModelError("continuous variable '" + vars[i].name +
                         "' is not determined by the binaries; exhaustive solve needs every "
                         "continuous variable pinned by the constraints");
      }
      values[i] = binary_[i] ? lo_[i] : 0.5 * (lo_[i] + hi_[i]);
    }
    if (!violations(model_, values).empty()) return;
    ++visited_;
    if (!optimize_) {
      (*visit_)(values);
      return;
    }
    const double obj = model_.objective().evaluate(values);
    if (!best_ || obj < best_objective_ - kPropagationEps) {
      best_ = std::move(values);
      best_objective_ = obj;
    }
  }

  double objective_lower_bound() const {
    double lb = model_.objective().constant();
    for (const auto& [v, c] : objective_) lb += c > 0 ? c * lo_[v] : c * hi_[v];
    return std::isnan(lb) ? -std::numeric_limits<double>::infinity() : lb;
  }

  void set_bounds(std::size_t var, double lo, double hi) {
    trail_.push_back({var, lo_[var], hi_[var]});
    lo_[var] = lo;
    hi_[var] = hi;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry& e = trail_.back();
      lo_[e.var] = e.lo;
      hi_[e.var] = e.hi;
      trail_.pop_back();
    }
  }

  // Tightens `var` to [lo, hi] ∩ current domain. Returns false when empty.
  bool tighten(std::size_t var, double lo, double hi, std::vector<std::size_t>& queue) {
    double new_lo = lo_[var];
    double new_hi = hi_[var];
    if (binary_[var]) {
      if (hi < 1.0 - kTolerance) new_hi = std::min(new_hi, 0.0);
      if (lo > kTolerance) new_lo = std::max(new_lo, 1.0);
      if (hi < -kTolerance || lo > 1.0 + kTolerance) return false;
    } else {
      auto slack = [](double b) {
        return std::isinf(b) ? 0.0 : kPropagationEps * std::max(1.0, std::abs(b));
      };
      if (lo > new_lo + slack(new_lo)) new_lo = lo;
      if (hi < new_hi - slack(new_hi)) new_hi = hi;
      if (new_lo > new_hi) {
        if (new_lo - new_hi > kTolerance) return false;
        const double mid = 0.5 * (new_lo + new_hi);
        new_lo = new_hi = mid;
      }
    }
    if (new_lo > new_hi) return false;
    if (new_lo == lo_[var] && new_hi == hi_[var]) return true;
    set_bounds(var, new_lo, new_hi);
    for (std::size_t r : rows_of_[var]) {
      if (!queued_[r]) {
        queued_[r] = true;
        queue.push_back(r);
      }
    }
    return true;
  }

  bool propagate(const std::vector<std::size_t>& seeds) {
    std::vector<std::size_t> queue;
    for (std::size_t r : seeds) {
      if (!queued_[r]) {
        queued_[r] = true;
        queue.push_back(r);
      }
    }
    bool ok = true;
    // Continuous chains here are acyclic; the cap only guards against
    // pathological user models that creep bounds forever.
    std::size_t budget = 64 * (rows_.size() + 1);
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::size_t r = queue[head++];
      queued_[r] = false;
      if (!ok) continue;
      if (budget-- == 0) continue;
      ok = propagate_row(rows_[r], queue);
    }
    for (std::size_t r : queue) queued_[r] = false;
    return ok;
  }

  bool propagate_row(const Row& row, std::vector<std::size_t>& queue) {
    double min_finite = 0.0, max_finite = 0.0;
    int min_inf = 0, max_inf = 0;
    auto contrib = [&](std::size_t v, double c, bool want_min) {
      const double bound = (c > 0) == want_min ? lo_[v] : hi_[v];
      return c * bound;
    };
    for (const auto& [v, c] : row.terms) {
      const double mn = contrib(v, c, true);
      const double mx = contrib(v, c, false);
      if (std::isinf(mn)) ++min_inf; else min_finite += mn;
      if (std::isinf(mx)) ++max_inf; else max_finite += mx;
    }
    const double tol = kTolerance;
    if (row.upper && min_inf == 0 && min_finite > row.rhs + tol) return false;
    if (row.lower && max_inf == 0 && max_finite < row.rhs - tol) return false;

    for (const auto& [v, c] : row.terms) {
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      if (row.upper) {
        const double mn = contrib(v, c, true);
        const bool self_inf = std::isinf(mn);
        if (min_inf - (self_inf ? 1 : 0) == 0) {
          const double rest = min_finite - (self_inf ? 0.0 : mn);
          const double limit = (row.rhs - rest) / c;
          if (c > 0) hi = std::min(hi, limit); else lo = std::max(lo, limit);
        }
      }
      if (row.lower) {
        const double mx = contrib(v, c, false);
        const bool self_inf = std::isinf(mx);
        if (max_inf - (self_inf ? 1 : 0) == 0) {
          const double rest = max_finite - (self_inf ? 0.0 : mx);
          const double limit = (row.rhs - rest) / c;
          if (c > 0) lo = std::max(lo, limit); else hi = std::min(hi, limit);
        }
      }
      if (!tighten(v, lo, hi, queue)) return false;
    }
    return true;
  }

  const MilpModel& model_;
  bool optimize_;
  std::vector<double> lo_, hi_;
  std::vector<bool> binary_;
  std::vector<std::size_t> binaries_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::size_t>> rows_of_;
  std::vector<std::pair<std::size_t, double>> objective_;
  std::vector<double> objective_coef_;
  std::vector<bool> queued_;
  std::vector<TrailEntry> trail_;
  const std::function<void(std::span<const double>)>* visit_ = nullptr;
  std::optional<std::vector<double>> best_;
  double best_objective_ = std::numeric_limits<double>::infinity();
  std::size_t visited_ = 0;
};

void check_limit(const MilpModel& model, std::size_t max_binaries) {
  const std::size_t n = model.binary_count();
  if (n > max_binaries)
    throw ModelError("binary count " + std::to_string(n) + " exceeds exhaustive limit " +
                     std::to_string(max_binaries));
}

}  // namespace

Solution solve_exhaustive(const MilpModel& model, std::size_t max_binaries) {
  check_limit(model, max_binaries);
  Search search(model, /*optimize=*/true);
  search.run([](std::span<const double>) {});
  Solution sol;
  if (!search.found()) {
    sol.status = SolveStatus::Infeasible;
    sol.message = "no feasible binary assignment";
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  sol.values = search.best();
  sol.objective_value = search.best_objective();
  return sol;
}

std::size_t for_each_feasible(const MilpModel& model, std::size_t max_binaries,
                              const std::function<void(std::span<const double>)>& visit) {
  check_limit(model, max_binaries);
  Search search(model, /*optimize=*/false);
  search.run(visit);
  return search.visited();
}

}  // namespace isnr::milp
