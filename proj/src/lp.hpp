#pragma once

#include "util.hpp"

namespace k3 {

enum class Rel { LE, EQ, GE };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPProblem {
  bool maximize = false;
  std::vector<Rat> objective;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rel> rel;
  std::vector<Rat> rhs;
  std::vector<std::optional<Rat>> lower, upper;  // per-variable bounds
  std::vector<bool> integral;                    // empty = fully continuous

  std::size_t nvars() const { return objective.size(); }
  void add_row(const std::vector<Rat>& a, Rel r, const Rat& b);
  void check_shapes() const;
};

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rat value;               // objective in the caller's sense
  std::vector<Rat> point;  // primal solution over the original variables
  // Certificates, expressed over the canonical equality rows (the problem
  // rows in order, then one row per finite upper bound):
  std::vector<Rat> dual;    // Optimal
  std::vector<Rat> farkas;  // Infeasible: y with y.A <= 0, y.b > 0
  std::vector<Rat> ray;     // Unbounded: improving feasible direction
  bool certified = false;

  // branch-and-bound bookkeeping
  long nodes_used = 0;
  Rat best_bound;  // valid lower bound for minimization even on budget stop
};

// Exact primal simplex (Bland's rule), two phases; verifies its certificate
// before returning.
LPResult lp_solve(const LPProblem& p);

// Exact certificate check, recomputing the canonical form from scratch.
bool lp_verify(const LPProblem& p, const LPResult& r);

struct ilp_budget_error : budget_error {
  Rat best_bound;
  bool has_incumbent = false;
  Rat incumbent_value;
  std::vector<Rat> incumbent_point;
  explicit ilp_budget_error(const std::string& w, Rat bound)
      : budget_error(w), best_bound(std::move(bound)) {}
};

// Branch and bound: most-fractional branching, best-bound node order.
// Throws ilp_budget_error when the node budget is exhausted.
LPResult ilp_minimize(const LPProblem& p, long node_budget = 200000);

// All integer feasible points (requires every variable integral); recursive
// variable-range bounding with exact LP bounds per level.
std::vector<std::vector<Rat>> ilp_enumerate(const LPProblem& p, std::size_t cap = 1000000);

}  // namespace k3
