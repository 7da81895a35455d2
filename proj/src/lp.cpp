#include "lp.hpp"

#include <algorithm>
#include <queue>

namespace k3 {

void LPProblem::add_row(const std::vector<Rat>& a, Rel r, const Rat& b) {
  if (a.size() != nvars()) throw math_error("LPProblem: row width mismatch");
  rows.push_back(a);
  rel.push_back(r);
  rhs.push_back(b);
}

void LPProblem::check_shapes() const {
  if (rows.size() != rel.size() || rows.size() != rhs.size())
    throw math_error("LPProblem: inconsistent row data");
  for (auto& r : rows)
    if (r.size() != nvars()) throw math_error("LPProblem: row width mismatch");
  if (!lower.empty() && lower.size() != nvars()) throw math_error("LPProblem: bad lower bounds");
  if (!upper.empty() && upper.size() != nvars()) throw math_error("LPProblem: bad upper bounds");
  if (!integral.empty() && integral.size() != nvars()) throw math_error("LPProblem: bad integrality mask");
}

namespace {

// min c.x, A x = b, x >= 0, with the mapping back to the caller's variables
struct Canonical {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b, c;
  struct VarMap {
    std::size_t plus = 0;
    std::size_t minus = SIZE_MAX;  // set for free variables (x = plus - minus)
    Rat shift;                     // x = shift + x'
  };
  std::vector<VarMap> vars;
  Rat obj_const;
  bool flipped = false;  // caller maximizes
};

Canonical canonicalize(const LPProblem& p) {
  p.check_shapes();
  Canonical cn;
  cn.flipped = p.maximize;
  std::size_t nv = p.nvars();
  cn.vars.resize(nv);
  std::size_t col = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    bool has_lo = !p.lower.empty() && p.lower[j].has_value();
    cn.vars[j].shift = has_lo ? *p.lower[j] : Rat(0);
    cn.vars[j].plus = col++;
    if (!has_lo) cn.vars[j].minus = col++;
  }
  std::size_t nrows = p.rows.size();
  std::vector<std::pair<std::size_t, Rat>> ub_rows;  // (var, bound)
  if (!p.upper.empty())
    for (std::size_t j = 0; j < nv; ++j)
      if (p.upper[j]) ub_rows.emplace_back(j, *p.upper[j]);
  std::size_t m = nrows + ub_rows.size();
  // slack columns for LE/GE rows and the upper-bound rows
  std::vector<long> slack_sign(m, 0);
  for (std::size_t i = 0; i < nrows; ++i)
    slack_sign[i] = p.rel[i] == Rel::LE ? 1 : (p.rel[i] == Rel::GE ? -1 : 0);
  for (std::size_t i = nrows; i < m; ++i) slack_sign[i] = 1;
  std::size_t nslack = 0;
  for (auto s : slack_sign)
    if (s != 0) ++nslack;
  cn.m = m;
  cn.n = col + nslack;
  cn.A.assign(m, std::vector<Rat>(cn.n, Rat(0)));
  cn.b.assign(m, Rat(0));
  cn.c.assign(cn.n, Rat(0));
  for (std::size_t j = 0; j < nv; ++j) {
    Rat cj = p.objective[j] * (cn.flipped ? -1 : 1);
    cn.c[cn.vars[j].plus] = cj;
    if (cn.vars[j].minus != SIZE_MAX) cn.c[cn.vars[j].minus] = -cj;
    cn.obj_const += cj * cn.vars[j].shift;
  }
  auto fill_row = [&](std::size_t i, const std::vector<Rat>& a, const Rat& rhs) {
    Rat adj = rhs;
    for (std::size_t j = 0; j < nv; ++j) {
      if (a[j] == 0) continue;
      cn.A[i][cn.vars[j].plus] = a[j];
      if (cn.vars[j].minus != SIZE_MAX) cn.A[i][cn.vars[j].minus] = -a[j];
      adj -= a[j] * cn.vars[j].shift;
    }
    cn.b[i] = adj;
  };
  for (std::size_t i = 0; i < nrows; ++i) fill_row(i, p.rows[i], p.rhs[i]);
  for (std::size_t k = 0; k < ub_rows.size(); ++k) {
    std::vector<Rat> a(nv, Rat(0));
    a[ub_rows[k].first] = 1;
    fill_row(nrows + k, a, ub_rows[k].second);
  }
  std::size_t scol = col;
  for (std::size_t i = 0; i < m; ++i)
    if (slack_sign[i] != 0) cn.A[i][scol++] = slack_sign[i];
  return cn;
}

// Dense two-phase simplex on the canonical data.  The artificial columns are
// kept around: their tableau block is B^{-1}, which yields the duals.
struct Simplex {
  std::size_t m, n;                  // canonical sizes
  std::vector<std::vector<Rat>> T;   // m rows x (n + m) columns
  std::vector<Rat> rhs;
  std::vector<std::size_t> basis;    // column index per row
  const Canonical& cn;

  explicit Simplex(const Canonical& c) : m(c.m), n(c.n), cn(c) {
    T.assign(m, std::vector<Rat>(n + m, Rat(0)));
    rhs = c.b;
    basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) T[i][j] = c.A[i][j];
      if (rhs[i] < 0) {
        for (auto& v : T[i]) v = -v;
        rhs[i] = -rhs[i];
      }
      T[i][n + i] = 1;
      basis[i] = n + i;
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rat inv = 1 / T[row][col];
    for (auto& v : T[row]) v *= inv;
    rhs[row] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      Rat f = T[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n + m; ++j)
        if (T[row][j] != 0) T[i][j] -= f * T[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }

  // reduced costs for cost vector cost (size n + m)
  std::vector<Rat> reduced_costs(const std::vector<Rat>& cost) const {
    std::vector<Rat> y(m, Rat(0));  // y = c_B B^{-1} read off the artificial block
    for (std::size_t i = 0; i < m; ++i) {
      const Rat& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (std::size_t k = 0; k < m; ++k) y[k] += cb * T[i][n + k];
    }
    std::vector<Rat> rc(n + m);
    for (std::size_t j = 0; j < n + m; ++j) {
      Rat s = cost[j];
      for (std::size_t k = 0; k < m; ++k) {
        Rat a = cn_col(j, k);
        if (a != 0) s -= y[k] * a;
      }
      rc[j] = s;
    }
    return rc;
  }

  // original (pre-pivot) column entry: canonical A for j < n, identity after
  Rat cn_col(std::size_t j, std::size_t i) const {
    if (j < n) {
      Rat v = cn.A[i][j];
      return b_negated[i] ? -v : v;
    }
    return j - n == i ? Rat(1) : Rat(0);
  }

  std::vector<bool> b_negated;

  // Bland: entering = lowest-index negative reduced cost among allowed cols.
  // Returns false when optimal.  Throws on unbounded when detect_ray set,
  // filling ray.
  enum class Step { Optimal, Pivoted, Unbounded };
  Step step(const std::vector<Rat>& cost, std::size_t allowed, std::vector<Rat>* ray_col) {
    std::vector<Rat> rc = reduced_costs(cost);
    std::size_t enter = SIZE_MAX;
    for (std::size_t j = 0; j < allowed; ++j)
      if (rc[j] < 0) {
        enter = j;
        break;
      }
    if (enter == SIZE_MAX) return Step::Optimal;
    std::size_t leave = SIZE_MAX;
    Rat best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rat ratio = rhs[i] / T[i][enter];
      if (leave == SIZE_MAX || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == SIZE_MAX) {
      if (ray_col) {
        ray_col->assign(n + m, Rat(0));
        (*ray_col)[enter] = 1;
        for (std::size_t i = 0; i < m; ++i)
          if (basis[i] < n + m) (*ray_col)[basis[i]] = -T[i][enter];
      }
      return Step::Unbounded;
    }
    pivot(leave, enter);
    return Step::Pivoted;
  }

  std::vector<Rat> duals(const std::vector<Rat>& cost) const {
    std::vector<Rat> y(m, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
      const Rat& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (std::size_t k = 0; k < m; ++k) y[k] += cb * T[i][n + k];
    }
    // undo the row negations applied for b >= 0
    for (std::size_t k = 0; k < m; ++k)
      if (b_negated[k]) y[k] = -y[k];
    return y;
  }
};

std::vector<Rat> point_from_tableau(const Canonical& cn, const Simplex& sx, std::size_t nv_orig,
                                    const LPProblem& p) {
  std::vector<Rat> xc(cn.n, Rat(0));
  for (std::size_t i = 0; i < sx.m; ++i)
    if (sx.basis[i] < cn.n) xc[sx.basis[i]] = sx.rhs[i];
  std::vector<Rat> x(nv_orig);
  for (std::size_t j = 0; j < nv_orig; ++j) {
    Rat v = xc[cn.vars[j].plus];
    if (cn.vars[j].minus != SIZE_MAX) v -= xc[cn.vars[j].minus];
    x[j] = v + cn.vars[j].shift;
  }
  (void)p;
  return x;
}

bool primal_feasible(const LPProblem& p, const std::vector<Rat>& x) {
  if (x.size() != p.nvars()) return false;
  for (std::size_t j = 0; j < p.nvars(); ++j) {
    if (!p.lower.empty() && p.lower[j] && x[j] < *p.lower[j]) return false;
    if (!p.upper.empty() && p.upper[j] && x[j] > *p.upper[j]) return false;
  }
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    Rat lhs = 0;
    for (std::size_t j = 0; j < p.nvars(); ++j) lhs += p.rows[i][j] * x[j];
    if (p.rel[i] == Rel::LE && lhs > p.rhs[i]) return false;
    if (p.rel[i] == Rel::GE && lhs < p.rhs[i]) return false;
    if (p.rel[i] == Rel::EQ && lhs != p.rhs[i]) return false;
  }
  return true;
}

Rat objective_value(const LPProblem& p, const std::vector<Rat>& x) {
  Rat v = 0;
  for (std::size_t j = 0; j < p.nvars(); ++j) v += p.objective[j] * x[j];
  return v;
}

}  // namespace

LPResult lp_solve(const LPProblem& p) {
  Canonical cn = canonicalize(p);
  Simplex sx(cn);
  sx.b_negated.assign(cn.m, false);
  for (std::size_t i = 0; i < cn.m; ++i) sx.b_negated[i] = (cn.b[i] < 0);

  // phase 1: minimize the artificial sum
  std::vector<Rat> cost1(cn.n + cn.m, Rat(0));
  for (std::size_t k = 0; k < cn.m; ++k) cost1[cn.n + k] = 1;
  for (;;) {
    auto s = sx.step(cost1, cn.n, nullptr);
    if (s == Simplex::Step::Optimal) break;
    if (s == Simplex::Step::Unbounded) throw math_error("simplex: phase 1 unbounded");
  }
  Rat phase1 = 0;
  for (std::size_t i = 0; i < cn.m; ++i)
    if (sx.basis[i] >= cn.n) phase1 += sx.rhs[i];
  LPResult res;
  if (phase1 > 0) {
    res.status = LPStatus::Infeasible;
    std::vector<Rat> y = sx.duals(cost1);
    res.farkas = y;
    if (!lp_verify(p, res)) throw math_error("simplex: Farkas certificate failed verification");
    res.certified = true;
    return res;
  }
  // drive any zero-valued artificials out of the basis where possible
  for (std::size_t i = 0; i < cn.m; ++i) {
    if (sx.basis[i] < cn.n) continue;
    std::size_t enter = SIZE_MAX;
    for (std::size_t j = 0; j < cn.n; ++j)
      if (sx.T[i][j] != 0) {
        enter = j;
        break;
      }
    if (enter != SIZE_MAX) sx.pivot(i, enter);
    // otherwise the row is redundant; the artificial stays basic at zero
  }

  // phase 2
  std::vector<Rat> cost2(cn.n + cn.m, Rat(0));
  for (std::size_t j = 0; j < cn.n; ++j) cost2[j] = cn.c[j];
  for (std::size_t k = 0; k < cn.m; ++k) cost2[cn.n + k] = 0;
  for (;;) {
    std::vector<Rat> ray_col;
    auto s = sx.step(cost2, cn.n, &ray_col);
    if (s == Simplex::Step::Optimal) break;
    if (s == Simplex::Step::Unbounded) {
      res.status = LPStatus::Unbounded;
      // map the canonical ray back to the original variables
      std::vector<Rat> ray(p.nvars(), Rat(0));
      for (std::size_t j = 0; j < p.nvars(); ++j) {
        Rat v = ray_col[cn.vars[j].plus];
        if (cn.vars[j].minus != SIZE_MAX) v -= ray_col[cn.vars[j].minus];
        ray[j] = v;
      }
      res.ray = ray;
      if (!lp_verify(p, res)) throw math_error("simplex: ray certificate failed verification");
      res.certified = true;
      return res;
    }
  }
  res.status = LPStatus::Optimal;
  res.point = point_from_tableau(cn, sx, p.nvars(), p);
  res.value = objective_value(p, res.point);
  res.dual = sx.duals(cost2);
  if (!lp_verify(p, res)) throw math_error("simplex: optimality certificate failed verification");
  res.certified = true;
  return res;
}

bool lp_verify(const LPProblem& p, const LPResult& r) {
  Canonical cn = canonicalize(p);
  if (r.status == LPStatus::Infeasible) {
    if (r.farkas.size() != cn.m) return false;
    // y.A <= 0 componentwise over canonical columns, y.b > 0
    for (std::size_t j = 0; j < cn.n; ++j) {
      Rat s = 0;
      for (std::size_t i = 0; i < cn.m; ++i) s += r.farkas[i] * cn.A[i][j];
      if (s > 0) return false;
    }
    Rat yb = 0;
    for (std::size_t i = 0; i < cn.m; ++i) yb += r.farkas[i] * cn.b[i];
    return yb > 0;
  }
  if (r.status == LPStatus::Unbounded) {
    if (r.ray.size() != p.nvars()) return false;
    // direction respects bounds, preserves all row constraints, improves
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      Rat s = 0;
      for (std::size_t j = 0; j < p.nvars(); ++j) s += p.rows[i][j] * r.ray[j];
      if (p.rel[i] == Rel::EQ && s != 0) return false;
      if (p.rel[i] == Rel::LE && s > 0) return false;
      if (p.rel[i] == Rel::GE && s < 0) return false;
    }
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      if (!p.lower.empty() && p.lower[j] && r.ray[j] < 0) return false;
      if (!p.upper.empty() && p.upper[j] && r.ray[j] > 0) return false;
    }
    Rat dir = 0;
    for (std::size_t j = 0; j < p.nvars(); ++j) dir += p.objective[j] * r.ray[j];
    return p.maximize ? dir > 0 : dir < 0;
  }
  // Optimal: primal feasibility + weak-duality tightness in canonical form
  if (!primal_feasible(p, r.point)) return false;
  if (objective_value(p, r.point) != r.value) return false;
  if (r.dual.size() != cn.m) return false;
  for (std::size_t j = 0; j < cn.n; ++j) {
    Rat s = cn.c[j];
    for (std::size_t i = 0; i < cn.m; ++i) s -= r.dual[i] * cn.A[i][j];
    if (s < 0) return false;  // dual feasibility: y.A <= c
  }
  Rat yb = cn.obj_const;
  for (std::size_t i = 0; i < cn.m; ++i) yb += r.dual[i] * cn.b[i];
  Rat canon_value = r.value * (cn.flipped ? -1 : 1);
  return yb == canon_value;
}

namespace {

struct Node {
  Rat bound;
  long id;
  std::vector<std::optional<Rat>> lower, upper;
  bool operator<(const Node& o) const {
    if (bound != o.bound) return bound > o.bound;  // min-heap by bound
    return id > o.id;
  }
};

}  // namespace

LPResult ilp_minimize(const LPProblem& p0, long node_budget) {
  LPProblem p = p0;
  if (p.maximize) throw math_error("ilp_minimize: pass a minimization problem");
  if (p.integral.empty()) return lp_solve(p);
  if (p.lower.empty()) p.lower.assign(p.nvars(), std::nullopt);
  if (p.upper.empty()) p.upper.assign(p.nvars(), std::nullopt);

  std::priority_queue<Node> open;
  long next_id = 0;
  auto push_node = [&](const std::vector<std::optional<Rat>>& lo,
                       const std::vector<std::optional<Rat>>& hi, const Rat& bound) {
    open.push(Node{bound, next_id++, lo, hi});
  };

  LPProblem root = p;
  LPResult rootr = lp_solve(root);
  if (rootr.status == LPStatus::Infeasible) return rootr;
  if (rootr.status == LPStatus::Unbounded)
    throw math_error("ilp_minimize: relaxation unbounded along the objective");
  push_node(p.lower, p.upper, rootr.value);

  bool have_inc = false;
  LPResult incumbent;
  long nodes = 0;
  Rat global_lb = rootr.value;

  while (!open.empty()) {
    Node nd = open.top();
    global_lb = nd.bound;
    if (have_inc && nd.bound >= incumbent.value) break;  // best-first: done
    open.pop();
    if (++nodes > node_budget) {
      Rat bound = nd.bound;
      ilp_budget_error err("ilp_minimize: node budget exhausted", bound);
      if (have_inc) {
        err.has_incumbent = true;
        err.incumbent_value = incumbent.value;
        err.incumbent_point = incumbent.point;
      }
      throw err;
    }
    LPProblem sub = p;
    sub.lower = nd.lower;
    sub.upper = nd.upper;
    LPResult r = lp_solve(sub);
    if (r.status == LPStatus::Infeasible) continue;
    if (r.status == LPStatus::Unbounded)
      throw math_error("ilp_minimize: node relaxation unbounded");
    if (have_inc && r.value >= incumbent.value) continue;
    // most fractional integral variable
    std::size_t branch = SIZE_MAX;
    Rat best_frac;
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      if (!p.integral[j]) continue;
      Rat f = r.point[j] - Rat(floor_int(r.point[j]));
      if (f == 0) continue;
      Rat dist = abs(f - rat(1, 2));
      if (branch == SIZE_MAX || dist < best_frac) {
        branch = j;
        best_frac = dist;
      }
    }
    if (branch == SIZE_MAX) {
      incumbent = r;
      incumbent.nodes_used = nodes;
      have_inc = true;
      continue;
    }
    Rat fl = Rat(floor_int(r.point[branch]));
    auto lo = nd.lower, hi = nd.upper;
    auto hi2 = hi;
    hi2[branch] = fl;
    push_node(lo, hi2, r.value);
    auto lo2 = lo;
    lo2[branch] = fl + 1;
    push_node(lo2, hi, r.value);
  }
  if (!have_inc) {
    LPResult r;
    r.status = LPStatus::Infeasible;
    r.nodes_used = nodes;
    return r;
  }
  incumbent.nodes_used = nodes;
  incumbent.best_bound = incumbent.value;
  return incumbent;
}

namespace {

void enumerate_rec(const LPProblem& p, std::size_t depth, std::vector<std::optional<Rat>>& lo,
                   std::vector<std::optional<Rat>>& hi, std::vector<std::vector<Rat>>& out,
                   std::size_t cap) {
  if (depth == p.nvars()) {
    std::vector<Rat> x(p.nvars());
    for (std::size_t j = 0; j < p.nvars(); ++j) x[j] = *lo[j];
    out.push_back(std::move(x));
    if (out.size() > cap) throw budget_error("ilp_enumerate: cap exceeded");
    return;
  }
  LPProblem sub = p;
  sub.lower = lo;
  sub.upper = hi;
  sub.integral.clear();
  sub.objective.assign(p.nvars(), Rat(0));
  sub.objective[depth] = 1;
  sub.maximize = false;
  LPResult mn = lp_solve(sub);
  if (mn.status == LPStatus::Infeasible) return;
  if (mn.status == LPStatus::Unbounded) throw math_error("ilp_enumerate: polytope unbounded");
  sub.maximize = true;
  LPResult mx = lp_solve(sub);
  if (mx.status == LPStatus::Unbounded) throw math_error("ilp_enumerate: polytope unbounded");
  Int a = ceil_int(mn.value), b = floor_int(mx.value);
  for (Int v = a; v <= b; ++v) {
    lo[depth] = Rat(v);
    hi[depth] = Rat(v);
    enumerate_rec(p, depth + 1, lo, hi, out, cap);
  }
  lo[depth] = std::nullopt;
  hi[depth] = std::nullopt;
  if (!p.lower.empty()) lo[depth] = p.lower[depth];
  if (!p.upper.empty()) hi[depth] = p.upper[depth];
}

}  // namespace

std::vector<std::vector<Rat>> ilp_enumerate(const LPProblem& p, std::size_t cap) {
  p.check_shapes();
  if (p.integral.empty() || !std::all_of(p.integral.begin(), p.integral.end(), [](bool b) { return b; }))
    throw math_error("ilp_enumerate: every variable must be integral");
  std::vector<std::optional<Rat>> lo(p.nvars()), hi(p.nvars());
  if (!p.lower.empty()) lo = p.lower;
  if (!p.upper.empty()) hi = p.upper;
  std::vector<std::vector<Rat>> out;
  enumerate_rec(p, 0, lo, hi, out, cap);
  return out;
}

}  // namespace k3
