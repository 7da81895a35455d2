#include "obstruction.hpp"

#include <algorithm>

namespace k3 {

std::vector<Slot> slot_grid(long m, long depth, Flavor flavor) {
  std::vector<Slot> grid;
  for (long g = 0; g <= m; ++g) {
    long base = (g * g) % (4 * m);
    for (long num = -base;; num -= 4 * m) {
      if (-num > 4 * m * depth) break;
      if (num == 0) {
        bool keep = (flavor == Flavor::Sing) || (flavor == Flavor::SingZeroBar && g == 0);
        if (!keep) continue;
      }
      grid.push_back({g, num});
    }
  }
  std::sort(grid.begin(), grid.end(), [m](const Slot& a, const Slot& b) {
    return slot_priority(a, m) < slot_priority(b, m);
  });
  return grid;
}

namespace {

// rows of principal-part coefficients over the given grid
std::vector<std::vector<Rat>> principal_rows(TargetWeight tw, long m, long P, const std::vector<Slot>& grid,
                                             JacobiEngine& eng) {
  int k = jacobi_weight_for(tw, P);
  long prec = jacobi_prec_for(m, P);
  std::vector<JacobiForm> weak = eng.weak_basis(k, m, prec);
  std::vector<JacobiForm> holo = holomorphic_subspace(weak);
  QExp delta_inv_p = delta_qexp(P + 4).inverse().pow(P);
  std::vector<std::vector<Rat>> rows(holo.size());
  eng.par.for_each(holo.size(), [&](std::size_t i) {
    VVForm vv = theta_decompose(holo[i]);
    std::map<long, QExp> tail;  // gamma -> h_gamma / Delta^P
    for (auto& [g, comp] : vv.comp) tail.emplace(g, comp * delta_inv_p);
    std::vector<Rat> row(grid.size(), Rat(0));
    for (std::size_t j = 0; j < grid.size(); ++j) {
      long g = grid[j].gamma;
      const QExp& f = tail.at(g);
      // conflated slots: classes with gamma != -gamma pair twice in the
      // residue sum over Z/2mZ
      long mult = (g == 0 || g == m) ? 1 : 2;
      row[j] = f.coeff(rat(grid[j].num, 4 * m)) * mult;
    }
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace

RelationSpace obstruction_space(TargetWeight tw, long m, long P, Flavor flavor, JacobiEngine& eng) {
  if (P < 1) throw math_error("obstruction_space: pole order must be >= 1");
  RelationSpace out;
  out.m = m;
  out.flavor = flavor;
  out.pole_order = P;
  out.grid = slot_grid(m, P, flavor);
  RatMatrix rows(0, out.grid.size());
  for (auto& r : principal_rows(tw, m, P, out.grid, eng)) rows.append_row(r);
  out.rel = echelon_reduce(rows).reduced;
  return out;
}

std::optional<std::size_t> FunctionalBasis::slot_index(long gamma, const Rat& n) const {
  if (gamma < 0 || gamma > m) return std::nullopt;
  Rat num = n * (4 * m);
  if (!is_integer(num)) return std::nullopt;
  Slot s{gamma, static_cast<long>(num.get_num().get_si())};
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] == s) return i;
  return std::nullopt;
}

std::vector<Rat> FunctionalBasis::express(long gamma, const Rat& n) const {
  auto idx = slot_index(gamma, n);
  if (!idx)
    throw math_error("functional (" + std::to_string(gamma) + ", " + rat_str(n) +
                     ") outside the dependency window; widen --window");
  return dep.row(*idx);
}

namespace {

struct PBasisState {
  std::vector<Slot> free_slots;
  RatMatrix window_dep;  // over window grid x free
  bool usable = false;
};

bool same_state(const PBasisState& a, const PBasisState& b) {
  return a.usable && b.usable && a.free_slots == b.free_slots && a.window_dep == b.window_dep;
}

}  // namespace

FunctionalBasis stabilized_functional_basis(TargetWeight tw, long m, Flavor flavor, long window,
                                            JacobiEngine& eng) {
  if (window < 1) throw math_error("stabilized_functional_basis: window must be >= 1");
  const long P_max = window + 6;
  std::vector<Slot> wgrid = slot_grid(m, window, flavor);
  auto wpos = [&](const Slot& s) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < wgrid.size(); ++i)
      if (wgrid[i] == s) return i;
    return std::nullopt;
  };

  PBasisState prev;
  int streak = 0;
  for (long P = std::max<long>(1, window); P <= P_max; ++P) {
    std::vector<Slot> pgrid = slot_grid(m, P, flavor);
    // reverse priority for the dependency echelon: deepest slots become pivots
    RatMatrix rows(0, pgrid.size());
    {
      std::vector<Slot> rev(pgrid.rbegin(), pgrid.rend());
      for (auto& r : principal_rows(tw, m, P, rev, eng)) rows.append_row(r);
    }
    EchelonResult ech = echelon_reduce(rows);
    std::vector<bool> is_pivot(pgrid.size(), false);
    for (auto p : ech.pivots) is_pivot[p] = true;

    // columns (reverse order): j-th column is slot pgrid[pgrid.size()-1-j]
    auto col_slot = [&](std::size_t j) { return pgrid[pgrid.size() - 1 - j]; };

    PBasisState cur;
    cur.usable = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < pgrid.size(); ++j)
      if (!is_pivot[j]) free_cols.push_back(j);
    // free functionals in ascending priority = reverse column order
    for (auto it = free_cols.rbegin(); it != free_cols.rend(); ++it) {
      Slot s = col_slot(*it);
      cur.free_slots.push_back(s);
      if (!wpos(s)) cur.usable = false;  // a free slot deeper than the window
    }
    if (cur.usable) {
      cur.window_dep = RatMatrix(wgrid.size(), cur.free_slots.size());
      std::vector<std::optional<std::size_t>> pivot_row(pgrid.size());
      for (std::size_t i = 0; i < ech.pivots.size(); ++i) pivot_row[ech.pivots[i]] = i;
      std::map<std::pair<long, long>, std::size_t> free_of;
      for (std::size_t f = 0; f < cur.free_slots.size(); ++f)
        free_of[{cur.free_slots[f].gamma, cur.free_slots[f].num}] = f;
      for (std::size_t wi = 0; wi < wgrid.size(); ++wi) {
        // locate the window slot's column in the P-grid reverse ordering
        std::size_t col = pgrid.size();
        for (std::size_t j = 0; j < pgrid.size(); ++j)
          if (col_slot(j) == wgrid[wi]) {
            col = j;
            break;
          }
        if (col == pgrid.size()) throw math_error("window slot missing from pole grid");
        if (!is_pivot[col]) {
          cur.window_dep.at(wi, free_of.at({wgrid[wi].gamma, wgrid[wi].num})) = 1;
          continue;
        }
        std::size_t ri = *pivot_row[col];
        for (std::size_t j = col + 1; j < pgrid.size(); ++j) {
          const Rat& v = ech.reduced.at(ri, j);
          if (v == 0) continue;
          Slot s = col_slot(j);
          auto f = free_of.find({s.gamma, s.num});
          if (f == free_of.end())
            throw math_error("dependency references a non-free slot");
          cur.window_dep.at(wi, f->second) = -v;
        }
      }
    }

    if (same_state(cur, prev))
      ++streak;
    else
      streak = cur.usable ? 1 : 0;
    prev = std::move(cur);

    if (streak >= 3 && P >= window) {
      FunctionalBasis out;
      out.m = m;
      out.tw = tw;
      out.flavor = flavor;
      out.window = window;
      out.stabilized_P = P;
      out.grid = wgrid;
      out.dep = prev.window_dep;
      for (auto& s : prev.free_slots) {
        auto i = wpos(s);
        out.free_idx.push_back(*i);
      }
      return out;
    }
  }
  throw math_error("functional basis did not stabilize within pole order budget (precision policy failure)");
}

}  // namespace k3
