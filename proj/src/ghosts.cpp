#include "ghosts.hpp"

#include <algorithm>

namespace k3 {

std::size_t GhostSpace::slot_index(long gamma, long key) const {
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (slots[i].gamma == gamma && slots[i].key == key) return i;
  throw math_error("GhostSpace: coefficient slot outside the window");
}

std::vector<Rat> GhostSpace::coeff_row(long gamma, long key) const {
  return slot_rows[slot_index(gamma, key)];
}

GhostSpace ghost_space(long m, long window, JacobiEngine& eng) {
  GhostSpace gs;
  gs.m = m;
  gs.window = window;
  gs.fb = stabilized_functional_basis(TargetWeight::W17_2, m, Flavor::SingZeroBar, window, eng);
  std::size_t k = gs.fb.dim();

  // window slots on the holomorphic side: (gamma, x) with x = key/4m >= 0;
  // the functional grid index is (gamma, -x)
  for (auto& s : gs.fb.grid) gs.slots.push_back({s.gamma, -s.num});
  std::sort(gs.slots.begin(), gs.slots.end(), [](const GhostSpace::CSlot& a, const GhostSpace::CSlot& b) {
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    return a.key < b.key;
  });

  // integral lattice: dependency rows, halved at the even-constrained slots
  std::size_t S = gs.slots.size();
  std::vector<std::vector<Rat>> scaled(S, std::vector<Rat>(k));
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<Rat> row = gs.fb.express(gs.slots[s].gamma, -rat(gs.slots[s].key, 4 * m));
    bool torsion = (gs.slots[s].gamma == 0 || gs.slots[s].gamma == m);
    Rat f = (torsion && gs.slots[s].key > 0) ? rat(1, 2) : rat(1);
    for (std::size_t j = 0; j < k; ++j) scaled[s][j] = row[j] * f;
  }
  // common denominator q and integer matrix N
  Int q = 1;
  for (auto& row : scaled)
    for (auto& v : row) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), v.get_den_mpz_t());
  IntMatrix N(S, std::vector<Int>(k));
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t j = 0; j < k; ++j) N[s][j] = Int(scaled[s][j] * q);
  SnfResult snf = smith_normal_form(N);
  if (snf.diag.size() < k) throw math_error("ghost_space: dependency matrix lost rank (internal)");
  for (std::size_t j = 0; j < k; ++j)
    if (snf.diag[j] == 0) throw math_error("ghost_space: dependency matrix not of full column rank");
  // lattice basis: b_j = (q/d_j) * V e_j in free coordinates
  gs.zdim = k;
  gs.basis_coords.assign(k, std::vector<Rat>(k, Rat(0)));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i)
      gs.basis_coords[j][i] = Rat(snf.v[i][j]) * q / Rat(snf.diag[j]);

  // slot rows over z: Psi(slot) = dep_row . (sum_j z_j b_j)
  gs.slot_rows.assign(S, std::vector<Rat>(k, Rat(0)));
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<Rat> dep = gs.fb.express(gs.slots[s].gamma, -rat(gs.slots[s].key, 4 * m));
    for (std::size_t j = 0; j < k; ++j) {
      Rat v = 0;
      for (std::size_t i = 0; i < k; ++i) v += dep[i] * gs.basis_coords[j][i];
      gs.slot_rows[s][j] = v;
    }
  }
  return gs;
}

LPProblem ghost_constraints(const GhostSpace& gs) {
  LPProblem p;
  p.objective.assign(gs.zdim, Rat(0));
  p.integral.assign(gs.zdim, true);
  for (std::size_t s = 0; s < gs.slots.size(); ++s) {
    bool is_norm = (gs.slots[s].gamma == 0 && gs.slots[s].key == 0);
    p.add_row(gs.slot_rows[s], is_norm ? Rel::EQ : Rel::GE, is_norm ? rat(1) : rat(0));
  }
  return p;
}

GhostCount ghost_count(long m, JacobiEngine& eng, long window0, std::size_t cap, int max_escalations) {
  GhostCount out;
  std::optional<long> prev;
  long w = window0;
  for (int esc = 0; esc <= max_escalations; ++esc, ++w) {
    GhostSpace gs = ghost_space(m, w, eng);
    LPProblem p = ghost_constraints(gs);
    long count;
    try {
      count = static_cast<long>(ilp_enumerate(p, cap).size());
    } catch (const math_error&) {
      // unbounded polytope: the window is too small, escalate
      prev.reset();
      continue;
    }
    if (prev && *prev == count) {
      out.count = count;
      out.window_used = w;
      out.stabilized = true;
      return out;
    }
    prev = count;
    out.count = count;
    out.window_used = w;
  }
  out.stabilized = false;
  return out;
}

namespace {

std::vector<Rat> order_objective(const GhostSpace& gs, const DivisorClass& rel,
                                 const CuspStratum& stratum) {
  QExp e2 = eisenstein_qexp(2, gs.window + 2);
  std::vector<Rat> obj(gs.zdim, Rat(0));
  for (auto& [idx, coeff] : rel.terms) {
    if (!stratum.in_perp(idx.gamma)) continue;
    long rep = stratum.p_rep(idx.gamma);
    Rat x = -idx.n;  // evaluate (E2 Psi)(p(gamma), x)
    Rat scale = coeff * rat(stratum.N, 24);
    for (long j = 0;; ++j) {
      Rat e = x - j;
      if (e < 0) break;
      Rat key = e * (4 * gs.m);
      if (!is_integer(key)) throw math_error("ghost objective: off-grid exponent");
      std::vector<Rat> row = gs.coeff_row(rep, static_cast<long>(key.get_num().get_si()));
      Rat w = scale * e2.coeff(rat(j));
      for (std::size_t t = 0; t < gs.zdim; ++t) obj[t] += w * row[t];
    }
  }
  return obj;
}

}  // namespace

GhostBound ghost_min_order(const DivisorClass& rel, const CuspStratum& stratum, long window,
                           JacobiEngine& eng, long node_budget) {
  GhostBound out;
  std::optional<Rat> prev;
  long w = window;
  for (int esc = 0; esc < 3; ++esc, ++w) {
    GhostSpace gs = ghost_space(stratum.m, w, eng);
    LPProblem p = ghost_constraints(gs);
    p.objective = order_objective(gs, rel, stratum);
    Rat bound;
    bool exact = false;
    long nodes = 0;
    try {
      LPResult r = ilp_minimize(p, node_budget);
      if (r.status == LPStatus::Infeasible)
        throw math_error("ghost_min_order: empty ghost polytope (window inconsistent)");
      bound = r.value;
      exact = true;
      nodes = r.nodes_used;
    } catch (const ilp_budget_error& e) {
      bound = e.best_bound;  // still a valid lower bound for the minimum
      exact = false;
      nodes = node_budget;
    }
    if (prev && *prev == bound) {
      out.bound = bound;
      out.exact = exact;
      out.stabilized = true;
      out.window_used = w;
      out.nodes_used = nodes;
      return out;
    }
    prev = bound;
    out.bound = bound;
    out.exact = exact;
    out.window_used = w;
    out.nodes_used = nodes;
  }
  out.stabilized = false;
  return out;
}

CuspidalityVerdict cuspidality_verdict(const DivisorClass& rel, long d, JacobiEngine& eng,
                                       long node_budget) {
  CuspidalityVerdict out;
  Rat maxn = 0;
  for (auto& [idx, c] : rel.terms) maxn = std::max(maxn, Rat(-idx.n));
  long window0 = 2 + static_cast<long>(ceil_int(maxn).get_si());
  bool first = true;
  for (auto& stratum : cusp_strata(d)) {
    GhostBound b = ghost_min_order(rel, stratum, window0, eng, node_budget);
    out.strata.push_back({stratum.N, stratum.m, b});
    if (first || b.bound < out.global_bound) out.global_bound = b.bound;
    first = false;
  }
  out.cusp_form_proved = !first && out.global_bound > 0;
  return out;
}

KodairaReport kodaira_boundary_report(long d, const ConeConfig& cfg, JacobiEngine& eng,
                                      long node_budget) {
  KodairaReport rep;
  rep.d = d;
  rep.open = kodaira_open_report(d, cfg, eng);
  if (rep.open.classification != "inside_cone_proceed_to_boundary" &&
      rep.open.classification != "conditional_kappa_lt_19") {
    rep.verdict = rep.open.classification;
    return rep;
  }
  // Borcherds input at integral scale: 2(19-eps) H(0,0) + [B] + 2 sum t P
  Rat eps = *rep.open.verdict.epsilon_min;
  DivisorClass rel;
  rel.d = d;
  rel.add(HeegnerIndex{0, 0}, (rat(19) - eps) * 2);
  DivisorClass branch = cfg.branch.terms.empty() ? default_branch_divisor(d) : cfg.branch;
  rel = rel + branch;
  long window = 0;
  for (auto& [cls, t] : rep.open.verdict.t) {
    long w = static_cast<long>(ceil_int(rat(cls.delta_disc, 4 * d)).get_si()) + 1;
    window = std::max(window, w);
  }
  for (auto& [cls, t] : rep.open.verdict.t)
    rel = rel + p_in_terms_of_H(d, cls.delta_disc, cls.delta_coset, std::max(window, 2L)) * (t * 2);
  rep.relation = rel;
  rep.cusps = cuspidality_verdict(rel, d, eng, node_budget);
  if (rep.cusps->cusp_form_proved)
    rep.verdict = (eps > 0) ? "general_type" : "kappa_ge_0";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace k3
