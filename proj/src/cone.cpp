#include "cone.hpp"

#ifdef K3PIC_EISENSTEIN
#include "eisenstein.hpp"  // optional backend
#endif

namespace k3 {

DivisorClass default_branch_divisor(long d) {
  DivisorClass b;
  b.d = d;
  b.add(HeegnerIndex{0, -1}, rat(1, 2));
  for (long a = 1; a <= d; ++a) {
    if (mod_pos(a * a - 1, 4 * d) != 0) continue;
    bool torsion = (a == d);
    b.add(HeegnerIndex{a, -rat(1, 4 * d)}, torsion ? rat(1, 2) : rat(1));
  }
  if (d % 4 == 1 && d > 1) {  // at d = 1 this family coincides with the -2 roots
    std::vector<long> reps;
    for (long bb = 1; bb <= d; ++bb) {
      if (mod_pos(bb * bb - 1, d) != 0) continue;
      long g = mod_pos(2 * bb, 2 * d);
      g = std::min(g, 2 * d - g);
      if (std::find(reps.begin(), reps.end(), g) == reps.end()) reps.push_back(g);
    }
    for (long g : reps) {
      bool torsion = (g == 0 || g == d);
      b.add(HeegnerIndex{g, -rat(1, d)}, torsion ? rat(1, 2) : rat(1));
    }
  }
  return b;
}

std::vector<Rat> class_coords(const PicardBasis& basis, const DivisorClass& cls) {
  std::vector<Rat> out(basis.dim(), Rat(0));
  for (auto& [idx, c] : cls.terms) {
    std::vector<Rat> v = basis.fb.express(idx.gamma, idx.n);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * v[j];
  }
  return out;
}

namespace {

std::vector<ConeGenerator> build_generators(const PicardBasis& basis, long d, long delta_max,
                                            long window, const Parallel& par) {
  std::vector<RankTwoClass> classes;
  for (long disc = 1; disc <= delta_max; ++disc)
    for (long coset = 0; coset <= d; ++coset)
      if (class_exists(d, disc, coset)) classes.push_back({d, disc, coset});
  std::vector<ConeGenerator> gens(classes.size());
  par.for_each(classes.size(), [&](std::size_t i) {
    DivisorClass p = p_in_terms_of_H(d, classes[i].delta_disc, classes[i].delta_coset, window);
    gens[i] = ConeGenerator{classes[i], class_coords(basis, p)};
  });
  return gens;
}

}  // namespace

ConeContext cone_context(const ConeConfig& cfg0, JacobiEngine& eng) {
  ConeContext ctx;
  ctx.cfg = cfg0;
  if (ctx.cfg.delta_max <= 0) ctx.cfg.delta_max = 4 * ctx.cfg.d + 25;
  if (ctx.cfg.window <= 0)
    ctx.cfg.window = static_cast<long>(ceil_int(rat(ctx.cfg.delta_max + 2 * ctx.cfg.d, 4 * ctx.cfg.d)).get_si()) + 1;
  if (ctx.cfg.branch.terms.empty()) ctx.cfg.branch = default_branch_divisor(ctx.cfg.d);
  long d = ctx.cfg.d;
  ctx.basis = picard_basis(d, ctx.cfg.window, eng);
  ctx.gens = build_generators(ctx.basis, d, ctx.cfg.delta_max, ctx.cfg.window, eng.par);
  DivisorClass lambda;
  lambda.d = d;
  lambda.add(HeegnerIndex{0, 0}, -1);
  ctx.lambda_coords = class_coords(ctx.basis, lambda);
  std::vector<Rat> bc = class_coords(ctx.basis, ctx.cfg.branch);
  ctx.kcirc_coords.assign(ctx.basis.dim(), Rat(0));
  for (std::size_t j = 0; j < ctx.basis.dim(); ++j)
    ctx.kcirc_coords[j] = ctx.lambda_coords[j] * 19 - bc[j] / 2;
  return ctx;
}

namespace {

LPProblem cone_lp(const ConeContext& ctx, const std::vector<Rat>& target, bool with_epsilon) {
  std::size_t ng = ctx.gens.size();
  std::size_t nv = ng + (with_epsilon ? 1 : 0);
  LPProblem p;
  p.objective.assign(nv, Rat(0));
  if (with_epsilon) p.objective[ng] = 1;  // minimize epsilon
  p.lower.assign(nv, Rat(0));
  p.upper.assign(nv, std::nullopt);
  for (std::size_t row = 0; row < ctx.basis.dim(); ++row) {
    std::vector<Rat> a(nv, Rat(0));
    for (std::size_t gidx = 0; gidx < ng; ++gidx) a[gidx] = ctx.gens[gidx].coords[row];
    if (with_epsilon) a[ng] = ctx.lambda_coords[row];
    p.add_row(a, Rel::EQ, target[row]);
  }
  return p;
}

ConeVerdict run_cone_lp(const ConeContext& ctx, const std::vector<Rat>& target, bool with_epsilon) {
  LPProblem p = cone_lp(ctx, target, with_epsilon);
  LPResult r = lp_solve(p);
  ConeVerdict v;
  v.certificate = r;
  v.delta_max_used = ctx.cfg.delta_max;
  if (r.status == LPStatus::Optimal) {
    v.inside = true;
    if (with_epsilon) v.epsilon_min = r.value;
    for (std::size_t gidx = 0; gidx < ctx.gens.size(); ++gidx)
      if (r.point[gidx] != 0) v.t[ctx.gens[gidx].cls] = r.point[gidx];
  } else if (r.status == LPStatus::Infeasible) {
    v.inside = false;
    v.note = "outside the Noether-Lefschetz cone spanned by the shipped generator list; "
             "not rigorous (finite generator cutoff, cone completeness open)";
  } else {
    throw math_error("cone LP unbounded (ill-posed configuration)");
  }
  return v;
}

}  // namespace

ConeVerdict nl_membership(const ConeContext& ctx, const std::vector<Rat>& target) {
  return run_cone_lp(ctx, target, false);
}

ConeVerdict epsilon_min(const ConeContext& ctx) {
  ConeVerdict v = run_cone_lp(ctx, ctx.kcirc_coords, true);
  if (!v.inside)
    v.note = "K° - eps*lambda is outside the generated cone for every eps >= 0; " + v.note;
  return v;
}

OpenConeReport kodaira_open_report(long d, const ConeConfig& cfg0, JacobiEngine& eng) {
  OpenConeReport rep;
  rep.d = d;
  ConeConfig cfg = cfg0;
  cfg.d = d;
  ConeContext ctx = cone_context(cfg, eng);
  ConeVerdict v = epsilon_min(ctx);
  if (cfg.escalate) {
    // enlarging the generator list can only shrink the optimum; accept once
    // two consecutive cutoffs agree
    for (int round = 0; round < 4; ++round) {
      ConeConfig bigger = ctx.cfg;
      bigger.delta_max += 2 * d;
      bigger.escalate = false;
      ConeContext ctx2 = cone_context(bigger, eng);
      ConeVerdict v2 = epsilon_min(ctx2);
      bool same = (v.inside == v2.inside) &&
                  (!v.inside || *v.epsilon_min == *v2.epsilon_min);
      if (same) break;
      ctx = std::move(ctx2);
      v = std::move(v2);
      if (round == 3)
        throw math_error("epsilon_min did not stabilize under generator escalation");
    }
  }
  rep.verdict = v;

#ifdef K3PIC_EISENSTEIN
  try {
    int sign = eisenstein_degree_sign(d, ctx.cfg.branch, eng);
    rep.degree_sign = sign;
    if (sign < 0) {
      rep.classification = "unconditional_kappa_minus_infinity";
      rep.conditional = false;
      return rep;
    }
  } catch (const math_error&) {
    // backend unavailable for this d; fall through to the conditional logic
  }
#endif

  if (!v.inside)
    rep.classification = "conditional_kappa_minus_infinity";
  else if (*v.epsilon_min == 0)
    rep.classification = "conditional_kappa_lt_19";
  else
    rep.classification = "inside_cone_proceed_to_boundary";
  return rep;
}

}  // namespace k3
