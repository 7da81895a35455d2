#include "lattice.hpp"

#include <functional>
#include <random>

#include "classical.hpp"

namespace k3 {

void GramLattice::check_even_symmetric() const {
  std::size_t n = rank();
  for (std::size_t i = 0; i < n; ++i) {
    if (gram[i].size() != n) throw math_error("GramLattice: not square");
    if (gram[i][i] % 2 != 0) throw math_error("GramLattice: odd diagonal");
    for (std::size_t j = 0; j < n; ++j)
      if (gram[i][j] != gram[j][i]) throw math_error("GramLattice: not symmetric");
  }
}

namespace {

// exact LDL^T; returns false when not positive definite
bool ldl(const std::vector<std::vector<Rat>>& a, std::vector<std::vector<Rat>>& l,
         std::vector<Rat>& diag) {
  std::size_t n = a.size();
  l.assign(n, std::vector<Rat>(n, Rat(0)));
  diag.assign(n, Rat(0));
  std::vector<std::vector<Rat>> w = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (w[k][k] <= 0) return false;
    diag[k] = w[k][k];
    l[k][k] = 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rat f = w[i][k] / w[k][k];
      l[i][k] = f;
      for (std::size_t j = k; j < n; ++j) w[i][j] -= f * w[k][j];
    }
  }
  return true;
}

std::vector<std::vector<Rat>> rat_inverse(const IntMatrix& g) {
  std::size_t n = g.size();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = Rat(g[i][j]);
    aug.at(i, n + i) = 1;
  }
  auto e = echelon_reduce(aug);
  if (e.rank != n) throw math_error("lattice: degenerate Gram matrix");
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.reduced.at(i, n + j);
  return inv;
}

}  // namespace

bool GramLattice::positive_definite() const {
  std::vector<std::vector<Rat>> a(rank(), std::vector<Rat>(rank()));
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) a[i][j] = Rat(gram[i][j]);
  std::vector<std::vector<Rat>> l;
  std::vector<Rat> d;
  return ldl(a, l, d);
}

GramLattice gram_rank1(long two_m, std::string name) {
  GramLattice g;
  g.name = name.empty() ? "<" + std::to_string(two_m) + ">" : std::move(name);
  g.gram = {{Int(two_m)}};
  return g;
}

GramLattice gram_a1() { return gram_rank1(2, "A1"); }

GramLattice gram_e8() {
  GramLattice g;
  g.name = "E8";
  g.gram.assign(8, std::vector<Int>(8, 0));
  for (int i = 0; i < 8; ++i) g.gram[i][i] = 2;
  const int edges[7][2] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
  for (auto& e : edges) {
    g.gram[e[0]][e[1]] = -1;
    g.gram[e[1]][e[0]] = -1;
  }
  return g;
}

GramLattice gram_d16plus() {
  // coordinates: g = (1/2,...,1/2), e_i - e_{i+1} (i = 1..14), e_14 + e_15
  std::vector<std::vector<Rat>> basis;
  basis.push_back(std::vector<Rat>(16, rat(1, 2)));
  for (int i = 0; i < 14; ++i) {
    std::vector<Rat> v(16, Rat(0));
    v[i] = 1;
    v[i + 1] = -1;
    basis.push_back(v);
  }
  std::vector<Rat> w(16, Rat(0));
  w[13] = 1;
  w[14] = 1;
  basis.push_back(w);
  GramLattice g;
  g.name = "D16+";
  g.gram.assign(16, std::vector<Int>(16, 0));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Rat s = 0;
      for (int k = 0; k < 16; ++k) s += basis[i][k] * basis[j][k];
      if (!is_integer(s)) throw math_error("D16+ basis is not integral");
      g.gram[i][j] = s.get_num();
    }
  return g;
}

GramLattice gram_a17_glue6() {
  // A17 root basis alpha_1..alpha_16 plus the norm-4 glue vector of the
  // index-3 overlattice; glue pairs to 1 with alpha_6 only
  GramLattice g;
  g.name = "A17[3]";
  g.gram.assign(17, std::vector<Int>(17, 0));
  for (int i = 0; i < 16; ++i) {
    g.gram[i][i] = 2;
    if (i + 1 < 16) {
      g.gram[i][i + 1] = -1;
      g.gram[i + 1][i] = -1;
    }
  }
  g.gram[16][16] = 4;
  g.gram[16][5] = 1;
  g.gram[5][16] = 1;
  return g;
}

GramLattice direct_sum(const std::vector<GramLattice>& parts, std::string name) {
  GramLattice g;
  std::size_t n = 0;
  for (auto& p : parts) n += p.rank();
  g.gram.assign(n, std::vector<Int>(n, 0));
  std::size_t off = 0;
  std::string autoname;
  for (auto& p : parts) {
    for (std::size_t i = 0; i < p.rank(); ++i)
      for (std::size_t j = 0; j < p.rank(); ++j) g.gram[off + i][off + j] = p.gram[i][j];
    off += p.rank();
    if (!autoname.empty()) autoname += "+";
    autoname += p.name;
  }
  g.name = name.empty() ? autoname : std::move(name);
  return g;
}

DiscModule disc_module(const GramLattice& g) {
  g.check_even_symmetric();
  DiscModule dm;
  SnfResult snf = smith_normal_form(g.gram);
  for (auto& d : snf.diag) {
    if (d == 0) throw math_error("disc_module: degenerate Gram matrix");
    dm.order *= d;
    if (d != 1) dm.invariants.push_back(d);
  }
  dm.cyclic = dm.invariants.size() <= 1;
  if (dm.cyclic && !dm.invariants.empty()) {
    // generator: y with (U y) = e_last; its norm comes from G^{-1}
    std::size_t n = g.rank();
    auto inv = rat_inverse(g.gram);
    // solve U y = e_last exactly: y = U^{-1} e_last via linear solve
    RatMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u.at(i, j) = Rat(snf.u[i][j]);
    std::vector<Rat> e(n, Rat(0));
    e[n - 1] = 1;
    auto sol = solve(u, e);
    if (!sol.consistent || !sol.unique) throw math_error("disc_module: SNF transform not invertible");
    dm.generator = sol.x;
    Rat q = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += dm.generator[i] * inv[i][j] * dm.generator[j];
    q /= 2;
    q -= Rat(floor_int(q));
    dm.gen_q = q;
  }
  return dm;
}

const QExp& ThetaSeries::component(long rep) const {
  auto it = comp.find(rep);
  if (it == comp.end()) throw math_error("ThetaSeries: no such component");
  return it->second;
}

namespace {

struct ClassLabeler {
  long two_m = 1;
  IntMatrix u;          // SNF row transform
  long unit_inv = 1;    // relabeling factor u^{-1} with q(u*g0) = 1/4m

  long label(const std::vector<Int>& y) const {
    Int z = 0;
    std::size_t n = u.size();
    for (std::size_t j = 0; j < n; ++j) z += u[n - 1][j] * y[j];
    Int t = (z * unit_inv) % two_m;
    long v = static_cast<long>(t.get_si());
    return mod_pos(v, two_m);
  }
};

// find unit w with w^2 * (4m * gen_q) === 1 (mod 4m); returns 0 if none
long labeling_unit(long m, const Rat& gen_q) {
  Rat w4 = gen_q * (4 * m);
  if (!is_integer(w4)) return 0;
  long w = mod_pos(static_cast<long>(w4.get_num().get_si()), 4 * m);
  for (long u = 1; u < 2 * m + 1; ++u) {
    if (std::gcd(u, 2 * m) != 1) continue;
    if (mod_pos(u * u * w - 1, 4 * m) == 0) return u;
  }
  return 0;
}

}  // namespace

namespace {

// connected components of the Gram support graph = orthogonal block splitting
std::vector<std::vector<std::size_t>> gram_blocks(const IntMatrix& g) {
  std::size_t n = g.size();
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = nc;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j)
        if (g[i][j] != 0 && comp[j] < 0) {
          comp[j] = nc;
          stack.push_back(j);
        }
    }
    ++nc;
  }
  std::vector<std::vector<std::size_t>> blocks(nc);
  for (std::size_t i = 0; i < n; ++i) blocks[comp[i]].push_back(i);
  return blocks;
}

GramLattice sub_lattice(const GramLattice& g, const std::vector<std::size_t>& idx) {
  GramLattice s;
  s.name = g.name + "#";
  s.gram.assign(idx.size(), std::vector<Int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s.gram[i][j] = g.gram[idx[i]][idx[j]];
  return s;
}

}  // namespace


namespace {

// Scaled-integer branch-and-bound over the dual lattice: enumerates y in Z^n
// with y^T G^{-1} y <= 2*prec, one visit per +-pair (zero vector flagged).
// All node arithmetic is mpz; "used" carries the scaled partial norm.
struct DualWalker {
  std::size_t n = 0;
  std::vector<std::vector<Int>> lnum;  // l[j][i] * ldenom
  Int ldenom = 1;
  std::vector<Int> dnum;  // diag[i] * ddenom
  Int ddenom = 1;
  Int scale = 1;   // ldenom^2 * ddenom
  Int budget = 0;  // 2*prec*scale
  std::size_t node_cap = 0;
  std::size_t nodes = 0;
  std::vector<Int> y;
  std::function<void(const std::vector<Int>&, const Int&, bool)> leaf;

  void init(const IntMatrix& gram, long prec, const char* who) {
    n = gram.size();
    auto ginv = rat_inverse(gram);
    std::vector<std::vector<Rat>> l;
    std::vector<Rat> diag;
    if (!ldl(ginv, l, diag)) throw math_error(std::string(who) + ": lattice is not positive definite");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) mpz_lcm(ldenom.get_mpz_t(), ldenom.get_mpz_t(), l[j][i].get_den_mpz_t());
      mpz_lcm(ddenom.get_mpz_t(), ddenom.get_mpz_t(), diag[i].get_den_mpz_t());
    }
    lnum.assign(n, std::vector<Int>(n, 0));
    dnum.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      dnum[i] = Int(diag[i] * ddenom);
      for (std::size_t j = 0; j < n; ++j) lnum[j][i] = Int(l[j][i] * ldenom);
    }
    scale = ldenom * ldenom * ddenom;
    budget = Int(2) * prec * scale;
    y.assign(n, 0);
  }

  void run() {
    if (n > 0) descend(n, Int(0), true);
  }

  void descend(std::size_t level, const Int& used, bool zero_prefix) {
    if (++nodes > node_cap) throw budget_error("theta enumeration budget exceeded");
    std::size_t i = level - 1;
    Int cnum = 0;
    for (std::size_t j = level; j < n; ++j)
      if (y[j] != 0) cnum += lnum[j][i] * y[j];
    Int room = budget - used;
    // scaled contribution of level i: dnum[i] * t^2 with t = v*ldenom + cnum
    auto contrib = [&](const Int& v) -> Int {
      Int t = v * ldenom + cnum;
      return dnum[i] * t * t;
    };
    auto handle = [&](const Int& v) {
      y[i] = v;
      Int used2 = used + contrib(v);
      bool zp = zero_prefix && v == 0;
      if (i == 0)
        leaf(y, used2, zp);
      else
        descend(i, used2, zp);
    };
    Int center;
    mpz_fdiv_q(center.get_mpz_t(), Int(-cnum).get_mpz_t(), ldenom.get_mpz_t());
    auto fits = [&](const Int& v) { return contrib(v) <= room; };
    if (!fits(center) && !fits(center + 1)) return;
    for (Int v = fits(center) ? center : center + 1;; v += 1) {
      if (!fits(v)) break;
      if (!(zero_prefix && v < 0)) handle(v);
    }
    for (Int v = center - (fits(center) ? 1 : 0);; v -= 1) {
      if (!fits(v) || (zero_prefix && v < 0)) break;
      handle(v);
    }
  }
};

}  // namespace

ThetaSeries theta_series(const GramLattice& g, long prec, std::size_t node_cap) {
  g.check_even_symmetric();
  DiscModule dm = disc_module(g);
  if (!dm.cyclic || dm.order % 2 != 0)
    throw math_error("theta_series: discriminant module must be cyclic of even order");
  // orthogonal sums: enumerate blocks separately and multiply componentwise
  auto blocks = gram_blocks(g.gram);
  if (blocks.size() > 1) {
    std::vector<GramLattice> scalar_parts;
    std::vector<GramLattice> vv_parts;
    for (auto& idx : blocks) {
      GramLattice sub = sub_lattice(g, idx);
      if (disc_module(sub).order == 1)
        scalar_parts.push_back(std::move(sub));
      else
        vv_parts.push_back(std::move(sub));
    }
    if (vv_parts.size() == 1) {
      QExp scalar = QExp::one().truncated(rat(prec) + 1);
      for (auto& s : scalar_parts) scalar = scalar * scalar_theta(s, prec, node_cap);
      return theta_product(scalar, theta_series(vv_parts[0], prec, node_cap));
    }
    // several non-unimodular blocks: fall through to full enumeration
  }
  long m = static_cast<long>(dm.order.get_si()) / 2;
  long unit = 1;
  if (m >= 1 && dm.order > 1) {
    unit = labeling_unit(m, dm.gen_q);
    if (unit == 0)
      throw math_error("theta_series: no generator with q = 1/4m (lattice outside the genus family)");
  }
  // class label of y: t = unit^{-1} * (U y)_last mod 2m
  long unit_inv = 1;
  for (long u = 1; u < 2 * m + 1; ++u)
    if (mod_pos(u * unit - 1, 2 * m) == 0) {
      unit_inv = u;
      break;
    }

  SnfResult snf = smith_normal_form(g.gram);
  ClassLabeler labeler{2 * m, snf.u, unit_inv};

  std::map<long, std::map<long, Int>> counts;  // full class -> key(4m) -> count
  DualWalker walker;
  walker.init(g.gram, prec, "theta_series");
  walker.node_cap = node_cap;
  walker.leaf = [&](const std::vector<Int>& y, const Int& used_scaled, bool zero) {
    Int keynum = used_scaled * (2 * m);
    Int key, rem;
    mpz_fdiv_qr(key.get_mpz_t(), rem.get_mpz_t(), keynum.get_mpz_t(), walker.scale.get_mpz_t());
    if (rem != 0) throw math_error("theta_series: off-grid vector norm");
    long k = static_cast<long>(key.get_si());
    if (zero) {
      counts[0][k] += 1;
    } else {
      long cls = labeler.label(y);
      counts[cls][k] += 1;
      counts[mod_pos(-cls, 2 * m)][k] += 1;
    }
  };
  walker.run();

  ThetaSeries th;
  th.m = m;
  th.prec = prec;
  for (long rep = 0; rep <= m; ++rep) {
    QExp comp(4 * m);
    auto it = counts.find(rep);
    if (it != counts.end())
      for (auto& [key, cnt] : it->second) comp.add_term(rat(key, 4 * m), Rat(cnt));
    comp.set_prec(rat(prec) + rat(1, 4 * m));
    th.comp.emplace(rep, std::move(comp));
  }
  return th;
}

QExp scalar_theta(const GramLattice& g, long prec, std::size_t node_cap) {
  DiscModule dm = disc_module(g);
  if (dm.order != 1) throw math_error("scalar_theta: lattice must be unimodular");
  auto blocks = gram_blocks(g.gram);
  if (blocks.size() > 1) {
    QExp out = QExp::one().truncated(rat(prec) + 1);
    for (auto& idx : blocks) out = out * scalar_theta(sub_lattice(g, idx), prec, node_cap);
    return out;
  }
  std::map<long, Int> counts;
  DualWalker walker;
  walker.init(g.gram, prec, "scalar_theta");
  walker.node_cap = node_cap;
  walker.leaf = [&](const std::vector<Int>&, const Int& used_scaled, bool zero) {
    Int e, rem;
    Int den = walker.scale * 2;
    mpz_fdiv_qr(e.get_mpz_t(), rem.get_mpz_t(), used_scaled.get_mpz_t(), den.get_mpz_t());
    if (rem != 0) throw math_error("scalar_theta: odd norm in an even lattice");
    counts[static_cast<long>(e.get_si())] += zero ? 1 : 2;
  };
  walker.run();
  QExp out;
  for (auto& [e, c] : counts) out.add_term(rat(e), Rat(c));
  out.set_prec(rat(prec) + 1);
  return out;
}

ThetaSeries theta_product(const QExp& scalar, const ThetaSeries& vv) {
  ThetaSeries out;
  out.m = vv.m;
  out.prec = vv.prec;
  for (auto& [rep, comp] : vv.comp) out.comp.emplace(rep, (comp * scalar).truncated(rat(vv.prec) + rat(1, 4 * vv.m)));
  return out;
}

bool genus_check(const GramLattice& g, long m) {
  if (g.rank() != 17) return false;
  try {
    g.check_even_symmetric();
  } catch (const math_error&) {
    return false;
  }
  if (!g.positive_definite()) return false;
  DiscModule dm = disc_module(g);
  if (!dm.cyclic || dm.order != 2 * m) return false;
  return labeling_unit(m, dm.gen_q) != 0;
}

long CuspStratum::p_rep(long gamma_rep) const {
  if (gamma_rep % N != 0) throw math_error("CuspStratum: class not orthogonal to H_F");
  long t = mod_pos(gamma_rep / N, 2 * m);
  return std::min(t, 2 * m - t);
}

std::vector<CuspStratum> cusp_strata(long d) {
  std::vector<CuspStratum> out;
  for (long N = 1; N * N <= d; ++N)
    if (d % (N * N) == 0) out.push_back(CuspStratum{d, N, d / (N * N)});
  return out;
}

Rat boundary_coeff(const DivisorClass& rel, const CuspStratum& stratum, const ThetaSeries& theta) {
  if (theta.m != stratum.m) throw math_error("boundary_coeff: theta series has the wrong modulus");
  QExp e2 = eisenstein_qexp(2, theta.prec + 1);
  std::map<long, QExp> e2theta;
  Rat total = 0;
  for (auto& [idx, coeff] : rel.terms) {
    if (!stratum.in_perp(idx.gamma)) continue;
    long rep = stratum.p_rep(idx.gamma);
    auto it = e2theta.find(rep);
    if (it == e2theta.end()) it = e2theta.emplace(rep, theta.component(rep) * e2).first;
    total += coeff * it->second.coeff(-idx.n);
  }
  return total * rat(stratum.N, 24);
}

CompletedRelation complete_relation(const DivisorClass& rel, long d,
                                    const std::vector<std::pair<CuspStratum, GramLattice>>& lattices,
                                    long theta_prec) {
  CompletedRelation out;
  out.open_part = rel;
  for (auto& [stratum, g] : lattices) {
    if (stratum.d != d) throw math_error("complete_relation: stratum belongs to another d");
    if (!genus_check(g, stratum.m))
      throw math_error("complete_relation: lattice " + g.name + " fails the genus check for m=" +
                       std::to_string(stratum.m));
    ThetaSeries th = theta_series(g, theta_prec);
    out.boundary.push_back({stratum, g.name, boundary_coeff(rel, stratum, th)});
  }
  return out;
}

GramLattice neighbor_step(const GramLattice& g, long p, unsigned long seed) {
  g.check_even_symmetric();
  DiscModule dm = disc_module(g);
  if (p < 3 || dm.order % p == 0)
    throw math_error("neighbor_step: p must be an odd prime not dividing det(G)");
  std::size_t n = g.rank();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-1, 1);
  auto q_of = [&](const std::vector<Int>& x) {
    Int s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += x[i] * g.gram[i][j] * x[j];
    return s;
  };
  for (long attempt = 0; attempt < 20000; ++attempt) {
    std::vector<Int> x(n);
    for (auto& v : x) v = pick(rng);
    Int qx = q_of(x);
    if (qx == 0) continue;
    if ((qx / 2) % p != 0) continue;
    std::vector<Int> gx(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gx[i] += g.gram[i][j] * x[j];
    // lift x so Q(x) === 0 mod 2p^2: x += p*w with (Gx, w) === -Q(x)/2p (mod p)
    std::size_t piv = n;
    for (std::size_t j = 0; j < n; ++j)
      if (gx[j] % p != 0) {
        piv = j;
        break;
      }
    if (piv == n) continue;  // x in p L*, useless
    Int need = -(qx / 2) / p;
    long a = mod_pos(static_cast<long>(Int(gx[piv] % p).get_si()), p);
    long ainv = 0;
    for (long u = 1; u < p; ++u)
      if (mod_pos(u * a - 1, p) == 0) {
        ainv = u;
        break;
      }
    long w = mod_pos(static_cast<long>(Int(need % p).get_si()) * ainv, p);
    x[piv] += Int(p) * w;
    if ((q_of(x) / 2) % (p * p) != 0) throw math_error("neighbor_step: lift failed (internal)");
    // recompute Gx for the lifted x
    gx.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gx[i] += g.gram[i][j] * x[j];
    // L' = {y : (x, y) === 0 mod p} + Z (x/p); build p*L' and divide
    std::size_t piv2 = n;
    for (std::size_t j = 0; j < n; ++j)
      if (gx[j] % p != 0) {
        piv2 = j;
        break;
      }
    if (piv2 == n) continue;
    IntMatrix gens;
    long b = mod_pos(static_cast<long>(Int(gx[piv2] % p).get_si()), p);
    long binv = 0;
    for (long u = 1; u < p; ++u)
      if (mod_pos(u * b - 1, p) == 0) {
        binv = u;
        break;
      }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Int> row(n, 0);
      if (i == piv2) {
        row[i] = Int(p) * p;
      } else {
        long ci = mod_pos(static_cast<long>(Int(gx[i] % p).get_si()), p);
        row[i] = p;
        row[piv2] = Int(-p) * mod_pos(ci * binv, p);
      }
      gens.push_back(row);
    }
    gens.push_back(x);  // x itself becomes x/p after the division
    IntMatrix basis = row_hnf(gens);
    if (basis.size() != n) continue;
    GramLattice out;
    out.name = g.name + "~" + std::to_string(p);
    out.gram.assign(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Int s = 0;
        for (std::size_t a2 = 0; a2 < n; ++a2)
          for (std::size_t b2 = 0; b2 < n; ++b2) s += basis[i][a2] * g.gram[a2][b2] * basis[j][b2];
        if (s % (Int(p) * p) != 0) throw math_error("neighbor_step: non-integral neighbor (internal)");
        out.gram[i][j] = s / (Int(p) * p);
      }
    out.check_even_symmetric();
    return out;
  }
  throw budget_error("neighbor_step: no isotropic vector found within the search budget");
}

}  // namespace k3
