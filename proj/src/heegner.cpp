#include "heegner.hpp"

namespace k3 {

void validate_heegner(long d, const HeegnerIndex& idx) {
  if (idx.gamma < 0 || idx.gamma > d)
    throw math_error("Heegner index: class representative must lie in [0, d]");
  if (idx.n > 0) throw math_error("Heegner index: n must be <= 0");
  Rat num = idx.n * (4 * d);
  if (!is_integer(num)) throw math_error("Heegner index: denominator of n must divide 4d");
  long base = mod_pos(static_cast<long>(num.get_num().get_si()), 4 * d);
  if (base != mod_pos(-idx.gamma * idx.gamma, 4 * d))
    throw math_error("Heegner index: n is not congruent to -gamma^2/4d (mod 1)");
  if (idx.n == 0 && idx.gamma != 0)
    throw math_error("Heegner index: n = 0 only allowed at gamma = 0");
}

void DivisorClass::add(const HeegnerIndex& idx, const Rat& c) {
  if (c == 0) return;
  Rat& slot = terms[idx];
  slot += c;
  if (slot == 0) terms.erase(idx);
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  if (d != o.d) throw math_error("DivisorClass: mixed moduli");
  DivisorClass out = *this;
  for (auto& [idx, c] : o.terms) out.add(idx, c);
  return out;
}

DivisorClass DivisorClass::operator*(const Rat& s) const {
  DivisorClass out;
  out.d = d;
  if (s == 0) return out;
  out.terms = terms;
  for (auto& [idx, c] : out.terms) c *= s;
  return out;
}

std::vector<long> cusps(long d) {
  std::vector<long> out;
  for (long a = 0; a <= d; ++a)
    if ((a * a) % (4 * d) == 0) out.push_back(a);
  return out;
}

HeegnerIndex heegner_of(long d, long h, long a) {
  Int disc = Int(a) * a - Int(4) * d * (h - 1);
  if (disc <= 0) throw math_error("heegner_of: a^2 - 4d(h-1) must be positive");
  long g = mod_pos(a, 2 * d);
  g = std::min(g, 2 * d - g);
  return HeegnerIndex{g, rat(h - 1) - rat(a * a, 4 * d)};
}

std::vector<HeegnerIndex> PicardBasis::free_functionals() const {
  std::vector<HeegnerIndex> out;
  for (auto i : fb.free_idx)
    out.push_back(HeegnerIndex{fb.grid[i].gamma, rat(fb.grid[i].num, 4 * d)});
  return out;
}

PicardBasis picard_basis(long d, long window, JacobiEngine& eng) {
  PicardBasis b;
  b.d = d;
  b.fb = stabilized_functional_basis(TargetWeight::W21_2, d, Flavor::SingZeroBar, window, eng);
  return b;
}

DivisorClass express(const PicardBasis& basis, const HeegnerIndex& idx) {
  validate_heegner(basis.d, idx);
  std::vector<Rat> coords = basis.fb.express(idx.gamma, idx.n);
  DivisorClass out;
  out.d = basis.d;
  auto frees = basis.free_functionals();
  for (std::size_t j = 0; j < frees.size(); ++j) out.add(frees[j], coords[j]);
  return out;
}

DivisorClass HodgeRelation::relation() const {
  DivisorClass rel;
  rel.d = d;
  rel.add(HeegnerIndex{0, 0}, two_rho);
  rel.add(HeegnerIndex{0, -1}, 1);
  for (long a = 1; a <= d; ++a) rel.add(HeegnerIndex{a, -rat(a * a, 4 * d)}, coeff[a - 1]);
  return rel;
}

HodgeRelation hodgerelation_with_columns(const PicardBasis& basis, long a_max) {
  long d = basis.d;
  // unknowns u_0 (lambda multiplier) and u_a, a = 1..a_max:
  //   u_0 c_{0,0} + c_{0,-1} + sum_a u_a c_{a, -a^2/4d} = 0 on AC
  std::size_t nfree = basis.dim();
  RatMatrix sys(nfree, a_max + 1);
  std::vector<Rat> rhs(nfree);
  auto put = [&](std::size_t col, const std::vector<Rat>& v) {
    for (std::size_t i = 0; i < nfree; ++i) sys.at(i, col) = v[i];
  };
  put(0, basis.fb.express(0, rat(0)));
  for (long a = 1; a <= a_max; ++a) put(a, basis.fb.express(a, -rat(a * a, 4 * d)));
  std::vector<Rat> c0m1 = basis.fb.express(0, rat(-1));
  for (std::size_t i = 0; i < nfree; ++i) rhs[i] = -c0m1[i];
  SolveResult sol = solve(sys, rhs);
  if (!sol.consistent)
    throw math_error("hodge_relation: no relation of the Table shape exists at d=" + std::to_string(d));
  if (!sol.unique) {
    HodgeRelation h;
    h.d = d;
    h.rank_defect = true;
    return h;
  }
  HodgeRelation h;
  h.d = d;
  h.two_rho = sol.x[0];
  h.coeff.assign(sol.x.begin() + 1, sol.x.end());
  h.coeff.resize(d, Rat(0));
  h.a_max = a_max;
  return h;
}

HodgeRelation hodge_relation(const PicardBasis& basis) {
  // The stated support {a = 0..d} can be rank-defective (first at d = 4,
  // where dim AC = 4 < d+1 unknowns and the known relation carries no
  // H(d,-1) term).  Drop trailing columns until the solution is unique and
  // report which shape was used.
  for (long a_max = basis.d; a_max >= 1; --a_max) {
    HodgeRelation h = hodgerelation_with_columns(basis, a_max);
    if (!h.rank_defect) {
      h.dropped = basis.d - a_max;
      return h;
    }
  }
  throw math_error("hodge_relation: rank defect persists for every support shape at d=" +
                   std::to_string(basis.d));
}

DivisorClass reduce_to_basis(const PicardBasis& basis, const DivisorClass& cls) {
  DivisorClass out;
  out.d = basis.d;
  for (auto& [idx, c] : cls.terms) out = out + express(basis, idx) * c;
  return out;
}

}  // namespace k3
