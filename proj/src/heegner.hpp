#pragma once

#include "obstruction.hpp"

namespace k3 {

// Heegner index on F_{2d}: class representative 0 <= gamma <= d (conflating
// +-gamma) and exponent n <= 0 with n === -gamma^2/4d (mod 1).  The pair
// (0, 0) stands for -lambda.
struct HeegnerIndex {
  long gamma = 0;
  Rat n = 0;

  bool operator<(const HeegnerIndex& o) const {
    if (gamma != o.gamma) return gamma < o.gamma;
    return n < o.n;
  }
  bool operator==(const HeegnerIndex& o) const { return gamma == o.gamma && n == o.n; }
};

void validate_heegner(long d, const HeegnerIndex& idx);

// finite formal Q-combination of Heegner indices; no zero coefficients stored
struct DivisorClass {
  long d = 1;
  std::map<HeegnerIndex, Rat> terms;

  void add(const HeegnerIndex& idx, const Rat& c);
  DivisorClass operator+(const DivisorClass& o) const;
  DivisorClass operator*(const Rat& s) const;
  bool is_zero() const { return terms.empty(); }
};

// isotropic classes a^2 === 0 (mod 4d), reported as representatives in [0, d]
std::vector<long> cusps(long d);

// Lemma-style dictionary (h, a) -> (a mod 2d, h - 1 - a^2/4d); requires
// positive discriminant a^2 - 4d(h-1).
HeegnerIndex heegner_of(long d, long h, long a);

struct PicardBasis {
  long d = 1;
  FunctionalBasis fb;

  std::size_t dim() const { return fb.dim(); }
  std::vector<HeegnerIndex> free_functionals() const;
};

PicardBasis picard_basis(long d, long window, JacobiEngine& eng);

// exact coordinates of [H(idx)] over the free functionals
DivisorClass express(const PicardBasis& basis, const HeegnerIndex& idx);

// The Table-1-shaped relation 2rho*lambda ~ H(0,-1) + sum_{a=1..d} c_a H(a, -a^2/4d),
// normalized so the H(0,-1) coefficient is 1.
struct HodgeRelation {
  long d = 1;
  Rat two_rho;                  // lambda multiplier
  std::vector<Rat> coeff;       // coeff[a-1] for a = 1..d (trailing zeros when dropped)
  long a_max = 0;               // support actually used
  long dropped = 0;             // trailing columns removed to restore uniqueness
  bool rank_defect = false;
  // the full vanishing combination: two_rho*c_{0,0} + c_{0,-1} + sum c_a c_{a,n_a}
  DivisorClass relation() const;
};

HodgeRelation hodge_relation(const PicardBasis& basis);

// substitute express() coordinates for every non-free index; a true relation
// collapses to zero
DivisorClass reduce_to_basis(const PicardBasis& basis, const DivisorClass& cls);

}  // namespace k3
