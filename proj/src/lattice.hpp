#pragma once

#include "heegner.hpp"
#include "linalg.hpp"
#include "qexp.hpp"

namespace k3 {

// Positive-definite even lattice, stored as the Gram matrix of some basis.
// The artifact keeps the positive-definite mirror of the boundary lattices.
struct GramLattice {
  std::string name;
  IntMatrix gram;

  std::size_t rank() const { return gram.size(); }
  void check_even_symmetric() const;
  bool positive_definite() const;
};

GramLattice gram_rank1(long two_m, std::string name = "");
GramLattice gram_a1();
GramLattice gram_e8();
GramLattice gram_d16plus();
// index-3 overlattice of A17 generated by the norm-4 glue vector [6]
GramLattice gram_a17_glue6();
GramLattice direct_sum(const std::vector<GramLattice>& parts, std::string name = "");

struct DiscModule {
  std::vector<Int> invariants;     // cyclic orders > 1, divisibility chain
  Int order = 1;
  bool cyclic = false;
  std::vector<Rat> generator;      // dual-basis coordinates of a generator (cyclic case)
  Rat gen_q;                       // q(generator) in [0,1)
};
DiscModule disc_module(const GramLattice& g);

// Vector-valued theta series: component rep r in [0, m] counts dual vectors
// of class r*g where g is a generator with q(g) = 1/4m; grid +r^2/4m.
struct ThetaSeries {
  long m = 1;
  long prec = 0;
  std::map<long, QExp> comp;  // denom 4m, exponents v^2/2

  const QExp& component(long rep) const;
};

// Exact dual-vector enumeration (rational Cholesky branch-and-bound).  The
// lattice must pass genus-style labeling: cyclic disc of order 2m with a
// generator of q = 1/4m.  node_cap guards the enumeration budget.
ThetaSeries theta_series(const GramLattice& g, long prec, std::size_t node_cap = 200000000);

// scalar theta of a unimodular block
QExp scalar_theta(const GramLattice& g, long prec, std::size_t node_cap = 200000000);

// componentwise product for an orthogonal direct sum: unimodular scalar parts
// times one cyclic-disc part
ThetaSeries theta_product(const QExp& scalar, const ThetaSeries& vv);

// rank 17, positive definite, even, disc module = (Z/2m, x^2/4m)
bool genus_check(const GramLattice& g, long m);

struct CuspStratum {
  long d = 1, N = 1, m = 1;
  bool in_perp(long gamma_rep) const { return gamma_rep % N == 0; }
  long p_rep(long gamma_rep) const;  // image under p, conflated to [0, m]
};
std::vector<CuspStratum> cusp_strata(long d);

// Sum over the relation's terms with gamma in H^perp of
// coeff * (N/24) * (E2 Theta)(p(gamma), |n|).
Rat boundary_coeff(const DivisorClass& rel, const CuspStratum& stratum, const ThetaSeries& theta);

struct BoundaryTerm {
  CuspStratum stratum;
  std::string lattice;
  Rat coeff;
};
struct CompletedRelation {
  DivisorClass open_part;
  std::vector<BoundaryTerm> boundary;
};
CompletedRelation complete_relation(const DivisorClass& rel, long d,
                                    const std::vector<std::pair<CuspStratum, GramLattice>>& lattices,
                                    long theta_prec);

// p-neighbor of an even lattice for an odd prime p not dividing det(G);
// stays in the genus.  seed makes the isotropic-vector search reproducible.
GramLattice neighbor_step(const GramLattice& g, long p, unsigned long seed = 1);

}  // namespace k3
