#pragma once

#include "cone.hpp"
#include "lattice.hpp"

namespace k3 {

// Parametrization of the weight-17/2 almost-cusp space at index m, with the
// sublattice of coordinate vectors whose windowed coefficients are integers
// (and even at the 2-torsion classes for n > 0).  Every theta series of a
// genus representative lies on the lattice.
struct GhostSpace {
  long m = 1;
  long window = 2;
  FunctionalBasis fb;  // target 17/2, flavor SingZeroBar

  struct CSlot {
    long gamma = 0;
    long key = 0;  // coefficient exponent numerator over 4m, >= 0
  };
  std::vector<CSlot> slots;                    // every window slot
  std::vector<std::vector<Rat>> slot_rows;     // Psi(slot) as a row over z
  std::size_t zdim = 0;                        // integral lattice rank
  std::vector<std::vector<Rat>> basis_coords;  // z-basis vectors in free coordinates

  std::size_t slot_index(long gamma, long key) const;
  // Psi(gamma, x) for x = key/4m as a row over z (throws outside the window)
  std::vector<Rat> coeff_row(long gamma, long key) const;
};

GhostSpace ghost_space(long m, long window, JacobiEngine& eng);

// LPProblem over z with the ghost constraints (ii)-(v) on the window
LPProblem ghost_constraints(const GhostSpace& gs);

struct GhostCount {
  long count = 0;
  long window_used = 2;
  bool stabilized = false;
};
// exact enumeration, window escalated until two consecutive counts agree
GhostCount ghost_count(long m, JacobiEngine& eng, long window0 = 2, std::size_t cap = 2000000,
                       int max_escalations = 6);

struct GhostBound {
  Rat bound;            // valid lower bound for the vanishing order
  bool exact = false;   // true when the ILP solved to optimality
  bool stabilized = false;
  long window_used = 0;
  long nodes_used = 0;
};

// minimize the Eq.-36 expression for the relation at the given stratum over
// the windowed ghost superset
GhostBound ghost_min_order(const DivisorClass& rel, const CuspStratum& stratum, long window,
                           JacobiEngine& eng, long node_budget = 4000);

struct CuspidalityVerdict {
  bool cusp_form_proved = false;  // never a negative verdict
  Rat global_bound;
  struct PerStratum {
    long N = 1, m = 1;
    GhostBound bound;
  };
  std::vector<PerStratum> strata;
};

CuspidalityVerdict cuspidality_verdict(const DivisorClass& rel, long d, JacobiEngine& eng,
                                       long node_budget = 4000);

struct KodairaReport {
  long d = 1;
  OpenConeReport open;
  // filled when the open part proceeds to the boundary
  std::optional<CuspidalityVerdict> cusps;
  DivisorClass relation;  // the completed Borcherds input (integral scale)
  // "general_type", "kappa_ge_0", "inconclusive", or the open classification
  std::string verdict;
};

KodairaReport kodaira_boundary_report(long d, const ConeConfig& cfg, JacobiEngine& eng,
                                      long node_budget = 4000);

}  // namespace k3
