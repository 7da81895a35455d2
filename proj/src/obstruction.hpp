#pragma once

#include "jacobi.hpp"
#include "linalg.hpp"

namespace k3 {

// Functional index (gamma, n): gamma conflated to its representative in
// [0, m], n <= 0 with n = num/4m on the coset grid n === -gamma^2/4m (mod 1).
struct Slot {
  long gamma = 0;
  long num = 0;  // exponent numerator over 4m, num <= 0

  bool operator==(const Slot& o) const { return gamma == o.gamma && num == o.num; }
};

// Greedy preference when choosing free functionals: shallow integer bins
// first, then small gamma.  One slot per (bin, gamma).
inline std::pair<long, long> slot_priority(const Slot& s, long m) {
  long bin = (-s.num + 4 * m - 1) / (4 * m);
  return {bin, s.gamma};
}

enum class Flavor { Sing, SingZeroBar, SingMinus };
enum class TargetWeight { W21_2, W17_2 };  // dual-space weights 21/2 and 17/2

inline int jacobi_weight_for(TargetWeight tw, long P) {
  return tw == TargetWeight::W21_2 ? static_cast<int>(12 * P - 8) : static_cast<int>(12 * P - 6);
}

inline bool slot_isotropic(long gamma, long m) { return (gamma * gamma) % (4 * m) == 0; }

// Grid of all flavor-admissible slots with |n| <= depth, ordered by ascending
// priority (most-preferred-free first).
std::vector<Slot> slot_grid(long m, long depth, Flavor flavor);

struct RelationSpace {
  long m = 1;
  Flavor flavor = Flavor::SingZeroBar;
  long pole_order = 1;
  std::vector<Slot> grid;  // ascending priority
  RatMatrix rel;           // echelonized relation rows over grid columns
};

// Principal parts of theta-decomposed holomorphic Jacobi forms of weight
// jacobi_weight_for(tw, P) and index m, divided by Delta^P, restricted to the
// flavor's coordinate slots.  Every row annihilates the corresponding
// holomorphic space.
RelationSpace obstruction_space(TargetWeight tw, long m, long P, Flavor flavor, JacobiEngine& eng);

struct FunctionalBasis {
  long m = 1;
  TargetWeight tw = TargetWeight::W21_2;
  Flavor flavor = Flavor::SingZeroBar;
  long window = 4;
  long stabilized_P = 0;
  std::vector<Slot> grid;               // ascending priority, |n| <= window
  std::vector<std::size_t> free_idx;    // positions in grid, ascending priority
  RatMatrix dep;                        // grid.size() x free_idx.size()

  std::size_t dim() const { return free_idx.size(); }
  std::optional<std::size_t> slot_index(long gamma, const Rat& n) const;
  // coordinates of c_{gamma,n} over the free functionals
  std::vector<Rat> express(long gamma, const Rat& n) const;
};

// Iterates the pole order until the free set and the dependency rows on the
// requested window stop changing (three consecutive agreements, never before
// the pole order reaches the window depth).
FunctionalBasis stabilized_functional_basis(TargetWeight tw, long m, Flavor flavor, long window,
                                            JacobiEngine& eng);

// q-precision policy for the Jacobi bases feeding pole order P at index m.
inline long jacobi_prec_for(long m, long P) { return (m + 3) / 4 + P + 2; }

}  // namespace k3
