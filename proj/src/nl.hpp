#pragma once

#include "heegner.hpp"

namespace k3 {

// 2d-polarised even hyperbolic rank-2 lattice class, keyed by discriminant
// Delta > 0 and coset delta in (Z/2dZ)/± (representative 0..d); exists iff
// Delta === delta^2 (mod 4d).
struct RankTwoClass {
  long d = 1;
  long delta_disc = 1;  // Delta
  long delta_coset = 0; // delta representative in [0, d]

  bool operator<(const RankTwoClass& o) const {
    if (delta_disc != o.delta_disc) return delta_disc < o.delta_disc;
    return delta_coset < o.delta_coset;
  }
  bool operator==(const RankTwoClass& o) const {
    return d == o.d && delta_disc == o.delta_disc && delta_coset == o.delta_coset;
  }
};

bool class_exists(long d, long disc, long coset);

// Gram model [[2d, y], [y, 2x]] with y the least nonnegative coset
// representative and x = (y^2 - Delta)/4d.
struct RankTwoGram {
  long d, y;
  Int x2;  // 2x
};
RankTwoGram gram_model(const RankTwoClass& cls);

// number of beta = sH + t*Gamma with beta^2 = 2h-2, beta.H = a, t != 0
long count_vectors(const RankTwoClass& cls, long h, long a);

// multiplicities of the irreducible classes inside D_{h,a}
std::map<RankTwoClass, long> decompose_D(long d, long h, long a);

// [P_{Delta,delta}] as an exact combination of Heegner indices, by triangular
// inversion of decompose_D along increasing discriminant
DivisorClass p_in_terms_of_H(long d, long disc, long coset, long window);

}  // namespace k3
