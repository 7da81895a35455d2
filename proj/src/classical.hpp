#pragma once

#include "qexp.hpp"

namespace k3 {

// Level-1 machinery: Eisenstein series, the discriminant form, and the
// monomial bases E4^a E6^b of M_k.  All expansions live on the integer grid.

// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for k in {2,4,6}.
QExp eisenstein_qexp(int k, long prec);

// Delta = q prod (1-q^n)^24, cross-checked against (E4^3-E6^2)/1728.
QExp delta_qexp(long prec);

// Euler's product prod_{n>=1} (1-q^n) via the pentagonal number expansion.
QExp euler_product(long prec);

struct ClassicalForm {
  int weight = 0;
  QExp expansion;
};

// Monomials E4^a E6^b with 4a+6b = k, in decreasing a.  Linearly independent,
// spanning M_k.
std::vector<ClassicalForm> mform_basis(int k, long prec);

// dim M_k for even k >= 0 by the classical formula (cross-check target).
long mform_dim(int k);

}  // namespace k3
