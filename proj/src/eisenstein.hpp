#pragma once

#include "heegner.hpp"

namespace k3 {

// Sign of deg(K°) computed through the coefficients of the weight-21/2
// Eisenstein series at the standard cusp.
int eisenstein_degree_sign(long d, const DivisorClass& branch, JacobiEngine& eng);

// coefficient c_{gamma,n}(E_0) of the normalized Eisenstein series, n >= 0
Rat eisenstein_coefficient(long d, long gamma, const Rat& n);

}  // namespace k3
