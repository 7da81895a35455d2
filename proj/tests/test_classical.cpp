#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "classical.hpp"

using namespace k3;

namespace {

long sigma(long n, int k) {
  long s = 0;
  for (long d = 1; d <= n; ++d) {
    if (n % d) continue;
    long p = 1;
    for (int i = 0; i < k; ++i) p *= d;
    s += p;
  }
  return s;
}

}  // namespace

TEST_CASE("eisenstein expansions match divisor sums") {
  QExp e2 = eisenstein_qexp(2, 3);
  CHECK(e2.coeff(rat(0)) == 1);
  CHECK(e2.coeff(rat(1)) == -24);
  CHECK(e2.coeff(rat(2)) == -72);
  CHECK(sigma(2, 1) == 3);

  QExp e4 = eisenstein_qexp(4, 3);
  CHECK(e4.coeff(rat(1)) == 240);
  CHECK(e4.coeff(rat(2)) == 2160);
  CHECK(240 * sigma(2, 3) == 2160);

  QExp e6 = eisenstein_qexp(6, 2);
  CHECK(e6.coeff(rat(1)) == -504);

  for (long n = 1; n < 8; ++n) {
    QExp e = eisenstein_qexp(2, 9);
    CHECK(e.coeff(rat(n)) == rat(-24 * sigma(n, 1)));
  }
  CHECK_THROWS_AS(eisenstein_qexp(8, 4), math_error);
}

TEST_CASE("delta expansion") {
  QExp d = delta_qexp(5);
  CHECK(d.coeff(rat(0)) == 0);
  CHECK(d.coeff(rat(1)) == 1);
  CHECK(d.coeff(rat(2)) == -24);
  CHECK(d.coeff(rat(3)) == 252);
  CHECK(d.coeff(rat(4)) == -1472);

  QExp inv = d.inverse();
  QExp prod = d * inv;
  CHECK(prod.coeff(rat(0)) == 1);
  for (long n = 1; n < 3; ++n) CHECK(prod.coeff(rat(n)) == 0);
}

TEST_CASE("E4^3 - E6^2 normalization") {
  QExp e4 = eisenstein_qexp(4, 3), e6 = eisenstein_qexp(6, 3);
  QExp c = e4.pow(3) - e6.pow(2);
  CHECK(c.coeff(rat(0)) == 0);
  CHECK(c.coeff(rat(1)) == 1728);
}

TEST_CASE("monomial basis of M_k") {
  auto b0 = mform_basis(0, 3);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].expansion.coeff(rat(0)) == 1);

  CHECK(mform_basis(12, 3).size() == 2);
  CHECK(mform_basis(10, 3).size() == 1);
  CHECK(mform_basis(2, 3).empty());
  CHECK_THROWS_AS(mform_basis(7, 3), math_error);

  for (int k = 0; k <= 60; k += 2) CHECK((long)mform_basis(k, 2).size() == mform_dim(k));
}
