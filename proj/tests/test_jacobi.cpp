#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "obstruction.hpp"

using namespace k3;

namespace {

JacobiEngine eng{Parallel{2}};

// Independent oracle for the generators: brute-force integer theta sums,
// entirely separate from the production code path.
std::map<std::pair<long, long>, long> oracle_phi_m2(long nmax) {
  // -theta_1^2 = sum (-1)^{a+b} q^{(a^2+a+b^2+b)/2 + 1/4} z^{a+b+1}
  // eta^6 = q^{1/4} prod (1-q^n)^6
  // work with dense integer polynomials in q on the integer grid after the
  // q^{1/4} factors cancel
  long N = nmax + 2;
  std::map<std::pair<long, long>, long> num;  // (n, r) of -theta_1^2 / q^{1/4}
  for (long a = -2 * N; a <= 2 * N; ++a)
    for (long b = -2 * N; b <= 2 * N; ++b) {
      long n = (a * a + a + b * b + b) / 2;
      if (n > N) continue;
      num[{n, a + b + 1}] += ((a + b) % 2 == 0) ? 1 : -1;
    }
  // invert prod(1-q^k)^6 as a dense series
  std::vector<long> eta(N + 1, 0);
  eta[0] = 1;
  for (long k = 1; k <= N; ++k)
    for (int rep = 0; rep < 6; ++rep)
      for (long n = N; n >= k; --n) eta[n] -= eta[n - k];
  std::vector<long> inv(N + 1, 0);
  inv[0] = 1;
  for (long n = 1; n <= N; ++n) {
    long s = 0;
    for (long k = 1; k <= n; ++k) s += eta[k] * inv[n - k];
    inv[n] = -s;
  }
  std::map<std::pair<long, long>, long> out;
  for (auto& [nr, v] : num)
    for (long j = 0; nr.first + j <= nmax; ++j)
      if (v != 0 && inv[j] != 0) out[{nr.first + j, nr.second}] += v * inv[j];
  return out;
}

}  // namespace

TEST_CASE("weak jacobi generators match their defining expansions") {
  JacobiForm m2 = eng.phi_m2(4);
  CHECK(m2.coeff(0, 1) == 1);
  CHECK(m2.coeff(0, 0) == -2);
  CHECK(m2.coeff(0, 2) == 0);
  // q^1 term: -2z^2 + 8z - 12 + 8/z - 2/z^2
  CHECK(m2.coeff(1, 2) == -2);
  CHECK(m2.coeff(1, 1) == 8);
  CHECK(m2.coeff(1, 0) == -12);
  CHECK(m2.coeff(1, -1) == 8);
  CHECK(m2.coeff(1, -2) == -2);

  auto oracle = oracle_phi_m2(3);
  for (auto& [nr, v] : oracle) {
    if (nr.first > 3) continue;
    CHECK(m2.coeff(nr.first, nr.second) == v);
  }

  JacobiForm p0 = eng.phi_0(4);
  CHECK(p0.coeff(0, 1) == 1);
  CHECK(p0.coeff(0, 0) == 10);
  CHECK(p0.coeff(0, -1) == 1);
  // classical expansion: q-term is 10z^2 - 64z + 108 - 64/z + 10/z^2
  CHECK(p0.coeff(1, 2) == 10);
  CHECK(p0.coeff(1, 1) == -64);
  CHECK(p0.coeff(1, 0) == 108);

  for (auto& f : {m2, p0}) {
    f.check_class_function();
    for (auto& [n, row] : f.c)
      for (auto& [r, v] : row) CHECK(f.coeff(n, -r) == v);
  }
}

TEST_CASE("weak basis dimensions") {
  CHECK(eng.weak_basis(4, 1, 3).size() == 2);   // dim M_4 + dim M_6
  CHECK(eng.weak_basis(0, 1, 3).size() == 1);   // dim M_0 + dim M_2 = 1
  CHECK(eng.weak_basis(10, 1, 3).size() == 3);  // dim M_10 + dim M_12
}

TEST_CASE("theta decomposition") {
  JacobiForm p0 = eng.phi_0(4);
  VVForm vv = theta_decompose(p0);
  CHECK(vv.m == 1);
  CHECK(vv.component(0).coeff(rat(0)) == 10);
  auto lead = vv.component(1).min_exp();
  REQUIRE(lead.has_value());
  CHECK(*lead == rat(-1, 4));
  CHECK(vv.component(1).coeff(rat(-1, 4)) == 1);

  JacobiForm zero;
  zero.weight = 0;
  zero.index = 1;
  zero.prec = 3;
  VVForm zv = theta_decompose(zero);
  CHECK(zv.component(0).is_zero());
  CHECK(zv.component(1).is_zero());
}

TEST_CASE("holomorphic subspace dimensions and definitional recheck") {
  auto h4 = holomorphic_subspace(eng.weak_basis(4, 1, 4));
  CHECK(h4.size() == 1);
  auto h6 = holomorphic_subspace(eng.weak_basis(6, 1, 4));
  CHECK(h6.size() == 1);
  for (auto& f : h4) CHECK(f.max_negative_discriminant() == 0);

  // E_{4,1} up to scale: the holomorphic weight-4 index-1 form
  JacobiForm e41 = h4[0];
  Rat c00 = e41.coeff(0, 0);
  REQUIRE(c00 != 0);
  e41 = e41 * (1 / c00);
  CHECK(e41.coeff(1, 1) == 56);
  CHECK(e41.coeff(1, 0) == 126);
  CHECK(e41.coeff(2, 1) == 576);
}

TEST_CASE("delta multiply-divide roundtrip on a holomorphic form") {
  auto h6 = holomorphic_subspace(eng.weak_basis(6, 1, 6));
  REQUIRE(h6.size() == 1);
  QExp delta = delta_qexp(7);
  JacobiForm up = h6[0].mul_scalar_series(delta, 12);
  JacobiForm back = up.mul_scalar_series(delta.inverse(), -12);
  for (auto& [n, row] : back.c)
    for (auto& [r, v] : row) CHECK(v == h6[0].coeff(n, r));
}

TEST_CASE("pole-order-1 obstruction space at d=1 reproduces the Hodge row") {
  RelationSpace rs = obstruction_space(TargetWeight::W21_2, 1, 1, Flavor::SingZeroBar, eng);
  REQUIRE(rs.rel.rows() == 1);
  // the single relation, read over the grid, is 150 c_{0,0} + c_{0,-1} + 56 c_{1,-1/4}
  std::map<std::pair<long, long>, Rat> row;
  for (std::size_t j = 0; j < rs.grid.size(); ++j)
    row[{rs.grid[j].gamma, rs.grid[j].num}] = rs.rel.at(0, j);
  Rat scale = 1 / row.at({0, -4});  // normalize the (0,-1) slot
  CHECK(row.at({0, 0}) * scale == 150);
  CHECK(row.at({1, -1}) * scale == 56);
  // co-rank of the depth-1 grid equals dim AC(1) = 2
  CHECK(rs.grid.size() - rs.rel.rows() == 2);
}

TEST_CASE("stabilized functional basis at d=1 matches the worked example") {
  FunctionalBasis fb = stabilized_functional_basis(TargetWeight::W21_2, 1, Flavor::SingZeroBar, 4, eng);
  REQUIRE(fb.dim() == 2);
  CHECK(fb.grid[fb.free_idx[0]] == Slot{0, 0});
  CHECK(fb.grid[fb.free_idx[1]] == Slot{0, -4});
  auto dep = fb.express(1, rat(-1, 4));
  CHECK(dep[0] == rat(-75, 28));
  CHECK(dep[1] == rat(-1, 56));
  auto unit = fb.express(0, rat(-1));
  CHECK(unit[0] == 0);
  CHECK(unit[1] == 1);

  // re-running with a wider window preserves the free set and dependencies
  FunctionalBasis fb5 = stabilized_functional_basis(TargetWeight::W21_2, 1, Flavor::SingZeroBar, 5, eng);
  CHECK(fb5.dim() == 2);
  CHECK(fb5.grid[fb5.free_idx[0]] == Slot{0, 0});
  CHECK(fb5.grid[fb5.free_idx[1]] == Slot{0, -4});
  CHECK(fb5.express(1, rat(-1, 4)) == dep);
}

TEST_CASE("ghost-side obstruction rows annihilate the E8+E8+A1 theta vector") {
  // theta coefficients of E8 + E8 + A1 at the grid slots, from the classical
  // counts: component 0 is E4^2 * theta_{A1,0}, component 1 is E4^2 * theta_{A1,1}
  RelationSpace rs = obstruction_space(TargetWeight::W17_2, 1, 2, Flavor::SingZeroBar, eng);
  REQUIRE(rs.rel.rows() >= 1);
  QExp e42 = eisenstein_qexp(4, 4).pow(2);
  auto theta_at = [&](long gamma, long num) -> Rat {
    Rat n = rat(-num, 4);  // coefficient index |n|
    if (gamma == 0) {
      // theta_{A1},0 = 1 + 2q + 2q^4 + ...
      Rat tot = 0;
      for (long j = -3; j <= 3; ++j) {
        Rat rem = n - j * j;
        if (rem < 0 || !is_integer(rem)) continue;
        tot += e42.coeff(rem);
      }
      return tot;
    }
    Rat tot = 0;
    for (long j = -7; j <= 7; j += 2) {  // odd j: exponents j^2/4
      Rat rem = n - rat(j * j, 4);
      if (rem < 0 || !is_integer(rem)) continue;
      tot += e42.coeff(rem);
    }
    return tot;
  };
  for (std::size_t i = 0; i < rs.rel.rows(); ++i) {
    Rat pair = 0;
    for (std::size_t j = 0; j < rs.grid.size(); ++j)
      pair += rs.rel.at(i, j) * theta_at(rs.grid[j].gamma, rs.grid[j].num);
    CHECK(pair == 0);
  }
}
