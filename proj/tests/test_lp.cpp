#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "lp.hpp"

using namespace k3;

namespace {

LPProblem one_var() {
  LPProblem p;
  p.objective = {rat(1)};
  return p;
}

}  // namespace

TEST_CASE("lp basics") {
  LPProblem p = one_var();
  p.maximize = true;
  p.add_row({rat(1)}, Rel::LE, rat(3));
  p.lower = {rat(0)};
  LPResult r = lp_solve(p);
  CHECK(r.status == LPStatus::Optimal);
  CHECK(r.value == 3);
  CHECK(r.certified);

  LPProblem q = one_var();
  q.add_row({rat(1)}, Rel::GE, rat(1));
  q.add_row({rat(1)}, Rel::LE, rat(0));
  LPResult ri = lp_solve(q);
  CHECK(ri.status == LPStatus::Infeasible);
  CHECK(ri.certified);
  CHECK(lp_verify(q, ri));

  LPProblem e = one_var();
  e.add_row({rat(1)}, Rel::GE, rat(1, 3));
  e.add_row({rat(1)}, Rel::GE, rat(2, 7));
  LPResult re = lp_solve(e);
  CHECK(re.status == LPStatus::Optimal);
  CHECK(re.value == rat(1, 3));  // exactly, not 0.333...
}

TEST_CASE("lp unbounded below for a free variable") {
  LPProblem p = one_var();  // minimize x, x free
  p.add_row({rat(1)}, Rel::LE, rat(3));
  LPResult r = lp_solve(p);
  CHECK(r.status == LPStatus::Unbounded);
  CHECK(r.certified);
}

TEST_CASE("lp unbounded detection with a true ray") {
  LPProblem p;
  p.objective = {rat(-1), rat(0)};
  p.add_row({rat(1), rat(-1)}, Rel::LE, rat(2));
  p.lower = {rat(0), rat(0)};
  LPResult r = lp_solve(p);
  CHECK(r.status == LPStatus::Unbounded);
  CHECK(r.certified);
}

TEST_CASE("certificate tampering is caught by the verifier") {
  LPProblem p = one_var();
  p.maximize = true;
  p.add_row({rat(1)}, Rel::LE, rat(3));
  p.lower = {rat(0)};
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(lp_verify(p, r));
  LPResult bad = r;
  bad.value += 1;
  CHECK_FALSE(lp_verify(p, bad));
  LPResult bad2 = r;
  bad2.point[0] = rat(4);
  CHECK_FALSE(lp_verify(p, bad2));
}

TEST_CASE("ilp basics") {
  LPProblem p = one_var();
  p.add_row({rat(1)}, Rel::GE, rat(3, 2));
  p.integral = {true};
  LPResult r = ilp_minimize(p);
  CHECK(r.status == LPStatus::Optimal);
  CHECK(r.value == 2);

  LPProblem q;
  q.objective = {rat(1), rat(1)};
  q.add_row({rat(1), rat(2)}, Rel::GE, rat(3));
  q.lower = {rat(0), rat(0)};
  q.integral = {true, true};
  LPResult s = ilp_minimize(q);
  CHECK(s.status == LPStatus::Optimal);
  CHECK(s.value == 2);
  // result never beats the root relaxation
  LPProblem relax = q;
  relax.integral.clear();
  CHECK(lp_solve(relax).value <= s.value);
}

TEST_CASE("ilp monotonicity under constraint removal") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-3, 3), rhs(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    LPProblem p;
    p.objective = {rat(1), rat(1)};
    p.lower = {rat(0), rat(0)};
    p.upper = {rat(10), rat(10)};
    p.integral = {true, true};
    for (int i = 0; i < 3; ++i)
      p.add_row({rat(coef(rng)), rat(coef(rng))}, Rel::GE, rat(-rhs(rng)));
    LPProblem fewer = p;
    fewer.rows.pop_back();
    fewer.rel.pop_back();
    fewer.rhs.pop_back();
    LPResult full = ilp_minimize(p), part = ilp_minimize(fewer);
    REQUIRE(full.status == LPStatus::Optimal);
    REQUIRE(part.status == LPStatus::Optimal);
    CHECK(part.value <= full.value);
  }
}

TEST_CASE("ilp enumerate") {
  LPProblem p = one_var();
  p.lower = {rat(0)};
  p.upper = {rat(2)};
  p.integral = {true};
  auto pts = ilp_enumerate(p);
  REQUIRE(pts.size() == 3);

  LPProblem empty = one_var();
  empty.add_row({rat(1)}, Rel::GE, rat(1));
  empty.add_row({rat(1)}, Rel::LE, rat(0));
  empty.integral = {true};
  CHECK(ilp_enumerate(empty).empty());

  LPProblem tri;
  tri.objective = {rat(0), rat(0)};
  tri.add_row({rat(1), rat(1)}, Rel::LE, rat(2));
  tri.lower = {rat(0), rat(0)};
  tri.integral = {true, true};
  auto t = ilp_enumerate(tri);
  CHECK(t.size() == 6);

  // row permutation leaves the count unchanged
  LPProblem tri2 = tri;
  tri2.add_row({rat(1), rat(0)}, Rel::LE, rat(2));
  LPProblem tri3 = tri2;
  std::swap(tri3.rows[0], tri3.rows[1]);
  std::swap(tri3.rel[0], tri3.rel[1]);
  std::swap(tri3.rhs[0], tri3.rhs[1]);
  CHECK(ilp_enumerate(tri2).size() == ilp_enumerate(tri3).size());
}

TEST_CASE("ilp budget error carries a valid bound") {
  LPProblem p;
  // a knapsack-ish problem with enough branching to exceed a tiny budget
  p.objective = {rat(1), rat(1), rat(1), rat(1)};
  for (int i = 0; i < 4; ++i) {
    std::vector<Rat> row(4, rat(0));
    row[i] = rat(2);
    p.add_row(row, Rel::GE, rat(1));
  }
  p.add_row({rat(3), rat(5), rat(7), rat(9)}, Rel::GE, rat(31));
  p.lower = {rat(0), rat(0), rat(0), rat(0)};
  p.integral = {true, true, true, true};
  LPResult full = ilp_minimize(p);
  REQUIRE(full.status == LPStatus::Optimal);
  try {
    ilp_minimize(p, 1);
    CHECK(false);
  } catch (const ilp_budget_error& e) {
    CHECK(e.best_bound <= full.value);
  }
}
