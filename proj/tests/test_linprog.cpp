#include "birkhoff/linprog.hpp"
#include "doctest.h"

using namespace birkhoff;

TEST_SUITE_BEGIN("linprog");

TEST_CASE("basic maximize") {
  // max x1 + x2 s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
  LpProblem p;
  p.n_vars = 4;
  p.rows = {{1, 2, 1, 0}, {3, 1, 0, 1}};
  p.rhs = {4, 6};
  p.objective = {1, 1, 0, 0};
  p.maximize = true;
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.8).epsilon(1e-9));  // x = (1.6, 1.2)
}

TEST_CASE("infeasible detected") {
  LpProblem p;
  p.n_vars = 1;
  p.rows = {{1}, {1}};
  p.rhs = {1, 2};
  const LpResult r = solve_lp(p);
  CHECK(r.status == LpStatus::Infeasible);
}

TEST_CASE("negative rhs handled") {
  LpProblem p;
  p.n_vars = 2;
  p.rows = {{-1, 1}};
  p.rhs = {-2};  // x1 - x2 = 2
  p.objective = {0, 1};
  p.maximize = false;
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.x[0] == doctest::Approx(2.0));
}

TEST_CASE("unbounded detected") {
  LpProblem p;
  p.n_vars = 2;
  p.rows = {{1, -1}};
  p.rhs = {0};
  p.objective = {1, 0};
  p.maximize = true;
  CHECK(solve_lp(p).status == LpStatus::Unbounded);
}

TEST_CASE("redundant constraints tolerated") {
  LpProblem p;
  p.n_vars = 2;
  p.rows = {{1, 1}, {2, 2}, {1, 0}};
  p.rhs = {1, 2, 0.25};
  p.objective = {0, 1};
  p.maximize = true;
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_SUITE_END();
