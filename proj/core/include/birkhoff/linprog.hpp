#pragma once

#include <vector>

namespace birkhoff {

// Small dense two-phase primal simplex for standard-form problems
//    optimize c.x  subject to  A x = b,  x >= 0,
// with Bland's rule (deterministic, cycle-free). Sized for the moment
// polytopes that show up here: a few thousand variables, ~100 rows.
struct LpProblem {
  int n_vars = 0;
  std::vector<std::vector<double>> rows;  // each of size n_vars
  std::vector<double> rhs;                // same length as rows
  std::vector<double> objective;          // size n_vars; empty = feasibility
  bool maximize = true;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const LpProblem& p);

}  // namespace birkhoff
