#include "birkhoff/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace birkhoff {

namespace {

constexpr double kEps = 1e-10;

// Dense tableau simplex on equality form with an existing basic feasible
// basis. basis[r] = column index of the basic variable of row r.
// Returns false on unbounded.
bool simplex_iterate(std::vector<std::vector<double>>& T, std::vector<double>& rhs,
                     std::vector<double>& cost, double& obj, std::vector<int>& basis) {
  const int m = static_cast<int>(T.size());
  const int n = m ? static_cast<int>(T[0].size()) : 0;
  for (long guard = 0; guard < 200000; ++guard) {
    // Bland: entering = smallest index with positive reduced cost (maximize)
    int enter = -1;
    for (int j = 0; j < n; ++j)
      if (cost[j] > kEps) {
        enter = j;
        break;
      }
    if (enter < 0) return true;  // optimal
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < m; ++r) {
      if (T[r][enter] > kEps) {
        const double ratio = rhs[r] / T[r][enter];
        if (leave < 0 || ratio < best - kEps ||
            (ratio < best + kEps && basis[r] < basis[leave]))
          leave = r, best = ratio;
      }
    }
    if (leave < 0) return false;  // unbounded
    // pivot
    const double piv = T[leave][enter];
    for (int j = 0; j < n; ++j) T[leave][j] /= piv;
    rhs[leave] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double f = T[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) T[r][j] -= f * T[leave][j];
      rhs[r] -= f * rhs[leave];
      if (rhs[r] < 0.0 && rhs[r] > -kEps) rhs[r] = 0.0;
    }
    const double fc = cost[enter];
    for (int j = 0; j < n; ++j) cost[j] -= fc * T[leave][j];
    obj += fc * rhs[leave];
    basis[leave] = enter;
  }
  throw std::runtime_error("solve_lp: iteration guard exceeded");
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = p.n_vars;
  // Phase 1: minimize sum of artificials, with rhs made nonnegative.
  std::vector<std::vector<double>> T(m, std::vector<double>(n + m, 0.0));
  std::vector<double> rhs(m);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const double sgn = p.rhs[r] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) T[r][j] = sgn * p.rows[r][j];
    rhs[r] = sgn * p.rhs[r];
    T[r][n + r] = 1.0;
    basis[r] = n + r;
  }
  // phase-1 cost: maximize -(sum artificials) => reduced cost of column j is
  // sum of rows (artificials basic)
  std::vector<double> cost(n + m, 0.0);
  double obj = 0.0;
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) cost[j] += T[r][j];
    obj -= rhs[r];
  }
  for (int r = 0; r < m; ++r) cost[n + r] = 0.0;
  if (!simplex_iterate(T, rhs, cost, obj, basis))
    throw std::runtime_error("solve_lp: phase 1 unbounded (internal)");
  if (obj < -1e-7) return {LpStatus::Infeasible, 0.0, {}};

  // Drive artificials out of the basis where possible; rows that cannot be
  // pivoted are redundant and dropped.
  std::vector<int> keep;
  for (int r = 0; r < m; ++r) {
    if (basis[r] < n) {
      keep.push_back(r);
      continue;
    }
    int piv = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(T[r][j]) > 1e-8) {
        piv = j;
        break;
      }
    if (piv < 0) continue;  // redundant constraint
    const double pv = T[r][piv];
    for (int j = 0; j < n + m; ++j) T[r][j] /= pv;
    rhs[r] /= pv;
    for (int r2 = 0; r2 < m; ++r2) {
      if (r2 == r) continue;
      const double f = T[r2][piv];
      if (f == 0.0) continue;
      for (int j = 0; j < n + m; ++j) T[r2][j] -= f * T[r][j];
      rhs[r2] -= f * rhs[r];
    }
    basis[r] = piv;
    keep.push_back(r);
  }

  std::vector<std::vector<double>> T2;
  std::vector<double> rhs2;
  std::vector<int> basis2;
  for (int r : keep) {
    std::vector<double> row(T[r].begin(), T[r].begin() + n);
    T2.push_back(std::move(row));
    rhs2.push_back(std::max(rhs[r], 0.0));
    basis2.push_back(basis[r]);
  }

  // Phase 2.
  std::vector<double> cost2(n, 0.0);
  double sign = p.maximize ? 1.0 : -1.0;
  if (!p.objective.empty())
    for (int j = 0; j < n; ++j) cost2[j] = sign * p.objective[j];
  double obj2 = 0.0;
  // express cost in terms of nonbasic variables
  for (std::size_t r = 0; r < T2.size(); ++r) {
    const double cb = cost2[basis2[r]];
    if (cb == 0.0) continue;
    for (int j = 0; j < n; ++j) cost2[j] -= cb * T2[r][j];
    obj2 += cb * rhs2[r];
  }
  for (std::size_t r = 0; r < T2.size(); ++r) cost2[basis2[r]] = 0.0;
  if (!simplex_iterate(T2, rhs2, cost2, obj2, basis2))
    return {LpStatus::Unbounded, 0.0, {}};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.objective = sign * obj2;
  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < T2.size(); ++r) res.x[basis2[r]] = rhs2[r];
  return res;
}

}  // namespace birkhoff
