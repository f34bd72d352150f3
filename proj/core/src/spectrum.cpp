#include "birkhoff/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "birkhoff/linprog.hpp"
#include "birkhoff/thermo.hpp"
#include "birkhoff/transfer.hpp"

namespace birkhoff {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMassTol = 1e-7;

struct Ctx {
  std::shared_ptr<const FiniteSubshift> shift;
  std::vector<Symbol> labels;
  int k = 0;
  std::size_t R = 0;
  std::vector<std::vector<double>> phi;  // per potential, dense k*k edge coefficients
  std::vector<double> ell_lo, ell_hi;    // dense k*k edge log-derivative data
  bool bracketed = false;
  bool full_shift = false;
  bool full_diagonal = false;

  // When every potential is either a one-state indicator or identically
  // zero on this truncation and the indicators cover all states, the moment
  // constraints pin the state marginals; state_of_potential[r] is the
  // pinned state or -1 for a zero potential.
  bool marginals_pinned = false;
  std::vector<int> state_of_potential;

  std::size_t e(int i, int j) const { return static_cast<std::size_t>(i) * k + j; }
};

Ctx build_ctx(const MapSystem& map, const std::vector<Potential>& potentials, int k_trunc,
              int geometry_order) {
  Ctx c;
  Truncation tr = map.derive_truncation(k_trunc);
  c.k = tr.shift.k;
  c.labels = tr.labels;
  c.shift = std::make_shared<FiniteSubshift>(std::move(tr.shift));
  c.R = potentials.size();
  const int k = c.k;

  Word w1(1), w2(2);
  for (const Potential& f : potentials) {
    if (f.order() > 2)
      throw std::invalid_argument(
          "spectrum: potentials above order 2 must be recoded to the block shift first");
    std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        if (!c.shift->allows(i + 1, j + 1)) continue;
        if (f.order() == 1) {
          w1[0] = c.labels[i];
          m[c.e(i, j)] = f(w1);
        } else {
          w2[0] = c.labels[i];
          w2[1] = c.labels[j];
          m[c.e(i, j)] = f(w2);
        }
      }
    c.phi.push_back(std::move(m));
  }

  c.ell_lo.assign(static_cast<std::size_t>(k) * k, 0.0);
  c.ell_hi = c.ell_lo;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (!c.shift->allows(i + 1, j + 1)) continue;
      double lo, hi;
      if (map.locally_constant_derivative()) {
        lo = hi = map.branch_inf_log_deriv(c.labels[i]);
      } else if (geometry_order >= 2) {
        Word w{c.labels[i], c.labels[j]};
        std::tie(lo, hi) = map.log_deriv_range(w);
      } else {
        lo = map.branch_inf_log_deriv(c.labels[i]);
        hi = map.branch_sup_log_deriv(c.labels[i]);
      }
      c.ell_lo[c.e(i, j)] = lo;
      c.ell_hi[c.e(i, j)] = hi;
      if (hi != lo) c.bracketed = true;
    }

  c.full_shift = std::all_of(c.shift->a.begin(), c.shift->a.end(),
                             [](std::uint8_t v) { return v != 0; });
  c.full_diagonal = true;
  for (int i = 0; i < k; ++i) c.full_diagonal = c.full_diagonal && c.shift->allows(i + 1, i + 1);

  // indicator structure
  c.state_of_potential.assign(c.R, -1);
  std::vector<int> covered(k, 0);
  bool pinned = true;
  for (std::size_t r = 0; r < c.R && pinned; ++r) {
    int state = -1;
    bool zero = true, indicator = true;
    for (int i = 0; i < k && indicator; ++i) {
      double row_val = kNaN;
      bool has_edge = false;
      for (int j = 0; j < k; ++j) {
        if (!c.shift->allows(i + 1, j + 1)) continue;
        const double v = c.phi[r][c.e(i, j)];
        if (!has_edge) {
          row_val = v;
          has_edge = true;
        } else if (v != row_val) {
          indicator = false;  // not a function of the source state
          break;
        }
      }
      if (!has_edge) continue;
      if (row_val != 0.0) {
        zero = false;
        if (row_val != 1.0 || state >= 0)
          indicator = false;
        else
          state = i;
      }
    }
    if (!indicator) {
      pinned = false;
    } else if (!zero) {
      c.state_of_potential[r] = state;
      covered[state] += 1;
    }
  }
  if (pinned)
    for (int i = 0; i < k; ++i) pinned = pinned && covered[i] == 1;
  c.marginals_pinned = pinned;
  return c;
}

// Marginal targets for a pinned context; nullopt when a zero-on-truncation
// potential carries a nonzero target (infeasible).
std::optional<std::vector<double>> pinned_targets(const Ctx& c, const std::vector<double>& g) {
  std::vector<double> p(c.k, 0.0);
  for (std::size_t r = 0; r < c.R; ++r) {
    if (c.state_of_potential[r] < 0) {
      if (std::abs(g[r]) > 1e-12) return std::nullopt;
    } else {
      p[c.state_of_potential[r]] = g[r];
    }
  }
  for (double v : p)
    if (v < -1e-12) return std::nullopt;
  return p;
}

// ---- LP layer ----------------------------------------------------------

std::vector<std::pair<int, int>> edge_list(const Ctx& c) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < c.k; ++i)
    for (int j = 0; j < c.k; ++j)
      if (c.shift->allows(i + 1, j + 1)) edges.push_back({i, j});
  return edges;
}

// Edge-mass polytope: balance rows, moment rows with raw targets, and
// either a fixed total mass or the sub-probability cap (mass + slack = 1).
LpProblem moment_polytope_lp(const Ctx& c, const std::vector<double>& raw_gamma,
                             const std::vector<std::pair<int, int>>& edges,
                             std::optional<double> fixed_mass) {
  const int ne = static_cast<int>(edges.size());
  LpProblem p;
  p.n_vars = ne + 1;  // + slack for the mass cap
  auto add_row = [&](std::vector<double> row, double rhs) {
    p.rows.push_back(std::move(row));
    p.rhs.push_back(rhs);
  };
  for (int s = 0; s < c.k; ++s) {
    std::vector<double> row(p.n_vars, 0.0);
    bool any = false;
    for (int e = 0; e < ne; ++e) {
      double coef = 0.0;
      if (edges[e].first == s) coef += 1.0;
      if (edges[e].second == s) coef -= 1.0;
      if (coef != 0.0) {
        row[e] = coef;
        any = true;
      }
    }
    if (any) add_row(std::move(row), 0.0);
  }
  for (std::size_t r = 0; r < c.R; ++r) {
    std::vector<double> row(p.n_vars, 0.0);
    for (int e = 0; e < ne; ++e) row[e] = c.phi[r][c.e(edges[e].first, edges[e].second)];
    add_row(std::move(row), raw_gamma[r]);
  }
  {
    std::vector<double> row(p.n_vars, 1.0);
    if (fixed_mass) {
      row[ne] = 0.0;
      add_row(std::move(row), *fixed_mass);
    } else {
      row[ne] = 1.0;
      add_row(std::move(row), 1.0);
    }
  }
  return p;
}

std::optional<std::pair<double, double>> mass_range(const Ctx& c,
                                                    const std::vector<double>& gamma) {
  if (c.marginals_pinned && (c.full_shift || c.full_diagonal)) {
    // self-loops at every state realize any nonnegative marginal vector
    const auto p = pinned_targets(c, gamma);
    if (!p) return std::nullopt;
    const double s = std::accumulate(p->begin(), p->end(), 0.0);
    if (s > 1.0 + kMassTol) return std::nullopt;
    return std::make_pair(s, s);
  }
  const auto edges = edge_list(c);
  if (edges.size() > 20000)
    throw std::runtime_error("spectrum: truncation too large for the feasibility LP");
  LpProblem base = moment_polytope_lp(c, gamma, edges, std::nullopt);
  base.objective.assign(base.n_vars, 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) base.objective[e] = 1.0;
  base.maximize = false;
  LpResult lo = solve_lp(base);
  if (lo.status != LpStatus::Optimal) return std::nullopt;
  base.maximize = true;
  LpResult hi = solve_lp(base);
  if (hi.status != LpStatus::Optimal) return std::nullopt;
  return std::make_pair(std::max(0.0, lo.objective), std::min(1.0, hi.objective));
}

// ---- Gibbs / Newton layer ----------------------------------------------

struct GibbsEval {
  PerronData pd;
  double log_rho = 0.0;
  double h = 0.0;
  double lambda = 0.0;
  std::vector<double> mom;
  StochasticRows rows;
  std::vector<double> pi;
};

GibbsEval gibbs_eval(const Ctx& c, const std::vector<double>& ell,
                     const std::vector<double>& q, double t, const PerronData* warm) {
  const int k = c.k;
  std::vector<double> logw(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const std::size_t e = c.e(i, j);
      if (!c.shift->allows(i + 1, j + 1)) continue;
      double g = -t * ell[e];
      for (std::size_t r = 0; r < c.R; ++r)
        if (q[r] != 0.0) g += q[r] * c.phi[r][e];
      logw[e] = g;
    }
  GibbsEval ev;
  ev.pd = perron(*c.shift, logw, 1e-13, warm);
  ev.log_rho = ev.pd.log_root;
  ev.rows.resize(k);
  ev.pi.resize(k);
  double tot = 0.0;
  for (int i = 0; i < k; ++i) {
    ev.pi[i] = ev.pd.left[i] * ev.pd.right[i];
    tot += ev.pi[i];
  }
  for (auto& p : ev.pi) p /= tot;
  ev.mom.assign(c.R, 0.0);
  for (int i = 0; i < k; ++i) {
    double rs = 0.0;
    for (int j = 0; j < k; ++j) {
      const std::size_t e = c.e(i, j);
      if (!c.shift->allows(i + 1, j + 1)) continue;
      const double p = std::exp(logw[e] - ev.log_rho) * ev.pd.right[j] / ev.pd.right[i];
      if (p > 0.0) ev.rows[i].push_back({j, p});
      rs += p;
    }
    for (auto& ent : ev.rows[i]) ent.second /= rs;
  }
  for (int i = 0; i < k; ++i)
    for (auto [j, p] : ev.rows[i]) {
      const std::size_t e = c.e(i, j);
      const double x = ev.pi[i] * p;
      if (p > 0.0) ev.h -= x * std::log(p);
      ev.lambda += x * ell[e];
      for (std::size_t r = 0; r < c.R; ++r) ev.mom[r] += x * c.phi[r][e];
    }
  return ev;
}

MarkovMeasure measure_from_eval(const Ctx& c, const GibbsEval& ev) {
  MarkovMeasure m;
  m.k = c.k;
  m.rows = ev.rows;
  m.pi = ev.pi;
  m.subshift = c.shift;
  m.labels = c.labels;
  return m;
}

bool solve_dense(std::vector<std::vector<double>> A, std::vector<double> b,
                 std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-300) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (int cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int cc = r + 1; cc < n; ++cc) acc -= A[r][cc] * x[cc];
    x[r] = acc / A[r][r];
  }
  return true;
}

struct InnerResult {
  bool ok = false;
  GibbsEval ev;
  std::vector<double> q;
  int iterations = 0;
  double moment_residual = std::numeric_limits<double>::infinity();
};

// Minimize the convex dual G(q) = log rho(t, q) - q . gamma; its gradient
// is the moment mismatch of the Gibbs measure.
InnerResult solve_moments(const Ctx& c, const std::vector<double>& ell,
                          const std::vector<double>& gamma, double t,
                          std::vector<double> q0, const SolverOptions& opts,
                          PerronData* warm_io) {
  InnerResult res;
  res.q = std::move(q0);
  const std::size_t R = c.R;
  auto Gval = [&](const GibbsEval& ev, const std::vector<double>& q) {
    double g = ev.log_rho;
    for (std::size_t r = 0; r < R; ++r) g -= q[r] * gamma[r];
    return g;
  };
  GibbsEval ev = gibbs_eval(c, ell, res.q, t, warm_io);
  for (int it = 0; it < opts.max_newton; ++it) {
    res.iterations = it;
    std::vector<double> grad(R);
    double gi = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      grad[r] = ev.mom[r] - gamma[r];
      gi = std::max(gi, std::abs(grad[r]));
    }
    res.moment_residual = gi;
    if (gi <= 0.5 * opts.moment_tol) {
      res.ok = true;
      break;
    }
    std::vector<std::vector<double>> H(R, std::vector<double>(R, 0.0));
    for (std::size_t r = 0; r < R; ++r) {
      const double step = 1e-6 * std::max(1.0, std::abs(res.q[r]));
      std::vector<double> qp = res.q;
      qp[r] += step;
      GibbsEval evp = gibbs_eval(c, ell, qp, t, &ev.pd);
      for (std::size_t s = 0; s < R; ++s) H[s][r] = (evp.mom[s] - ev.mom[s]) / step;
    }
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t s = r + 1; s < R; ++s) {
        const double v = 0.5 * (H[r][s] + H[s][r]);
        H[r][s] = H[s][r] = v;
      }
    double ridge = 1e-12;
    std::vector<double> step;
    bool moved = false;
    const double g0 = Gval(ev, res.q);
    for (int attempt = 0; attempt < 8 && !moved; ++attempt) {
      auto Hr = H;
      for (std::size_t r = 0; r < R; ++r) Hr[r][r] += ridge;
      if (!solve_dense(Hr, grad, step)) {
        ridge = std::max(ridge * 100.0, 1e-8);
        continue;
      }
      double alpha = 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        std::vector<double> qn = res.q;
        double qmax = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          qn[r] -= alpha * step[r];
          qmax = std::max(qmax, std::abs(qn[r]));
        }
        if (qmax > 400.0) {
          alpha *= 0.5;
          continue;
        }
        GibbsEval evn = gibbs_eval(c, ell, qn, t, &ev.pd);
        if (Gval(evn, qn) <= g0 - 1e-15) {
          res.q = std::move(qn);
          ev = std::move(evn);
          moved = true;
          break;
        }
        alpha *= 0.5;
        if (alpha < 1e-8) break;
      }
      if (!moved) ridge = std::max(ridge * 100.0, 1e-8);
    }
    if (!moved) break;  // boundary of the moment polytope
  }
  if (warm_io) *warm_io = ev.pd;
  if (res.moment_residual <= opts.moment_tol) res.ok = true;
  res.ev = std::move(ev);
  return res;
}

// Max-entropy chain with both marginals pinned to p: iterative proportional
// fitting of the support pattern. This is the Gibbs solution of the
// all-indicator constraint set without a k-dimensional Newton run.
struct SinkhornResult {
  bool ok = false;
  std::vector<double> edge_mass;  // dense k*k, sums to 1
  double residual = std::numeric_limits<double>::infinity();
};

SinkhornResult sinkhorn_marginals(const Ctx& c, const std::vector<double>& p) {
  const int k = c.k;
  SinkhornResult out;
  std::vector<int> active;
  for (int i = 0; i < k; ++i)
    if (p[i] > 1e-15) active.push_back(i);
  if (active.empty()) return out;
  const std::size_t na = active.size();
  std::vector<double> a(na, 1.0), b(na, 1.0);
  std::vector<std::uint8_t> adm(na * na);
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t jb = 0; jb < na; ++jb)
      adm[ia * na + jb] = c.shift->allows(active[ia] + 1, active[jb] + 1) ? 1 : 0;
  double res = std::numeric_limits<double>::infinity();
  for (long it = 0; it < 200000; ++it) {
    for (std::size_t ia = 0; ia < na; ++ia) {
      double s = 0.0;
      for (std::size_t jb = 0; jb < na; ++jb)
        if (adm[ia * na + jb]) s += b[jb];
      if (s <= 0.0) return out;
      a[ia] = p[active[ia]] / s;
    }
    res = 0.0;
    for (std::size_t jb = 0; jb < na; ++jb) {
      double s = 0.0;
      for (std::size_t ia = 0; ia < na; ++ia)
        if (adm[ia * na + jb]) s += a[ia];
      if (s <= 0.0) return out;
      const double target = p[active[jb]];
      res = std::max(res, std::abs(s * b[jb] - target));
      b[jb] = target / s;
    }
    if (res <= 1e-13) break;
  }
  if (res > 1e-9) return out;  // degenerate support; caller falls back
  out.ok = true;
  out.residual = res;
  out.edge_mass.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t jb = 0; jb < na; ++jb)
      if (adm[ia * na + jb]) out.edge_mass[c.e(active[ia], active[jb])] = a[ia] * b[jb];
  return out;
}

struct RatioSolve {
  bool ok = false;
  double value = kNaN;
  double t_star = kNaN;
  double h = kNaN, lambda = kNaN;
  std::vector<double> q;
  double dinkelbach_residual = kNaN;
  double moment_residual = kNaN;
  int dinkelbach_iterations = 0;
  MarkovMeasure measure;
  std::vector<std::string> flags;
};

// Exact-constraint candidates from LP vertices; used when the moment targets
// sit on the boundary of the polytope and the multiplier iteration diverges.
// raw_gamma are the unnormalized moments (total mass c_mass).
RatioSolve vertex_fallback(const Ctx& c, const std::vector<double>& ell,
                           const std::vector<double>& raw_gamma, double c_mass,
                           double num_tail, double den_tail) {
  RatioSolve out;
  const auto edges = edge_list(c);
  if (edges.size() > 20000 || c_mass <= 0.0) return out;
  std::vector<std::vector<double>> objectives;
  {
    std::vector<double> o(edges.size() + 1, 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e)
      o[e] = ell[c.e(edges[e].first, edges[e].second)];
    objectives.push_back(o);
    for (auto& v : o) v = -v;
    objectives.push_back(std::move(o));
  }
  std::vector<std::vector<double>> xs;
  LpProblem base = moment_polytope_lp(c, raw_gamma, edges, c_mass);
  for (const auto& obj : objectives) {
    base.objective = obj;
    base.maximize = true;
    const LpResult r = solve_lp(base);
    if (r.status == LpStatus::Optimal) xs.push_back(r.x);
  }
  if (xs.empty()) return out;
  std::vector<double> blend(xs[0].size(), 0.0);
  for (const auto& x : xs)
    for (std::size_t e = 0; e < x.size(); ++e) blend[e] += x[e] / xs.size();
  xs.push_back(std::move(blend));

  for (const auto& x : xs) {
    std::vector<double> mass(static_cast<std::size_t>(c.k) * c.k, 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e)
      mass[c.e(edges[e].first, edges[e].second)] = std::max(0.0, x[e]);
    MarkovMeasure m;
    try {
      m = from_edge_weights(c.shift, mass, c.labels);
    } catch (const std::exception&) {
      continue;
    }
    const double h = entropy(m);
    double lam_raw = 0.0;
    for (std::size_t e = 0; e < mass.size(); ++e)
      if (mass[e] > 0.0) lam_raw += mass[e] * ell[e];
    const double lam = lam_raw / c_mass;
    const double value = (c_mass * h + num_tail) / (c_mass * lam + den_tail);
    if (!out.ok || value > out.value) {
      out.ok = true;
      out.value = value;
      out.h = h;
      out.lambda = lam;
      out.t_star = value;
      out.measure = m;
      out.moment_residual = 0.0;
      out.dinkelbach_residual =
          std::abs(c_mass * h + num_tail - value * (c_mass * lam + den_tail));
    }
  }
  if (out.ok) out.flags.push_back("dinkelbach_fallback_vertex_candidates");
  return out;
}

// Maximize (c h + num_tail) / (c lambda + den_tail) over probability
// measures with moments = gamma (already normalized by the mass).
RatioSolve ratio_solve(const Ctx& c, const std::vector<double>& ell,
                       const std::vector<double>& gamma, double c_mass, double num_tail,
                       double den_tail, const SolverOptions& opts) {
  std::vector<double> raw_gamma(gamma);
  for (auto& g : raw_gamma) g *= c_mass;

  if (c.marginals_pinned) {
    const auto targets = pinned_targets(c, gamma);
    if (targets) {
      SinkhornResult sk = sinkhorn_marginals(c, *targets);
      if (sk.ok) {
        RatioSolve out;
        try {
          out.measure = from_edge_weights(c.shift, sk.edge_mass, c.labels);
        } catch (const std::exception&) {
          return vertex_fallback(c, ell, raw_gamma, c_mass, num_tail, den_tail);
        }
        out.ok = true;
        out.h = entropy(out.measure);
        out.lambda = 0.0;
        for (std::size_t e = 0; e < sk.edge_mass.size(); ++e)
          if (sk.edge_mass[e] > 0.0) out.lambda += sk.edge_mass[e] * ell[e];
        out.value = (c_mass * out.h + num_tail) / (c_mass * out.lambda + den_tail);
        out.t_star = out.value;
        out.moment_residual = sk.residual;
        out.dinkelbach_residual = 0.0;
        out.flags.push_back("marginal_sinkhorn_path");
        return out;
      }
    }
    return vertex_fallback(c, ell, raw_gamma, c_mass, num_tail, den_tail);
  }

  std::vector<double> q(c.R, 0.0);
  if (opts.multiplier_seed != 0) {
    std::mt19937 rng(static_cast<std::uint32_t>(opts.multiplier_seed));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : q) v = u(rng);
  }
  RatioSolve out;
  double t = 0.5;
  PerronData warm;
  bool have_warm = false;
  InnerResult inner;
  for (int it = 0; it < opts.max_dinkelbach; ++it) {
    out.dinkelbach_iterations = it + 1;
    inner = solve_moments(c, ell, gamma, t, q, opts, have_warm ? &warm : nullptr);
    warm = inner.ev.pd;
    have_warm = true;
    q = inner.q;
    if (!inner.ok) break;
    const double num = c_mass * inner.ev.h + num_tail;
    const double den = c_mass * inner.ev.lambda + den_tail;
    const double t_new = num / den;
    if (std::abs(t_new - t) <= opts.dinkelbach_tol) {
      t = t_new;
      out.ok = true;
      break;
    }
    t = t_new;
  }
  if (out.ok) {
    out.value = t;
    out.t_star = t;
    out.h = inner.ev.h;
    out.lambda = inner.ev.lambda;
    out.q = q;
    out.moment_residual = inner.moment_residual;
    double resid = c_mass * (inner.ev.h - t * inner.ev.lambda) + num_tail - t * den_tail;
    for (std::size_t r = 0; r < c.R; ++r) resid += q[r] * (inner.ev.mom[r] - gamma[r]);
    out.dinkelbach_residual = std::abs(resid);
    out.measure = measure_from_eval(c, inner.ev);
    return out;
  }
  RatioSolve fb = vertex_fallback(c, ell, raw_gamma, c_mass, num_tail, den_tail);
  if (fb.ok) return fb;
  out.flags.push_back("inner solver failed and no feasible vertex candidates");
  return out;
}

std::vector<int> default_schedule(int k) {
  std::vector<int> ks{std::max(2, k / 4), std::max(2, k / 2), k};
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Z0:
      return "Z0";
    case Membership::ZminusZ0:
      return "Z_minus_Z0";
    case Membership::NotInZ:
      return "not_in_Z";
  }
  return "?";
}

std::optional<std::pair<double, double>> feasible_mass_range(const SpectrumQuery& q) {
  if (q.gamma.size() != q.potentials.size())
    throw std::invalid_argument("spectrum: gamma and potentials must have equal length");
  Ctx c = build_ctx(q.map, q.potentials, q.truncation_k, q.opts.geometry_order);
  return mass_range(c, q.gamma);
}

Membership membership(const SpectrumQuery& q) {
  const auto range = feasible_mass_range(q);
  if (!range) return Membership::NotInZ;
  if (range->second >= 1.0 - kMassTol) return Membership::Z0;
  return Membership::ZminusZ0;
}

SpectrumResult alpha3(const SpectrumQuery& q) {
  if (q.gamma.size() != q.potentials.size())
    throw std::invalid_argument("alpha3: gamma and potentials must have equal length");
  const Membership tag = membership(q);
  if (tag != Membership::Z0) {
    std::ostringstream os;
    os << "alpha3: gamma is not attainable by a probability measure on this truncation "
          "(membership = "
       << to_string(tag) << ")";
    throw std::invalid_argument(os.str());
  }

  SpectrumResult result;
  result.tag = tag;
  result.mass_c = 1.0;
  ConvergenceReport& rep = result.report;
  rep.truncation_k = q.truncation_k;
  rep.k_schedule = q.opts.k_schedule.empty() ? default_schedule(q.truncation_k)
                                             : q.opts.k_schedule;

  RatioSolve final_lo, final_hi;
  for (int kk : rep.k_schedule) {
    Ctx c = build_ctx(q.map, q.potentials, kk, q.opts.geometry_order);
    const auto range = mass_range(c, q.gamma);
    if (!range || range->second < 1.0 - kMassTol) {
      rep.value_by_k.push_back(kNaN);
      rep.flags.push_back("moments infeasible at k=" + std::to_string(kk));
      continue;
    }
    RatioSolve rs = ratio_solve(c, c.ell_hi, q.gamma, 1.0, 0.0, 0.0, q.opts);
    rep.value_by_k.push_back(rs.ok ? rs.value : kNaN);
    if (kk == rep.k_schedule.back()) {
      final_lo = rs;
      if (c.bracketed) {
        final_hi = ratio_solve(c, c.ell_lo, q.gamma, 1.0, 0.0, 0.0, q.opts);
        rep.flags.push_back("derivative_bracket: value is the conservative side");
      }
      rep.mass_lo = range->first;
      rep.mass_hi = range->second;
    }
  }
  for (std::size_t i = 0; i + 1 < rep.value_by_k.size(); ++i)
    if (std::isfinite(rep.value_by_k[i]) && std::isfinite(rep.value_by_k[i + 1]) &&
        rep.value_by_k[i] > rep.value_by_k[i + 1] + 1e-9)
      rep.flags.push_back("warning: value not monotone along the truncation schedule");

  if (!final_lo.ok) throw std::runtime_error("alpha3: solver failed on the final truncation");
  result.value = final_lo.value;
  result.optimizer = final_lo.measure;
  result.t_star = final_lo.t_star;
  result.multipliers = final_lo.q;
  rep.dinkelbach_iterations = final_lo.dinkelbach_iterations;
  rep.dinkelbach_residual = final_lo.dinkelbach_residual;
  rep.moment_residual = final_lo.moment_residual;
  rep.value_lower = final_lo.value;
  rep.value_upper = final_hi.ok ? final_hi.value : final_lo.value;
  for (const auto& f : final_lo.flags) rep.flags.push_back(f);
  return result;
}

SpectrumResult alpha4(const SpectrumQuery& q, double delta_inf, double L) {
  if (q.gamma.size() != q.potentials.size())
    throw std::invalid_argument("alpha4: gamma and potentials must have equal length");
  if (!q.map.sup_log_deriv())
    throw std::invalid_argument(
        "alpha4: family rejected, log|T'| is unbounded (no finite L exists)");
  for (const Potential& f : q.potentials)
    if (!f.support_bound())
      throw std::invalid_argument(
          "alpha4: potential '" + f.name() +
          "' has no finite symbol support; the sub-probability formula needs C_0 data");
  if (!(L > 0.0)) throw std::invalid_argument("alpha4: L must be positive");

  Ctx c = build_ctx(q.map, q.potentials, q.truncation_k, q.opts.geometry_order);
  const auto range = mass_range(c, q.gamma);
  if (!range)
    throw std::invalid_argument("alpha4: gamma admits no sub-probability measure (not in Z)");
  const double c_lo = range->first, c_hi = range->second;

  SpectrumResult result;
  result.tag = c_hi >= 1.0 - kMassTol ? Membership::Z0 : Membership::ZminusZ0;
  ConvergenceReport& rep = result.report;
  rep.truncation_k = q.truncation_k;
  rep.mass_lo = c_lo;
  rep.mass_hi = c_hi;

  const bool gamma_zero =
      std::all_of(q.gamma.begin(), q.gamma.end(), [](double g) { return std::abs(g) < 1e-12; });

  double best = -std::numeric_limits<double>::infinity();
  double best_c = kNaN;
  RatioSolve best_rs;
  bool best_zero_mass = false;

  auto eval_at = [&](double cc) {
    RatioSolve rs;
    if (cc <= 0.0) return rs;
    std::vector<double> scaled(q.gamma.size());
    for (std::size_t r = 0; r < scaled.size(); ++r) scaled[r] = q.gamma[r] / cc;
    return ratio_solve(c, c.ell_hi, scaled, cc, (1.0 - cc) * delta_inf, (1.0 - cc) * L,
                       q.opts);
  };
  auto consider = [&](double cc, const RatioSolve& rs) {
    if (rs.ok && rs.value > best) {
      best = rs.value;
      best_c = cc;
      best_rs = rs;
      best_zero_mass = false;
    }
  };

  if (gamma_zero) {
    best = delta_inf / L;
    best_c = 0.0;
    best_zero_mass = true;
    rep.flags.push_back("zero-mass candidate delta_inf/L admissible at gamma = 0");
  }

  const double lo = std::max(c_lo, 1e-6), hi = c_hi;
  if (hi > lo + q.opts.golden_width) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    RatioSolve f1 = eval_at(x1), f2 = eval_at(x2);
    consider(x1, f1);
    consider(x2, f2);
    int evals = 2;
    while (b - a > q.opts.golden_width && evals < 200) {
      const double v1 = f1.ok ? f1.value : -std::numeric_limits<double>::infinity();
      const double v2 = f2.ok ? f2.value : -std::numeric_limits<double>::infinity();
      if (v1 < v2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = eval_at(x2);
        consider(x2, f2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = eval_at(x1);
        consider(x1, f1);
      }
      ++evals;
    }
  }
  if (hi > 0.0) consider(hi, eval_at(hi));

  if (!std::isfinite(best)) throw std::runtime_error("alpha4: no admissible mass value");
  result.value = best;
  result.mass_c = best_c;
  if (!best_zero_mass) {
    result.optimizer = best_rs.measure;
    result.t_star = best_rs.t_star;
    result.multipliers = best_rs.q;
    rep.dinkelbach_residual = best_rs.dinkelbach_residual;
    rep.moment_residual = best_rs.moment_residual;
    rep.dinkelbach_iterations = best_rs.dinkelbach_iterations;
    for (const auto& f : best_rs.flags) rep.flags.push_back(f);
  } else {
    result.t_star = best;
    rep.dinkelbach_residual = 0.0;
    rep.moment_residual = 0.0;
  }
  rep.value_lower = rep.value_upper = result.value;
  return result;
}

namespace {

std::vector<double> padded_gamma(const std::vector<double>& gamma, int k) {
  if (static_cast<int>(gamma.size()) > k)
    throw std::invalid_argument("freq_spectrum: more frequencies than truncation symbols");
  std::vector<double> g(gamma);
  double sum = 0.0;
  for (double v : g) {
    if (v < -1e-12) throw std::invalid_argument("freq_spectrum: negative frequency");
    sum += v;
  }
  if (sum > 1.0 + 1e-9) throw std::invalid_argument("freq_spectrum: frequencies sum above 1");
  g.resize(k, 0.0);
  return g;
}

}  // namespace

SpectrumResult freq_spectrum(const MapSystem& map, const std::vector<double>& gamma,
                             int truncation_k, SolverOptions opts) {
  const Truncation tr = map.derive_truncation(truncation_k);
  const int k = tr.shift.k;
  SpectrumQuery q(map);
  q.opts = opts;
  q.truncation_k = truncation_k;
  q.gamma = padded_gamma(gamma, k);
  q.potentials.reserve(k);
  for (int i = 0; i < k; ++i) q.potentials.push_back(Potential::indicator(tr.labels[i]));

  const Membership tag = membership(q);
  SpectrumResult result;

  if (map.branch_count()) {  // compact family: s_inf = 0, alpha3 is the value
    if (tag == Membership::Z0) {
      result = alpha3(q);
      result.report.flags.push_back("compact family: dimension = alpha3");
    } else {
      result.tag = tag;
      result.value = kNaN;
      result.report.flags.push_back("gamma outside Z0 for a compact family: level set empty");
    }
    return result;
  }

  if (map.branch_derivative_diverges()) {
    // diverging branch derivatives: dim = max{s_inf, alpha3} on Z0,
    // s_inf on Z \ Z0
    const SInfinityResult si = s_infinity(map);
    if (tag == Membership::NotInZ) {
      result.tag = tag;
      result.value = kNaN;
      result.report.flags.push_back("gamma outside Z: recurrent level set empty");
      return result;
    }
    if (tag == Membership::ZminusZ0) {
      result.tag = tag;
      result.value = si.value;
      result.mass_c = std::accumulate(q.gamma.begin(), q.gamma.end(), 0.0);
      result.report.flags.push_back("s_infinity branch: frequencies sum below 1");
      result.report.value_lower = si.bracket_lo;
      result.report.value_upper = si.bracket_hi;
      return result;
    }
    result = alpha3(q);
    result.report.flags.push_back("lambda_mu < infinity proviso: bracketed derivative data");
    if (si.value > result.value) {
      result.value = si.value;
      result.report.flags.push_back("s_infinity dominates alpha3 at this truncation");
    }
    return result;
  }

  // bounded-tail regime (f_lambda): the sub-probability formula applies
  const double L = *map.sup_log_deriv();
  const auto d_inf = known_delta_inf(map);
  if (!d_inf)
    throw std::runtime_error("freq_spectrum: no entropy-at-infinity value for this family");
  if (tag == Membership::NotInZ) {
    result.tag = tag;
    result.value = kNaN;
    result.report.flags.push_back("gamma outside Z: level set empty");
    return result;
  }
  const bool gamma_zero =
      std::all_of(q.gamma.begin(), q.gamma.end(), [](double g) { return g < 1e-12; });
  result = alpha4(q, *d_inf, L);
  if (gamma_zero) {
    const double dim_t = transient_dimension(map);
    result.report.flags.push_back("gamma = 0: max{alpha4(0), dim transient} branch");
    if (dim_t > result.value) {
      result.value = dim_t;
      result.report.flags.push_back("transient set dominates");
    }
  }
  return result;
}

double transient_dimension(const MapSystem& map) {
  if (map.family() != MapFamily::FLambda)
    throw std::invalid_argument("transient_dimension: closed form known only for f_lambda");
  const double l = map.lambda();
  if (l >= 0.5) return 1.0;
  return -std::log(4.0) / std::log(l * (1.0 - l));
}

std::optional<double> known_delta_inf(const MapSystem& map) {
  if (map.family() == MapFamily::FLambda) return std::log(4.0);
  return std::nullopt;
}

UnconstrainedPressure unconstrained_pressure(const FiniteSubshift& s,
                                             const std::vector<Symbol>& labels,
                                             const Potential& f) {
  const int k = s.k;
  if (f.order() > 2)
    throw std::invalid_argument("unconstrained_pressure: order above 2 unsupported");
  std::vector<double> logw(static_cast<std::size_t>(k) * k, 0.0);
  Word w1(1), w2(2);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (!s.allows(i + 1, j + 1)) continue;
      if (f.order() == 1) {
        w1[0] = labels[i];
        logw[static_cast<std::size_t>(i) * k + j] = f(w1);
      } else {
        w2[0] = labels[i];
        w2[1] = labels[j];
        logw[static_cast<std::size_t>(i) * k + j] = f(w2);
      }
    }
  UnconstrainedPressure up;
  auto shift = std::make_shared<FiniteSubshift>(s);
  up.optimizer = gibbs_measure(shift, logw, labels);
  up.value = perron(s, logw).log_root;
  return up;
}

}  // namespace birkhoff
