#include "birkhoff/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "birkhoff/spectrum.hpp"
#include "birkhoff/transfer.hpp"

namespace birkhoff {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double fit_last_half_slope(const std::vector<int>& ns, const std::vector<double>& ys,
                           int n_max) {
  // least squares over the last ceil(n_max/2) finite points
  const int want = (n_max + 1) / 2;
  std::vector<double> xs, vs;
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (std::isfinite(ys[i])) {
      xs.push_back(ns[i]);
      vs.push_back(ys[i]);
    }
  if (xs.size() > static_cast<std::size_t>(want)) {
    xs.erase(xs.begin(), xs.end() - want);
    vs.erase(vs.begin(), vs.end() - want);
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += vs[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * vs[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// log of the weighted loop sum Z_n(a) = sum over sigma^n-periodic words
// through `a` of exp(S_n f), accumulated as a guarded DP in canonical
// symbol order. Potential values are read through `labels`.
std::vector<double> loop_scan(const FiniteSubshift& s, const std::vector<Symbol>& labels,
                              const Potential& f, Symbol a_local, int n_max) {
  const int k = s.k;
  const int order = f.order();
  if (order > 2)
    throw std::invalid_argument("gurevich_pressure: recode potentials above order 2 first");
  // edge log-weights: source value for order 1, pair value for order 2
  std::vector<double> lw(static_cast<std::size_t>(k) * k, kNegInf);
  Word buf(2);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (!s.a[static_cast<std::size_t>(i) * k + j]) continue;
      if (order == 1) {
        buf.resize(1);
        buf[0] = labels[i];
      } else {
        buf.resize(2);
        buf[0] = labels[i];
        buf[1] = labels[j];
      }
      lw[static_cast<std::size_t>(i) * k + j] = f(buf);
    }

  std::vector<double> out;
  std::vector<double> v(k, 0.0), w(k, 0.0);
  v[a_local - 1] = 1.0;
  double logscale = 0.0;
  for (int n = 2; n <= n_max; ++n) {
    // one DP step: w_j = sum_i v_i exp(lw_ij)
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < k; ++i) {
      if (v[i] == 0.0) continue;
      for (int j = 0; j < k; ++j) {
        const double g = lw[static_cast<std::size_t>(i) * k + j];
        if (g != kNegInf) w[j] += v[i] * std::exp(g);
      }
    }
    const double m = *std::max_element(w.begin(), w.end());
    if (m > 0.0) {
      for (auto& x : w) x /= m;
      logscale += std::log(m);
    }
    v = w;
    // close the loop: last edge (j -> a), weighted by its own log-weight
    double z = 0.0;
    for (int j = 0; j < k; ++j) {
      const double g = lw[static_cast<std::size_t>(j) * k + (a_local - 1)];
      if (v[j] > 0.0 && g != kNegInf) z += v[j] * std::exp(g);
    }
    out.push_back(z > 0.0 ? std::log(z) + logscale : kNegInf);
  }
  return out;
}

}  // namespace

std::vector<double> PressureEstimate::p_n() const {
  std::vector<double> r(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) r[i] = log_zn[i] / ns[i];
  return r;
}

PressureEstimate gurevich_pressure(const FiniteSubshift& s, const std::vector<Symbol>& labels,
                                   const Potential& f, Symbol a, int n_max) {
  if (n_max < 3) throw std::invalid_argument("gurevich_pressure: n_max >= 3");
  if (!is_irreducible(s))
    throw std::invalid_argument("gurevich_pressure: reducible truncation rejected");
  int a_local = -1;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == a) a_local = static_cast<int>(i) + 1;
  if (a_local < 0) throw std::invalid_argument("gurevich_pressure: base symbol pruned");

  PressureEstimate est;
  est.k = s.k;
  est.base_symbol = a;
  est.log_zn = loop_scan(s, labels, f, a_local, n_max);
  est.ns.resize(est.log_zn.size());
  std::iota(est.ns.begin(), est.ns.end(), 2);
  if (std::any_of(est.log_zn.begin(), est.log_zn.end(),
                  [](double v) { return !std::isfinite(v); }))
    est.flags.push_back("zero_loop_counts_skipped_in_fit");
  est.fit_slope = fit_last_half_slope(est.ns, est.log_zn, n_max);
  est.variational = unconstrained_pressure(s, labels, f).value;
  return est;
}

PressureEstimate gurevich_pressure(const MapSystem& map, const Potential& f, int k,
                                   Symbol a, int n_max) {
  const Truncation tr = map.derive_truncation(k);
  return gurevich_pressure(tr.shift, tr.labels, f, a, n_max);
}

PressureEstimate topological_entropy(const FiniteSubshift& s, Symbol a, int n_max) {
  std::vector<Symbol> labels(s.k);
  std::iota(labels.begin(), labels.end(), 1);
  PressureEstimate est = gurevich_pressure(s, labels, Potential::zero(), a, n_max);
  est.perron_log = perron_unweighted(s).log_root;
  return est;
}

PressureEstimate topological_entropy(const MapSystem& map, int k, int n_max) {
  const Truncation tr = map.derive_truncation(k);
  PressureEstimate est =
      gurevich_pressure(tr.shift, tr.labels, Potential::zero(), tr.labels.front(), n_max);
  est.perron_log = perron_unweighted(tr.shift).log_root;
  return est;
}

namespace {

// Truncated pressure of -t log|T'| with the order-1 lower derivative data
// (per-branch inf |T'|). Full-shift rows make the transfer operator rank
// one, so the root is the plain weighted sum.
double truncated_pressure(const MapSystem& map, double t, int k) {
  if (map.family() == MapFamily::Gauss || map.family() == MapFamily::BaseN) {
    // full-shift coding: the weighted operator is rank one and its root is
    // the plain weighted symbol sum, valid for arbitrarily large k
    const int kk = map.branch_count() ? std::min(k, *map.branch_count()) : k;
    double acc = 0.0;
    for (int i = 1; i <= kk; ++i) acc += std::exp(-t * map.branch_inf_log_deriv(i));
    return std::log(acc);
  }
  const Truncation tr = map.derive_truncation(std::min(k, 2048));
  std::vector<double> lw(static_cast<std::size_t>(tr.shift.k) * tr.shift.k, 0.0);
  for (int i = 0; i < tr.shift.k; ++i) {
    const double g = -t * map.branch_inf_log_deriv(tr.labels[i]);
    for (int j = 0; j < tr.shift.k; ++j) lw[static_cast<std::size_t>(i) * tr.shift.k + j] = g;
  }
  return perron(tr.shift, lw).log_root;
}

DivergenceProbe classify(const MapSystem& map, double t, const SInfinityOptions& o) {
  DivergenceProbe probe;
  probe.t = t;
  probe.ks = o.k_schedule;
  std::vector<double> S;  // e^{P_k}: the scale on which tail increments decay
  for (int k : probe.ks) {
    const double P = truncated_pressure(map, t, k);
    probe.pressures.push_back(P);
    S.push_back(std::exp(P));
  }
  if (probe.pressures.back() > o.blowup_threshold) {
    probe.divergent = true;
    probe.reason = "pressure exceeds blowup threshold";
    return probe;
  }
  std::vector<double> inc;
  for (std::size_t i = 0; i + 1 < S.size(); ++i) inc.push_back(S[i + 1] - S[i]);
  const double scale = S.back();
  if (std::all_of(inc.begin(), inc.end(), [&](double d) { return d <= 1e-14 * scale; })) {
    probe.divergent = false;
    probe.reason = "series converged to machine precision";
    return probe;
  }
  // ratio of successive tail increments estimates the decay factor per
  // k-doubling; >= 1 means the partial sums cannot be Cauchy
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < inc.size(); ++i)
    if (inc[i] > 1e-300) ratios.push_back(inc[i + 1] / inc[i]);
  if (ratios.size() < 2) {
    probe.divergent = false;
    probe.conclusive = false;
    probe.reason = "too few usable tail increments";
    return probe;
  }
  const std::size_t w = std::min<std::size_t>(3, ratios.size());
  double rbar = 0.0, rmin = 1e300, rmax = 0.0;
  for (std::size_t i = ratios.size() - w; i < ratios.size(); ++i) {
    rbar += ratios[i];
    rmin = std::min(rmin, ratios[i]);
    rmax = std::max(rmax, ratios[i]);
  }
  rbar /= w;
  std::ostringstream os;
  os << "tail increment ratio " << rbar;
  const double dP = probe.pressures.back() - probe.pressures[probe.pressures.size() - 2];
  if (rmax > 2.0 * std::max(rmin, 1e-300) && dP > o.eps_div) {
    probe.conclusive = false;
    probe.divergent = rbar >= o.ratio_critical;
    probe.reason = os.str() + " (noisy; widened bracket)";
    return probe;
  }
  if (rbar >= o.ratio_critical) {
    probe.divergent = true;
    probe.reason = os.str() + " >= critical: partial pressures not Cauchy";
  } else {
    probe.divergent = false;
    probe.reason = os.str() + " < critical: geometric tail";
  }
  return probe;
}

}  // namespace

SInfinityResult s_infinity(const MapSystem& map, const SInfinityOptions& opts) {
  SInfinityResult r;
  if (map.sup_log_deriv()) {
    // bounded log|T'| forces h_top < infinity, and then s_inf = 0
    r.value = r.bracket_lo = r.bracket_hi = 0.0;
    r.flags.push_back("finite_topological_entropy_shortcut");
    return r;
  }
  SInfinityOptions o = opts;
  if (o.k_schedule.empty())
    for (int j = 0; j < 8; ++j) o.k_schedule.push_back(100 << j);

  double lo = 0.0, hi = 1.0;
  // confirm divergence near 0 and finiteness at 1 before bisecting
  DivergenceProbe p0 = classify(map, 0.0, o);
  DivergenceProbe p1 = classify(map, 1.0, o);
  r.trace.push_back(p0);
  r.trace.push_back(p1);
  if (!p0.divergent) {
    r.value = r.bracket_lo = r.bracket_hi = 0.0;
    r.flags.push_back("pressure finite already at t=0");
    return r;
  }
  if (p1.divergent) {
    r.value = r.bracket_lo = r.bracket_hi = 1.0;
    r.flags.push_back("pressure divergent on the whole unit range");
    return r;
  }
  bool all_conclusive = p0.conclusive && p1.conclusive;
  while (hi - lo > opts.t_tol) {
    const double mid = 0.5 * (lo + hi);
    DivergenceProbe p = classify(map, mid, o);
    all_conclusive = all_conclusive && p.conclusive;
    r.trace.push_back(p);
    (p.divergent ? lo : hi) = mid;
  }
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.value = 0.5 * (lo + hi);
  r.conclusive = all_conclusive;
  if (!all_conclusive) {
    r.flags.push_back("inconclusive classification encountered; bracket widened");
    r.bracket_lo = std::max(0.0, lo - 5 * opts.t_tol);
    r.bracket_hi = std::min(1.0, hi + 5 * opts.t_tol);
  }
  return r;
}

}  // namespace birkhoff
