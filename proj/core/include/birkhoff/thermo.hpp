#pragma once

#include <optional>
#include <string>
#include <vector>

#include "birkhoff/maps.hpp"
#include "birkhoff/potential.hpp"
#include "birkhoff/shift.hpp"

namespace birkhoff {

// Periodic-orbit pressure scan. log_zn[i] is log of the weighted sum over
// closed loops of length ns[i] through the base symbol; the point estimate
// is the least-squares slope over the last ceil(n_max/2) points and is
// always reported with the raw sequence.
struct PressureEstimate {
  std::vector<int> ns;
  std::vector<double> log_zn;         // -inf when no loop of that length
  double fit_slope = 0.0;
  double variational = 0.0;           // sup { h + integral f } over order-1 Markov
  std::optional<double> perron_log;   // log Perron root of the truncation (f == 0)
  int k = 0;
  Symbol base_symbol = 1;
  std::vector<std::string> flags;

  std::vector<double> p_n() const;    // log_zn[i] / ns[i]
};

PressureEstimate gurevich_pressure(const MapSystem& map, const Potential& f, int k,
                                   Symbol a, int n_max);

// Same scan over an explicit finite subshift (symbols are their own labels).
PressureEstimate gurevich_pressure(const FiniteSubshift& s, const std::vector<Symbol>& labels,
                                   const Potential& f, Symbol a, int n_max);

PressureEstimate topological_entropy(const MapSystem& map, int k, int n_max);
PressureEstimate topological_entropy(const FiniteSubshift& s, Symbol a, int n_max);

// One classification of P(-t log|T'|) as finite/infinite from a truncation
// scan: P_k values, series tail increments, and the verdict.
struct DivergenceProbe {
  double t = 0.0;
  std::vector<int> ks;
  std::vector<double> pressures;   // P_k, nondecreasing in k
  bool divergent = false;
  bool conclusive = true;
  std::string reason;
};

struct SInfinityOptions {
  double t_tol = 1e-3;
  std::vector<int> k_schedule;     // empty -> 100 * 2^j, j = 0..7
  double blowup_threshold = 50.0;  // "B" in nats
  double eps_div = 0.01;           // pressure increment floor per k-doubling
  double ratio_critical = 0.995;   // tail-increment ratio splitting the verdict
};

struct SInfinityResult {
  double value = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  bool conclusive = true;
  std::vector<DivergenceProbe> trace;
  std::vector<std::string> flags;
};

// s_inf = inf { t >= 0 : P(-t log|T'|) < infinity }. Maps with finite
// sup log|T'| have finite topological entropy, hence s_inf = 0 exactly.
// Otherwise bisection on t with a truncation-scan divergence classifier.
SInfinityResult s_infinity(const MapSystem& map, const SInfinityOptions& opts = {});

}  // namespace birkhoff
