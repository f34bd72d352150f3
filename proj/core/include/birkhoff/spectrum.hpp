#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birkhoff/maps.hpp"
#include "birkhoff/markov.hpp"
#include "birkhoff/potential.hpp"
#include "birkhoff/shift.hpp"

namespace birkhoff {

enum class Membership { Z0, ZminusZ0, NotInZ };
std::string to_string(Membership m);

struct SolverOptions {
  double dinkelbach_tol = 1e-11;  // outer fixed-point stop on t
  double residual_tol = 1e-8;     // required optimality residual at the end
  double moment_tol = 1e-9;       // max constraint violation
  int max_dinkelbach = 120;
  int max_newton = 120;
  double golden_width = 1e-4;     // mass search interval width
  std::uint64_t multiplier_seed = 0;  // 0 = zero start, else randomized q0
  int geometry_order = 1;         // cylinder order for derivative brackets (1 or 2)
  std::vector<int> k_schedule;    // empty -> {k/4, k/2, k}
};

// Targets gamma_r for the potentials phi_r on a k-truncation.
struct SpectrumQuery {
  explicit SpectrumQuery(MapSystem m) : map(std::move(m)) {}
  MapSystem map;
  std::vector<Potential> potentials;
  std::vector<double> gamma;
  int truncation_k = 40;
  SolverOptions opts;
};

struct ConvergenceReport {
  int truncation_k = 0;
  std::vector<int> k_schedule;
  std::vector<double> value_by_k;       // NaN where the moments are infeasible
  int dinkelbach_iterations = 0;
  double dinkelbach_residual = 0.0;     // |h - t lambda + sum q_r (m_r - gamma_r)|
  double moment_residual = 0.0;
  double mass_lo = 1.0, mass_hi = 1.0;  // LP range of |mu| on the truncation
  double value_lower = 0.0;             // with the upper derivative data
  double value_upper = 0.0;             // with the lower derivative data
  std::vector<std::string> flags;
};

struct SpectrumResult {
  double value = 0.0;
  double mass_c = 1.0;
  MarkovMeasure optimizer;              // probability part of the maximizer
  double t_star = 0.0;
  std::vector<double> multipliers;
  Membership tag = Membership::NotInZ;
  ConvergenceReport report;
};

// Feasibility of the moments over order-1 Markov edge measures on the
// truncation: Z0 when total mass 1 is attainable, Z \ Z0 when only a
// sub-probability mass works, NotInZ otherwise. Truncation-dependent.
Membership membership(const SpectrumQuery& q);

// LP range of the total mass compatible with the moment constraints;
// nullopt when infeasible.
std::optional<std::pair<double, double>> feasible_mass_range(const SpectrumQuery& q);

// sup { h/lambda : integral phi_r = gamma_r } over order-1 Markov measures
// on the truncation. Dinkelbach outer iteration on t; the inner problem is
// the log-Perron root of the multiplier-weighted transfer matrix, with the
// multipliers driven to the moment targets by a damped Newton iteration.
SpectrumResult alpha3(const SpectrumQuery& q);

// sup over sub-probability measures of
//   (c h + (1-c) delta_inf) / (c lambda + (1-c) L),   c = |mu|,
// with raw moments gamma. Golden-section over the feasible mass interval;
// c = 0 contributes delta_inf / L and is admissible only for gamma = 0.
SpectrumResult alpha4(const SpectrumQuery& q, double delta_inf, double L);

// Frequency-of-digit spectrum: phi_i = 1_{I_i} for every symbol of the
// truncation, gamma zero-padded. Routes to the dimension formula matching
// the family's derivative behaviour.
SpectrumResult freq_spectrum(const MapSystem& map, const std::vector<double>& gamma,
                             int truncation_k, SolverOptions opts = {});

// Closed form for the transient-set dimension of the F_lambda family:
// -log 4 / log(lambda (1-lambda)) below lambda = 1/2, and 1 above.
double transient_dimension(const MapSystem& map);

// Entropy at infinity when the family pins it exactly (F_lambda: log 4).
std::optional<double> known_delta_inf(const MapSystem& map);

// Unconstrained variational solver: sup { h + integral f } over order-1
// Markov measures = log Perron root of the weighted transfer matrix.
struct UnconstrainedPressure {
  double value = 0.0;
  MarkovMeasure optimizer;
};
UnconstrainedPressure unconstrained_pressure(const FiniteSubshift& s,
                                             const std::vector<Symbol>& labels,
                                             const Potential& f);

}  // namespace birkhoff
