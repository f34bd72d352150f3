#pragma once

#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "birkhoff/maps.hpp"
#include "birkhoff/potential.hpp"
#include "birkhoff/shift.hpp"

namespace birkhoff {

// Sparse row-stochastic matrix: rows[i] lists (column, probability) with
// columns 0-based and strictly increasing.
using StochasticRows = std::vector<std::vector<std::pair<int, double>>>;

// Order-1 stationary Markov measure on a finite subshift. For measures on
// split shifts the subshift pointer may be empty; only entropy and raw
// cylinder masses are available then.
struct MarkovMeasure {
  int k = 0;
  StochasticRows rows;
  std::vector<double> pi;
  std::shared_ptr<const FiniteSubshift> subshift;
  std::vector<Symbol> labels;  // local symbol -> original branch index

  double transition(int i, int j) const;  // 0-based
  // pi_{w1} P_{w1 w2} ... for a word in local symbols (1-based).
  double cylinder_mass(std::span<const Symbol> w) const;
};

// Unique stationary vector of an irreducible P via power iteration to
// l1-residual <= 1e-12 (deterministic uniform start, 1e6-step cap).
// Reducible chains are rejected with a closed proper subclass named.
std::vector<double> stationary_distribution(const StochasticRows& rows);

// Builds a measure on s, validating support and computing pi.
MarkovMeasure make_markov(std::shared_ptr<const FiniteSubshift> s, StochasticRows rows,
                          std::vector<Symbol> labels = {});

// Bernoulli(p) on the full shift over p.size() symbols.
MarkovMeasure bernoulli_measure(std::vector<double> p);

// Measure with prescribed edge masses x_ij (must satisfy the balance
// equations); pi is the row-mass vector normalized by total mass.
MarkovMeasure from_edge_weights(std::shared_ptr<const FiniteSubshift> s,
                                const std::vector<double>& edge_mass,
                                std::vector<Symbol> labels = {});

// Random measure supported on all edges of s (property-test input).
MarkovMeasure random_markov(std::shared_ptr<const FiniteSubshift> s, std::mt19937& rng,
                            std::vector<Symbol> labels = {});

// -sum_i pi_i sum_j P_ij log P_ij, with 0 log 0 = 0. Nats.
double entropy(const MarkovMeasure& m);

// Bracket for the Lyapunov exponent of the measure pushed to the map:
// integrates the order-m_geo cylinder bounds of S_m log|T'| and divides
// by m_geo. Exact (equal endpoints) for piecewise-linear families.
std::pair<double, double> lyapunov(const MarkovMeasure& m, const MapSystem& map,
                                   int m_geo = 1);

// sum over order(f)-cylinders of mass * value.
double integrate(const MarkovMeasure& m, const Potential& f);

}  // namespace birkhoff
