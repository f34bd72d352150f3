#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "birkhoff/markov.hpp"
#include "birkhoff/shift.hpp"

namespace birkhoff {

// Dominant eigendata of a nonnegative matrix given by log-weights on the
// edges of a subshift. Entries on forbidden edges are ignored.
struct PerronData {
  double log_root = 0.0;
  std::vector<double> right;  // l1-normalized
  std::vector<double> left;   // normalized so that <left, right> = 1
  long iterations = 0;
  double residual = 0.0;
};

// Power iteration with a small diagonal shift (handles periodic supports);
// log-weights are rescaled by their maximum before exponentiation, so
// multipliers of any magnitude are safe. `warm` seeds the iteration with a
// previous solution of a nearby problem.
PerronData perron(const FiniteSubshift& s, const std::vector<double>& log_edge_weights,
                  double tol = 1e-13, const PerronData* warm = nullptr);

PerronData perron_unweighted(const FiniteSubshift& s, double tol = 1e-13);

// Equilibrium (Gibbs) measure of a locally constant potential with log-edge
// weights W_ij: P_ij = W_ij v_j / (rho v_i), stationary pi_i ~ u_i v_i.
// Attains sup { h + integral } = log rho over order-1 Markov measures.
MarkovMeasure gibbs_measure(std::shared_ptr<const FiniteSubshift> s,
                            const std::vector<double>& log_edge_weights,
                            std::vector<Symbol> labels = {});

// Parry measure: maximal-entropy Markov measure of the subshift.
MarkovMeasure max_entropy_measure(std::shared_ptr<const FiniteSubshift> s,
                                  std::vector<Symbol> labels = {});

// log Perron root of a large sparse nonnegative operator given through
// contiguous successor ranges (BlockShift layout) and per-edge weights.
// weight(b, c) must be the plain (not log) weight after the caller's own
// rescaling; the returned value is log(root) + log_scale.
double log_perron_ranges(const std::vector<std::pair<int, int>>& successors,
                         const std::function<double(int, int)>& weight,
                         double log_scale, double tol = 1e-12);

}  // namespace birkhoff
