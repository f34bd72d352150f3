#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/maps.hpp"
#include "birkhoff/markov.hpp"

namespace birkhoff {

// Integer roof over the m-cylinders of a truncation:
//   k_w = max{ k >= 0 : k / base^m <= inf log|T'| on [w] },
// so tau_m / base^m increases to the one-step log-derivative. Strict
// positivity of every k_w is required; build_roof refuses otherwise and
// names the remedy base.
struct RoofFunction {
  int order = 1;
  int base = 2;
  std::vector<Symbol> labels;       // truncation labels
  std::vector<Word> words;          // admissible m-words, lexicographic
  std::vector<std::int64_t> k_w;    // chain lengths, aligned with words

  double scale() const;             // base^order
  // integral of tau_m against a measure living on the m-block alphabet
  double integral(const MarkovMeasure& block_measure) const;
};

// Smallest usable base: 2 when log zeta > 1/2, otherwise the least integer
// l with 1/l < log zeta. Throws when no integer base works (log zeta <= 0,
// e.g. the first Gauss branch).
int default_roof_base(const MapSystem& map);

RoofFunction build_roof(const MapSystem& map, int m, int k_trunc, int base = 2);

// The discrete suspension shift: every m-word vertex is replaced by a chain
// of k_w vertices; within-chain moves are forced and chain ends follow the
// m-block transitions. Vertices are numbered by (block in lexicographic
// order, position), which fixes the block bijection.
struct SplitShift {
  int m = 1;
  int base = 2;
  FiniteSubshift parent;                          // the k-truncation
  std::vector<Symbol> labels;
  RoofFunction roof;
  std::vector<std::pair<int, int>> block_successors;  // ranges into blocks (m >= 2)
  std::vector<std::int64_t> chain_start;          // vertex id of each chain head
  std::int64_t vertex_count = 0;

  int block_count() const { return static_cast<int>(roof.words.size()); }
  std::vector<int> block_successor_list(int block) const;

  std::int64_t vertex_of(int block, std::int64_t pos) const;  // pos in 1..k_w
  std::pair<int, std::int64_t> block_of(std::int64_t vertex) const;

  // Cylinder correspondences. Parent-to-split holds for words of length
  // >= m and produces the forced vertex run; split-to-parent normalizes the
  // vertex run to whole chains and reads off the parent word.
  std::vector<std::int64_t> parent_cylinder_to_split(const Word& w) const;
  Word split_cylinder_to_parent(const std::vector<std::int64_t>& run) const;

  double log_perron(double tol = 1e-12) const;
};

SplitShift build_split_shift(const MapSystem& map, int m, int k_trunc, int base = 2);

// Pushforward of a measure on the m-block alphabet to the split shift:
// deterministic inside chains, the block transition law at chain ends,
// stationary weights rescaled by the chain lengths. Its entropy equals
// h(measure) / integral(tau_m) — Abramov's identity, exact here.
MarkovMeasure push_measure(const MarkovMeasure& block_measure, const SplitShift& split);

// Measure on the m-block alphabet induced by an order-1 measure on the
// truncation (identity when m = 1).
MarkovMeasure block_measure_of(const MarkovMeasure& mm, const SplitShift& split);

// Counting delta-infinity surrogate evaluated on the split shift's own
// vertex alphabet; used for the base^m * delta_inf trend report.
double split_delta_inf_proxy(const SplitShift& split, int M, int q, int n_max);

}  // namespace birkhoff
