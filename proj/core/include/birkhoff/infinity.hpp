#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/maps.hpp"
#include "birkhoff/markov.hpp"

namespace birkhoff {

// Number of cylinders [w_1, ..., w_{n+2}] in the K-truncation with
// w_1 <= q, w_{n+2} <= q and #{ i : w_i <= q } <= (n+2)/M, counted exactly.
// Throws std::overflow_error when the count exceeds 64 bits.
std::uint64_t z_n_count(const MapSystem& map, int K, int M, int q, int n);

// Excursion-count growth-rate table: for each (M, q) the max of
// (1/n) log z_n over the last `window` values of n (the limsup surrogate);
// -infinity rows are tagged empty. The headline estimate is the
// (max M, max q) corner, always flagged as K-truncated.
struct DeltaInfTable {
  int K = 0;
  int n_max = 0;
  int window = 0;
  std::vector<int> Ms, qs;
  std::vector<std::vector<double>> estimate;  // [Mi][qi], -inf for empty
  double corner = 0.0;
  bool corner_empty = false;
  std::vector<std::string> flags;
};

DeltaInfTable delta_inf_counting(const MapSystem& map, int K, std::vector<int> M_list,
                                 std::vector<int> q_list, int n_max, int window = 0);

// Escaping-measure lower bound for the entropy at infinity: shifting the
// base measure's symbols by n preserves its entropy while its mass on every
// fixed cylinder dies out, so h(base) <= delta_inf.
struct EscapeCertificate {
  MarkovMeasure base;
  std::vector<int> offsets;
  double h = 0.0;                       // entropy of the base measure, exact
  int depth = 0;                        // cylinder depth of the decay check
  int low_symbol_bound = 0;
  std::vector<double> max_low_cylinder_mass;  // one entry per offset
  bool decay_ok = false;
  bool degenerate = false;              // offsets = {0}: check skipped
  std::vector<std::string> flags;
};

// Requires translation-stability of the transition rule on the base
// measure's support (true for f_lambda and full-shift families).
EscapeCertificate delta_inf_lower_bound(const MapSystem& map, const MarkovMeasure& base,
                                        std::vector<int> offsets, int depth = 3,
                                        int low_symbol_bound = 3);

}  // namespace birkhoff
