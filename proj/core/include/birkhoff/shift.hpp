#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace birkhoff {

using Symbol = int;                 // 1-based branch/state index
using Word = std::vector<Symbol>;   // admissible finite word

std::string word_to_string(const Word& w);

// Transition structure of a countable Markov shift. Either an explicit
// finite 0/1 matrix or a decidable predicate on pairs of positive integers
// (e.g. "i == 1 or j >= i-1").
class TransitionRule {
 public:
  static TransitionRule full_shift();
  static TransitionRule from_matrix(int k, std::vector<std::uint8_t> entries);
  static TransitionRule from_predicate(std::function<bool(Symbol, Symbol)> p);

  bool allows(Symbol i, Symbol j) const;
  // Alphabet bound for explicit matrices; infinite shifts return nullopt.
  std::optional<int> alphabet_limit() const { return limit_; }

 private:
  TransitionRule() = default;
  std::function<bool(Symbol, Symbol)> pred_;
  std::optional<int> limit_;
};

// Finite truncation of a shift: alphabet {1..k} with a dense 0/1 matrix.
// Invariant: every row and every column contains a 1.
struct FiniteSubshift {
  int k = 0;
  std::vector<std::uint8_t> a;  // row-major k*k

  bool allows(Symbol i, Symbol j) const {
    return a[static_cast<std::size_t>(i - 1) * k + (j - 1)] != 0;
  }
  bool word_admissible(std::span<const Symbol> w) const;
  std::size_t edge_count() const;
};

FiniteSubshift full_subshift(int k);

// Truncation together with the map back to the original symbol labels
// (pruning may remove stranded symbols).
struct Truncation {
  FiniteSubshift shift;
  std::vector<Symbol> labels;  // labels[i-1] = original symbol of local i
};

// Restrict the rule to {1..k} and iteratively prune symbols whose row or
// column is all-zero. Throws std::runtime_error("truncation too small")
// if everything is pruned.
Truncation truncate(const TransitionRule& rule, int k);

// All admissible words of length n, lexicographic. Empty list allowed.
std::vector<Word> enumerate_words(const FiniteSubshift& s, int n);

// Closed loops through `a`: words w of length n with w1 = a and (w_n, w1)
// admissible. Lexicographic.
std::vector<Word> enumerate_periodic(const FiniteSubshift& s, int n, Symbol a);

// Primitivity check: some power A^m, m <= (k-1)^2 + 1, entrywise positive.
bool is_mixing(const FiniteSubshift& s);

// Irreducibility (strong connectivity) of the transition digraph.
bool is_irreducible(const FiniteSubshift& s);

// Loop counts (A^n)_{aa} in exact integer arithmetic; throws on overflow.
std::uint64_t count_loops(const FiniteSubshift& s, int n, Symbol a);

// Higher-block presentation: one symbol per admissible m-word, transitions
// by (m-1)-overlap. Conjugate to the base shift, so Birkhoff sums per step
// are preserved. words are sorted lexicographically; for each block the
// successor set is the contiguous lexicographic range of blocks whose
// prefix equals its suffix.
struct BlockShift {
  int order = 1;
  std::vector<Word> words;                     // lexicographic
  std::vector<std::pair<int, int>> successors; // [begin, end) block range
  int count() const { return static_cast<int>(words.size()); }

  // Dense subshift view; only valid for modest block counts.
  FiniteSubshift to_subshift() const;
};

BlockShift block_recode(const FiniteSubshift& s, int m);

}  // namespace birkhoff
