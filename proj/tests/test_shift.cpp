#include <stdexcept>
#include <algorithm>
#include <random>

#include "birkhoff/shift.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

TransitionRule f_lambda_rule() {
  return TransitionRule::from_predicate([](Symbol i, Symbol j) { return i == 1 || j >= i - 1; });
}

// independent loop-count oracle: trace entries of A^n in exact integers
std::uint64_t matpow_loops(const FiniteSubshift& s, int n, int a) {
  const int k = s.k;
  std::vector<std::uint64_t> m(k * k), r(k * k, 0);
  for (int i = 0; i < k * k; ++i) m[i] = s.a[i];
  for (int i = 0; i < k; ++i) r[i * k + i] = 1;
  int e = n;
  while (e > 0) {
    if (e & 1) {
      std::vector<std::uint64_t> t(k * k, 0);
      for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l)
          for (int j = 0; j < k; ++j) t[i * k + j] += r[i * k + l] * m[l * k + j];
      r = t;
    }
    std::vector<std::uint64_t> t(k * k, 0);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        for (int j = 0; j < k; ++j) t[i * k + j] += m[i * k + l] * m[l * k + j];
    m = t;
    e >>= 1;
  }
  return r[(a - 1) * k + (a - 1)];
}

}  // namespace

TEST_SUITE_BEGIN("shift");

TEST_CASE("truncate full shift") {
  const Truncation tr = truncate(TransitionRule::full_shift(), 2);
  CHECK(tr.shift.k == 2);
  CHECK(tr.shift.a == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(tr.labels == std::vector<Symbol>{1, 2});
}

TEST_CASE("truncate f_lambda rule at k=3") {
  const Truncation tr = truncate(f_lambda_rule(), 3);
  CHECK(tr.shift.k == 3);
  CHECK(tr.shift.a == std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 0, 1, 1});
}

TEST_CASE("truncate prunes stranded symbols") {
  auto rule = TransitionRule::from_matrix(3, {0, 1, 0, 1, 0, 0, 0, 0, 0});
  const Truncation tr = truncate(rule, 3);
  CHECK(tr.shift.k == 2);
  CHECK(tr.labels == std::vector<Symbol>{1, 2});
  CHECK(tr.shift.a == std::vector<std::uint8_t>{0, 1, 1, 0});
}

TEST_CASE("truncate empty result throws") {
  auto rule = TransitionRule::from_matrix(2, {0, 0, 0, 0});
  CHECK_THROWS_WITH_AS(truncate(rule, 2), doctest::Contains("truncation too small"),
                       std::runtime_error);
}

TEST_CASE("truncate monotone in k on the common block") {
  for (int k = 2; k <= 6; ++k) {
    const Truncation small = truncate(f_lambda_rule(), k);
    const Truncation big = truncate(f_lambda_rule(), k + 3);
    for (int i = 1; i <= small.shift.k; ++i)
      for (int j = 1; j <= small.shift.k; ++j)
        CHECK(small.shift.allows(i, j) == big.shift.allows(i, j));
  }
}

TEST_CASE("enumerate_words full 2-shift") {
  const auto s = full_subshift(2);
  CHECK(enumerate_words(s, 3).size() == 8);
}

TEST_CASE("enumerate_words f_lambda k=3 n=2") {
  const Truncation tr = truncate(f_lambda_rule(), 3);
  const auto words = enumerate_words(tr.shift, 2);
  const std::vector<Word> expect{{1, 1}, {1, 2}, {1, 3}, {2, 1},
                                 {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  CHECK(words == expect);
}

TEST_CASE("enumerate_words period-2 graph") {
  FiniteSubshift s{2, {0, 1, 1, 0}};
  const auto words = enumerate_words(s, 4);
  CHECK(words == std::vector<Word>{{1, 2, 1, 2}, {2, 1, 2, 1}});
}

TEST_CASE("prefix projection property") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<std::uint8_t> m(k * k);
    for (auto& v : m) v = rng() % 2;
    Truncation tr;
    try {
      tr = truncate(TransitionRule::from_matrix(k, std::move(m)), k);
    } catch (const std::runtime_error&) {
      continue;
    }
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto longer = enumerate_words(tr.shift, n + 1);
    const auto shorter = enumerate_words(tr.shift, n);
    for (const Word& w : longer) {
      Word prefix(w.begin(), w.end() - 1);
      CHECK(std::binary_search(shorter.begin(), shorter.end(), prefix));
    }
  }
}

TEST_CASE("enumerate_periodic examples") {
  CHECK(enumerate_periodic(full_subshift(2), 3, 1).size() == 4);
  FiniteSubshift flip{2, {0, 1, 1, 0}};
  CHECK(enumerate_periodic(flip, 3, 1).empty());
  const Truncation tr = truncate(f_lambda_rule(), 3);
  const auto loops = enumerate_periodic(tr.shift, 2, 3);
  CHECK(loops == std::vector<Word>{{3, 2}, {3, 3}});
}

TEST_CASE("periodic counts match integer matrix powers") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 5);
    std::vector<std::uint8_t> m(k * k);
    for (auto& v : m) v = rng() % 2;
    Truncation tr;
    try {
      tr = truncate(TransitionRule::from_matrix(k, std::move(m)), k);
    } catch (const std::runtime_error&) {
      continue;
    }
    for (int n = 1; n <= 8; ++n) {
      std::uint64_t total = 0;
      std::uint64_t oracle = 0;
      for (Symbol a = 1; a <= tr.shift.k; ++a) {
        total += enumerate_periodic(tr.shift, n, a).size();
        oracle += matpow_loops(tr.shift, n, a);
        CHECK(count_loops(tr.shift, n, a) == matpow_loops(tr.shift, n, a));
      }
      CHECK(total == oracle);
    }
  }
}

TEST_CASE("is_mixing") {
  CHECK(is_mixing(full_subshift(2)));
  FiniteSubshift flip{2, {0, 1, 1, 0}};
  CHECK_FALSE(is_mixing(flip));
  CHECK(is_mixing(truncate(f_lambda_rule(), 3).shift));
}

TEST_CASE("is_irreducible") {
  CHECK(is_irreducible(full_subshift(3)));
  FiniteSubshift flip{2, {0, 1, 1, 0}};
  CHECK(is_irreducible(flip));
}

TEST_CASE("block recode structure") {
  const Truncation tr = truncate(f_lambda_rule(), 4);
  for (int m = 2; m <= 3; ++m) {
    const BlockShift b = block_recode(tr.shift, m);
    CHECK(b.count() == static_cast<int>(enumerate_words(tr.shift, m).size()));
    std::size_t edges = 0;
    for (int i = 0; i < b.count(); ++i) {
      for (int c = b.successors[i].first; c < b.successors[i].second; ++c) {
        // overlap in m-1 symbols
        for (int l = 1; l < m; ++l) CHECK(b.words[i][l] == b.words[c][l - 1]);
      }
      edges += b.successors[i].second - b.successors[i].first;
    }
    CHECK(edges == enumerate_words(tr.shift, m + 1).size());
  }
}

TEST_SUITE_END();
