#include <stdexcept>
#include <cmath>
#include <memory>
#include <random>

#include "birkhoff/suspension.hpp"
#include "doctest.h"

using namespace birkhoff;

TEST_SUITE_BEGIN("suspension");

TEST_CASE("default roof base per family") {
  CHECK(default_roof_base(MapSystem::base_n(2)) == 2);
  CHECK(default_roof_base(MapSystem::base_n(3)) == 2);
  CHECK(default_roof_base(MapSystem::f_lambda(0.25)) == 4);
  CHECK_THROWS_WITH_AS(default_roof_base(MapSystem::gauss()), doctest::Contains("no integer"),
                       std::runtime_error);
}

TEST_CASE("roof values on base_2") {
  const auto r1 = build_roof(MapSystem::base_n(2), 1, 2);
  CHECK(r1.k_w == std::vector<std::int64_t>{1, 1});  // floor(2 log 2)
  const auto r3 = build_roof(MapSystem::base_n(2), 3, 2);
  for (auto k : r3.k_w) CHECK(k == 5);  // floor(8 log 2)
  CHECK(r3.k_w.size() == 8);
}

TEST_CASE("vanishing roof demands a base change") {
  CHECK_THROWS_WITH_AS(build_roof(MapSystem::f_lambda(0.25), 1, 5, 2),
                       doctest::Contains("replace the base 2 by 4"), std::runtime_error);
  CHECK_THROWS_WITH_AS(build_roof(MapSystem::gauss(), 1, 3, 2),
                       doctest::Contains("no integer base"), std::runtime_error);
}

TEST_CASE("roof bracketing is exact") {
  for (const auto& [map, base] :
       {std::pair{MapSystem::base_n(2), 2}, {MapSystem::base_n(3), 2},
        {MapSystem::f_lambda(0.25), 4}}) {
    for (int m = 1; m <= 3; ++m) {
      const auto roof = build_roof(map, m, 6, base);
      const double scale = roof.scale();
      for (std::size_t i = 0; i < roof.words.size(); ++i) {
        Word orig(roof.words[i].size());
        for (std::size_t j = 0; j < orig.size(); ++j) orig[j] = roof.labels[roof.words[i][j] - 1];
        const double inf_step = map.log_deriv_range(orig).first;
        CHECK(roof.k_w[i] / scale <= inf_step + 1e-12);
        CHECK((roof.k_w[i] + 1) / scale > inf_step - 1e-12);
        CHECK(roof.k_w[i] >= 1);
      }
    }
  }
}

TEST_CASE("split shift of base_2 at m=3") {
  const auto split = build_split_shift(MapSystem::base_n(2), 3, 2, 2);
  CHECK(split.block_count() == 8);
  CHECK(split.vertex_count == 40);
  CHECK(split.log_perron() == doctest::Approx(std::log(2.0) / 5.0).epsilon(1e-9));
}

TEST_CASE("split shift of base_3 at m=1") {
  const auto split = build_split_shift(MapSystem::base_n(3), 1, 3, 2);
  CHECK(split.block_count() == 3);
  CHECK(split.vertex_count == 6);  // chains of floor(2 log 3) = 2
  CHECK(split.log_perron() == doctest::Approx(std::log(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("split shift of f_lambda has single-successor chain interiors") {
  const auto split = build_split_shift(MapSystem::f_lambda(0.25), 1, 5, 4);
  std::int64_t expected = 0;
  for (auto k : split.roof.k_w) expected += k;
  CHECK(split.vertex_count == expected);
  for (int b = 0; b < split.block_count(); ++b)
    for (std::int64_t p = 1; p < split.roof.k_w[b]; ++p) {
      const auto [bb, pp] = split.block_of(split.vertex_of(b, p));
      CHECK(bb == b);
      CHECK(pp == p);
    }
}

TEST_CASE("pushforward entropy: Abramov with constant roof") {
  const auto split = build_split_shift(MapSystem::base_n(2), 3, 2, 2);
  const auto bern = bernoulli_measure({0.5, 0.5});
  const auto bm = block_measure_of(bern, split);
  const auto pushed = push_measure(bm, split);
  CHECK(entropy(pushed) == doctest::Approx(std::log(2.0) / 5.0).epsilon(1e-12));
}

TEST_CASE("pushforward of a Dirac chain has zero entropy") {
  const auto split = build_split_shift(MapSystem::f_lambda(0.25), 1, 3, 4);
  StochasticRows rows(split.block_count());
  for (int b = 0; b < split.block_count(); ++b) rows[b].push_back({b, 1.0});
  MarkovMeasure dirac;
  dirac.k = split.block_count();
  dirac.rows = std::move(rows);
  dirac.pi.assign(split.block_count(), 0.0);
  dirac.pi[1] = 1.0;  // fixed point on branch 2 (2 -> 2 is admissible)
  const auto pushed = push_measure(dirac, split);
  CHECK(entropy(pushed) == doctest::Approx(0.0));
}

TEST_CASE("roof of height one is the identity suspension") {
  const auto split = build_split_shift(MapSystem::base_n(2), 1, 2, 2);
  auto s = std::make_shared<FiniteSubshift>(full_subshift(2));
  StochasticRows rows(2);
  rows[0] = {{0, 0.5}, {1, 0.5}};
  rows[1] = {{0, 1.0}};
  const auto m = make_markov(std::move(s), std::move(rows));
  const auto pushed = push_measure(block_measure_of(m, split), split);
  CHECK(entropy(pushed) == doctest::Approx(entropy(m)).epsilon(1e-12));
}

TEST_CASE("Abramov identity for random measures") {
  std::mt19937 rng(41);
  for (const auto& [map, base] :
       {std::pair{MapSystem::base_n(2), 2}, {MapSystem::base_n(3), 2},
        {MapSystem::f_lambda(0.25), 4}}) {
    const int k_trunc = map.branch_count() ? *map.branch_count() : 10;
    const Truncation tr = map.derive_truncation(k_trunc);
    auto shift = std::make_shared<FiniteSubshift>(tr.shift);
    for (int m = 1; m <= 3; ++m) {
      const auto split = build_split_shift(map, m, k_trunc, base);
      for (int trial = 0; trial < 20; ++trial) {
        const auto mm = random_markov(shift, rng, tr.labels);
        const auto bm = block_measure_of(mm, split);
        const auto pushed = push_measure(bm, split);
        const double tau = split.roof.integral(bm);
        CHECK(std::abs(entropy(pushed) - entropy(bm) / tau) <= 1e-9);
        CHECK(std::abs(entropy(bm) - entropy(mm)) <= 1e-9);  // recode preserves entropy
      }
    }
  }
}

TEST_CASE("cylinder correspondences carry the measure identity") {
  std::mt19937 rng(43);
  const auto map = MapSystem::f_lambda(0.25);
  const Truncation tr = map.derive_truncation(5);
  auto shift = std::make_shared<FiniteSubshift>(tr.shift);
  for (int m = 1; m <= 2; ++m) {
    const auto split = build_split_shift(map, m, 5, 4);
    const auto mm = random_markov(shift, rng, tr.labels);
    const auto bm = block_measure_of(mm, split);
    const auto pushed = push_measure(bm, split);
    const double tau = split.roof.integral(bm);
    const auto words = enumerate_words(tr.shift, m + 2);
    for (int trial = 0; trial < 15; ++trial) {
      const Word& w = words[rng() % words.size()];
      // parent cylinder -> split cylinder (Lemma-5.7 direction)
      const auto run = split.parent_cylinder_to_split(w);
      Word run_word(run.size());
      for (std::size_t i = 0; i < run.size(); ++i) run_word[i] = static_cast<Symbol>(run[i] + 1);
      CHECK(pushed.cylinder_mass(run_word) * tau ==
            doctest::Approx(mm.cylinder_mass(w)).epsilon(1e-10));
      // and back (Lemma-5.6 direction): the parent word of the full run
      const Word back = split.split_cylinder_to_parent(run);
      CHECK(back == w);
    }
  }
}

TEST_CASE("roof integral converges to the Lyapunov bracket as m grows") {
  std::mt19937 rng(47);
  const auto map = MapSystem::f_lambda(0.25);
  const Truncation tr = map.derive_truncation(6);
  auto shift = std::make_shared<FiniteSubshift>(tr.shift);
  std::vector<MarkovMeasure>测;
  std::vector<MarkovMeasure> measures;
  for (int i = 0; i < 5; ++i) measures.push_back(random_markov(shift, rng, tr.labels));
  double prev = 1e300;
  for (int m = 1; m <= 4; ++m) {
    const auto split = build_split_shift(map, m, 6, 4);
    double worst = 0.0;
    for (const auto& mm : measures) {
      const auto bm = block_measure_of(mm, split);
      const double tau_scaled = split.roof.integral(bm) / split.roof.scale();
      const auto [lo, hi] = lyapunov(mm, map, m);
      worst = std::max(worst, std::abs(tau_scaled - 0.5 * (lo + hi)));
    }
    CHECK(worst <= prev + 1e-12);
    prev = worst;
  }
}

TEST_CASE("split delta-inf proxy shrinks with m for f_lambda") {
  const auto map = MapSystem::f_lambda(0.25);
  const auto s1 = build_split_shift(map, 1, 4, 4);
  const double p1 = split_delta_inf_proxy(s1, 2, 3, 14);
  CHECK(std::isfinite(p1));
}

TEST_SUITE_END();
