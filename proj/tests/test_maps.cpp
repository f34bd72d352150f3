#include <stdexcept>
#include <cmath>
#include <random>

#include "birkhoff/maps.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

MapSystem fibonacci_map() {
  // two linear branches coded by [[0,1],[1,1]]
  Branch b1{1, 0.0, 0.4, 0.4, 1.0, 1.5, true};
  Branch b2{2, 0.4, 1.0, 0.0, 1.0, 5.0 / 3.0, true};
  return MapSystem::piecewise_linear({b1, b2});
}

}  // namespace

TEST_SUITE_BEGIN("maps");

TEST_CASE("derive_transitions gauss is the full shift") {
  const auto s = MapSystem::gauss().derive_transitions(4);
  CHECK(s.k == 4);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) CHECK(s.allows(i, j));
}

TEST_CASE("derive_transitions f_lambda containment") {
  const auto s = MapSystem::f_lambda(0.25).derive_transitions(3);
  CHECK(s.a == std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 0, 1, 1});
}

TEST_CASE("derive_transitions base_3 probed at 5 prunes") {
  const Truncation tr = MapSystem::base_n(3).derive_truncation(5);
  CHECK(tr.shift.k == 3);
  CHECK(tr.labels == std::vector<Symbol>{1, 2, 3});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) CHECK(tr.shift.allows(i, j));
}

TEST_CASE("derive_transitions custom Markov layout") {
  const auto s = fibonacci_map().derive_transitions(2);
  CHECK(s.a == std::vector<std::uint8_t>{0, 1, 1, 1});
}

TEST_CASE("non-Markov layout rejected with the offending pair") {
  Branch b1{1, 0.0, 0.5, 0.0, 0.75, 1.5, true};
  Branch b2{2, 0.5, 1.0, 0.0, 1.0, 2.0, true};
  auto map = MapSystem::piecewise_linear({b1, b2});
  CHECK_THROWS_WITH_AS(map.derive_transitions(2), doctest::Contains("branch 1"),
                       std::runtime_error);
}

TEST_CASE("cylinder geometry base_2") {
  const auto g = MapSystem::base_n(2).cylinder_geometry({1, 2, 1});
  CHECK(g.inf_log_deriv == doctest::Approx(3 * std::log(2.0)).epsilon(1e-14));
  CHECK(g.sup_log_deriv == doctest::Approx(3 * std::log(2.0)).epsilon(1e-14));
  CHECK(g.diam_lower == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(g.diam_upper == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("cylinder geometry f_lambda branch-2 slope") {
  const auto g = MapSystem::f_lambda(0.25).cylinder_geometry({2, 2});
  CHECK(g.inf_log_deriv == doctest::Approx(2 * std::log(16.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("cylinder geometry gauss first branch") {
  const auto g = MapSystem::gauss().cylinder_geometry({1});
  CHECK(g.inf_log_deriv == doctest::Approx(0.0));
  CHECK(g.sup_log_deriv == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("inadmissible word rejected") {
  CHECK_THROWS_AS(MapSystem::f_lambda(0.25).cylinder_geometry({3, 1}), std::invalid_argument);
}

TEST_CASE("diameter bounded by zeta^{-(n-1)}") {
  std::mt19937 rng(3);
  for (const auto& map : {MapSystem::base_n(2), MapSystem::f_lambda(0.3), MapSystem::gauss()}) {
    const Truncation tr = map.derive_truncation(5);
    for (int trial = 0; trial < 40; ++trial) {
      Word w{1 + static_cast<Symbol>(rng() % tr.shift.k)};
      while (static_cast<int>(w.size()) < 6) {
        Symbol next = 1 + static_cast<Symbol>(rng() % tr.shift.k);
        if (!tr.shift.allows(w.back(), next)) continue;
        w.push_back(next);
      }
      Word orig(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) orig[i] = tr.labels[w[i] - 1];
      const auto g = map.cylinder_geometry(orig);
      CHECK(g.diam_lower <= g.diam_upper + 1e-15);
      CHECK(g.diam_upper <= std::pow(map.zeta(), -(static_cast<int>(w.size()) - 1)) + 1e-12);
    }
  }
}

TEST_CASE("piecewise-linear slope products are exact") {
  const auto map = MapSystem::f_lambda(0.25);
  const auto g = map.cylinder_geometry({1, 2, 3, 2});
  const double prod = (4.0 / 3.0) * (16.0 / 3.0) * (16.0 / 3.0) * (16.0 / 3.0);
  CHECK(std::exp(g.sup_log_deriv) == doctest::Approx(prod).epsilon(1e-12));
}

TEST_CASE("gauss branch derivative range") {
  const auto map = MapSystem::gauss();
  for (int n = 1; n <= 20; ++n) {
    const auto [lo, hi] = map.log_deriv_range({n});
    CHECK(lo == doctest::Approx(2 * std::log(n)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(2 * std::log(n + 1)).epsilon(1e-12));
  }
}

TEST_CASE("gauss variation decay up to n = 8") {
  const auto map = MapSystem::gauss();
  const Truncation tr = map.derive_truncation(3);
  double prev = 1e300;
  for (int n = 1; n <= 8; ++n) {
    double worst = 0.0;
    for (const Word& w : enumerate_words(tr.shift, n)) {
      const auto g = map.cylinder_geometry(w);
      worst = std::max(worst, (g.sup_log_deriv - g.inf_log_deriv) / n);
    }
    CHECK(worst <= prev + 1e-12);
    prev = worst;
  }
}

TEST_CASE("indicator potential") {
  const auto map = MapSystem::base_n(2);
  const Potential f1 = map.indicator_potential(1);
  const Potential f3 = map.indicator_potential(3);
  CHECK(f1(Word{1, 2}) == 1.0);
  CHECK(f3(Word{1, 2}) == 0.0);
  CHECK(f1.support_bound().value() == 1);
}

TEST_SUITE_END();
