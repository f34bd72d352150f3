#include <stdexcept>
#include <cmath>
#include <random>

#include "birkhoff/spectrum.hpp"
#include "birkhoff/thermo.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

SpectrumQuery base2_query(std::vector<double> gamma) {
  SpectrumQuery q(MapSystem::base_n(2));
  q.truncation_k = 2;
  q.potentials = {Potential::indicator(1), Potential::indicator(2)};
  q.gamma = std::move(gamma);
  return q;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log(p) + (1 - p) * std::log(1 - p));
}

}  // namespace

TEST_SUITE_BEGIN("spectrum");

TEST_CASE("membership on the 2-shift") {
  CHECK(membership(base2_query({0.6, 0.4})) == Membership::Z0);
  CHECK(membership(base2_query({0.7, 0.7})) == Membership::NotInZ);
}

TEST_CASE("membership detects sub-probability frequency deficits") {
  const auto r = freq_spectrum(MapSystem::gauss(), {0.3, 0.2}, 40);
  CHECK(r.tag == Membership::ZminusZ0);
}

TEST_CASE("alpha3 on the 2-shift: measure of maximal dimension") {
  const auto r = alpha3(base2_query({0.5, 0.5}));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.optimizer.pi[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.report.dinkelbach_residual <= 1e-8);
}

TEST_CASE("alpha3 reproduces the digit-frequency closed form") {
  const auto r = alpha3(base2_query({0.7, 0.3}));
  CHECK(r.value == doctest::Approx(binary_entropy(0.7) / std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("alpha3 degenerates to zero at the corner frequency") {
  const auto r = alpha3(base2_query({1.0, 0.0}));
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("alpha3 rejects gamma outside Z0") {
  CHECK_THROWS_WITH_AS(alpha3(base2_query({0.7, 0.7})), doctest::Contains("not attainable"),
                       std::invalid_argument);
}

TEST_CASE("Besicovitch-Eggleston oracle on base 3") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng);
    const double s = a + b + c;
    a /= s;
    b /= s;
    c /= s;
    SpectrumQuery q(MapSystem::base_n(3));
    q.truncation_k = 3;
    q.potentials = {Potential::indicator(1), Potential::indicator(2), Potential::indicator(3)};
    q.gamma = {a, b, c};
    const auto r = alpha3(q);
    const double oracle = -(a * std::log(a) + b * std::log(b) + c * std::log(c)) / std::log(3.0);
    CHECK(std::abs(r.value - oracle) <= 1e-4);
    CHECK(entropy(r.optimizer) <= lyapunov(r.optimizer, q.map).second + 1e-9);
  }
}

TEST_CASE("alpha3 on f_lambda with a single C0 constraint") {
  // frozen from the truncation-40 scan
  const double frozen[][2] = {{0.1, 0.908550}, {0.3, 0.977921}, {0.5, 0.810548}};
  for (const auto& [g, expect] : frozen) {
    SpectrumQuery q(MapSystem::f_lambda(0.25));
    q.truncation_k = 40;
    q.potentials = {Potential::indicator(2)};
    q.gamma = {g};
    const auto r = alpha3(q);
    CHECK(r.value == doctest::Approx(expect).epsilon(2e-4));
    CHECK(r.report.dinkelbach_residual <= 1e-8);
    CHECK(r.report.moment_residual <= 1e-9);
    CHECK(entropy(r.optimizer) <= lyapunov(r.optimizer, q.map).second + 1e-9);
  }
}

TEST_CASE("alpha3 is stable under multiplier restarts") {
  SpectrumQuery q(MapSystem::f_lambda(0.25));
  q.truncation_k = 30;
  q.potentials = {Potential::indicator(2)};
  q.gamma = {0.3};
  q.opts.k_schedule = {30};
  const auto base = alpha3(q);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    q.opts.multiplier_seed = seed;
    const auto r = alpha3(q);
    CHECK(std::abs(r.value - base.value) <= 1e-6);
  }
}

TEST_CASE("alpha3 value grows along the truncation schedule") {
  SpectrumQuery q(MapSystem::f_lambda(0.25));
  q.truncation_k = 40;
  q.potentials = {Potential::indicator(2)};
  q.gamma = {0.3};
  const auto r = alpha3(q);
  double prev = -1.0;
  for (double v : r.report.value_by_k) {
    if (!std::isfinite(v)) continue;
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  for (const auto& f : r.report.flags) CHECK(f.find("not monotone") == std::string::npos);
}

TEST_CASE("alpha4 reduces to alpha3 at full mass and never drops below it") {
  const double d_inf = std::log(4.0);
  const double L = std::log(16.0 / 3.0);
  for (double g : {0.1, 0.2, 0.3, 0.5, 0.7}) {
    SpectrumQuery q(MapSystem::f_lambda(0.25));
    q.truncation_k = 40;
    q.opts.k_schedule = {40};
    q.potentials = {Potential::indicator(2)};
    q.gamma = {g};
    const auto a3 = alpha3(q);
    const auto a4 = alpha4(q, d_inf, L);
    CHECK(a4.value >= a3.value - 1e-9);
    CHECK(a4.value - a3.value <= 0.02);  // interior of Z0: the suprema agree
    CHECK(a4.value <= 1.0 + 1e-9);
  }
}

TEST_CASE("alpha4 at gamma = 0 with shifted indicators") {
  SpectrumQuery q(MapSystem::f_lambda(0.25));
  q.truncation_k = 30;
  q.potentials = {Potential::indicator(2), Potential::indicator(3), Potential::indicator(4)};
  q.gamma = {0.0, 0.0, 0.0};
  const auto r = alpha4(q, std::log(4.0), std::log(16.0 / 3.0));
  CHECK(r.value == doctest::Approx(std::log(4.0) / std::log(16.0 / 3.0)).epsilon(1e-6));
  CHECK(r.mass_c == doctest::Approx(0.0));
}

TEST_CASE("alpha4 rejects unbounded derivatives and non-C0 data") {
  SpectrumQuery g(MapSystem::gauss());
  g.potentials = {Potential::indicator(1)};
  g.gamma = {0.2};
  CHECK_THROWS_WITH_AS(alpha4(g, 0.5, 1.0), doctest::Contains("unbounded"),
                       std::invalid_argument);
  SpectrumQuery q(MapSystem::f_lambda(0.25));
  q.potentials = {Potential::constant(1.0)};
  q.gamma = {1.0};
  CHECK_THROWS_WITH_AS(alpha4(q, std::log(4.0), std::log(16.0 / 3.0)),
                       doctest::Contains("C_0"), std::invalid_argument);
}

TEST_CASE("freq_spectrum on compact families") {
  const auto r = freq_spectrum(MapSystem::base_n(3), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 3);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.tag == Membership::Z0);
}

TEST_CASE("freq_spectrum gauss: deficit frequencies land on s_infinity") {
  const auto r = freq_spectrum(MapSystem::gauss(), {0.3, 0.2}, 40);
  CHECK(r.tag == Membership::ZminusZ0);
  CHECK(std::abs(r.value - 0.5) <= 0.02);
}

TEST_CASE("freq_spectrum f_lambda at gamma = 0 matches the transient dimension") {
  const auto r = freq_spectrum(MapSystem::f_lambda(0.25), {}, 40);
  const double expect = std::log(4.0) / std::log(16.0 / 3.0);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-3));
  const double dim_t = transient_dimension(MapSystem::f_lambda(0.25));
  CHECK(std::abs(r.value - dim_t) <= 1e-9);  // both branches coincide here
}

TEST_CASE("freq_spectrum f_lambda with full-mass frequencies") {
  const auto r = freq_spectrum(MapSystem::f_lambda(0.25), {0.5, 0.5}, 30);
  CHECK(r.tag == Membership::Z0);
  CHECK(r.value > 0.0);
  CHECK(r.value <= 1.0 + 1e-9);
  CHECK(r.mass_c == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("transient dimension closed form") {
  CHECK(transient_dimension(MapSystem::f_lambda(0.25)) ==
        doctest::Approx(0.8281444907572746).epsilon(1e-12));
  CHECK(transient_dimension(MapSystem::f_lambda(0.6)) == doctest::Approx(1.0));
  CHECK(transient_dimension(MapSystem::f_lambda(0.5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(transient_dimension(MapSystem::gauss()), std::invalid_argument);
}

TEST_CASE("unconstrained pressure equals the variational supremum") {
  const auto s = full_subshift(2);
  const auto up = unconstrained_pressure(s, {1, 2}, Potential::zero());
  CHECK(up.value == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(up.optimizer.pi[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(entropy(up.optimizer) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_SUITE_END();
