#include <doctest.h>

#include <cmath>
#include <random>

#include "dvcv/errors.hpp"
#include "dvcv/protocol.hpp"
#include "oracles.hpp"

using namespace dvcv;
using doctest::Approx;

namespace {

const double kS2 = 1.0 / std::sqrt(2.0);

std::pair<cplx, cplx> random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cplx a0(g(rng), g(rng)), a1(g(rng), g(rng));
  const double n = std::sqrt(std::norm(a0) + std::norm(a1));
  return {a0 / n, a1 / n};
}

}  // namespace

TEST_CASE("qubit validation") {
  CHECK_NOTHROW(UnknownQubit::make(0.6, 0.8));
  CHECK_THROWS_AS(UnknownQubit::make(0.6, 0.6), InvalidArgumentError);
  CHECK_THROWS_AS(UnknownQubit::make(0.6, 0.8, 0, 2), InvalidArgumentError);
  CHECK_NOTHROW(UnknownQubit::make(0.6, 0.8, 0, 2, Encoding::dual_rail, true));
  CHECK_THROWS_AS(UnknownQubit::make(0.6, 0.8, 1, 1), InvalidArgumentError);
}

TEST_CASE("amplitude factors at alpha = 1/sqrt2 are (2n-1)/(2m-1)") {
  for (int n = 0; n <= 4; ++n)
    for (int m = 0; m <= 5; ++m) {
      if (n == m) continue;
      CAPTURE(n);
      CAPTURE(m);
      CHECK(amp_factor_dual(0, 1, n, m, kS2, kS2) ==
            Approx((2.0 * n - 1.0) / (2.0 * m - 1.0)).epsilon(1e-12));
    }
  CHECK(amp_factor_dual(0, 1, 3, 3, 0.4, 0.4) == Approx(1.0));
}

TEST_CASE("frozen factor and probabilities") {
  // from tests/oracles/derive_values.py
  CHECK(amp_factor_dual(1, 2, 1, 3, 0.5053, 0.5053) == Approx(-0.3621851682899292).epsilon(1e-12));
  CHECK(direct_success_probability(0, 1, 0.5) == Approx(0.24430723363213919).epsilon(1e-12));
  CHECK(direct_success_probability(1, 2, 0.5) == Approx(0.22233562602032231).epsilon(1e-12));
  CHECK(direct_success_probability(0, 3, 0.8) == Approx(0.10172649194701712).epsilon(1e-12));
  CHECK(pair_sum_probability(0, 1, 2, 3, 0.9) == Approx(0.044100874158733909).epsilon(1e-12));
  CHECK(direct_success_probability(1, 2, 0.77) ==
        Approx(oracle::direct_probability(1, 2, 0.77)).epsilon(1e-12));
}

TEST_CASE("singular factors are reported") {
  // c_11(1) = 0
  CHECK_THROWS_AS(amp_factor_dual(0, 1, 0, 1, 1.0, 1.0), SingularFactorError);
  CHECK_THROWS_AS(amp_factor_single(1, 0, 1, 1.0), SingularFactorError);
  const auto q = UnknownQubit::make(0.6, 0.8);
  CHECK(std::isfinite(outcome_probability_dual(q, 0, 1, 1.0, 1.0)));
}

TEST_CASE("outcome probabilities are complete and pair sums are qubit independent") {
  std::mt19937_64 rng(7);
  for (auto [l, k] : {std::pair{0, 1}, std::pair{1, 2}}) {
    for (double a : {0.4, 0.9}) {
      auto [a0, a1] = random_qubit(rng);
      const auto q = UnknownQubit::make(a0, a1, l, k);
      const int cut = analytic_cutoff(a, l, k);
      double s = 0.0;
      for (int n = 0; n <= cut; ++n)
        for (int m = 0; m <= cut; ++m) s += outcome_probability_dual(q, n, m, a, a);
      CHECK(s == Approx(1.0).epsilon(1e-10));
      CHECK(direct_success_probability(l, k, a) + am_probability(l, k, a) ==
            Approx(1.0).epsilon(1e-10));
      const double pair = outcome_probability_dual(q, 1, 3, a, a) + outcome_probability_dual(q, 3, 1, a, a);
      CHECK(std::abs(pair - pair_sum_probability(l, k, 1, 3, a)) < 1e-12);
      CHECK(amp_factor_dual(l, k, 1, 3, a, a) * amp_factor_dual(l, k, 3, 1, a, a) ==
            Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("direct success optimum") {
  const auto m = maximize_direct_success(0, 1);
  CHECK(m.alpha == Approx(0.628482).epsilon(1e-5));
  CHECK(m.value == Approx(0.2637).epsilon(0.0005 / 0.2637));
  CHECK_THROWS_AS(maximize_direct_success(0, 1, 1.0, 0.5), InvalidArgumentError);
}

TEST_CASE("Z exponent follows outcome and parity") {
  CHECK(correction_z_power(Parity::even, 0, 0) == 0);
  CHECK(correction_z_power(Parity::odd, 0, 0) == 1);
  CHECK(correction_z_power(Parity::even, 3, 1) == 0);
  CHECK(correction_z_power(Parity::even, 0, 1) == 1);
  const QubitState q{0.6, 0.8};
  const auto hh = apply_h(apply_h(q));
  CHECK(std::abs(hh.c0 - q.c0) < 1e-15);
  CHECK(std::real(apply_z(q, 1).c1) == Approx(-0.8));
}

TEST_CASE("corrected dual-rail output is (a0, a1 A) for every outcome and parity") {
  std::mt19937_64 rng(11);
  for (auto [l, k] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 3}}) {
    auto [a0, a1] = random_qubit(rng);
    const auto q = UnknownQubit::make(a0, a1, l, k);
    for (const auto& rec : analytic_dual_pipeline(q, 0.55, 0.55, 4, 1.5)) {
      if (rec.singular) continue;
      const QubitState want{a0, a1 * rec.amp_factor};
      CHECK(fidelity(rec.corrected_state, want) == Approx(1.0).epsilon(1e-12));
      if (rec.outcome.n == rec.outcome.m) CHECK(rec.amp_factor == Approx(1.0));
    }
  }
}

TEST_CASE("parity split of the outcome probability") {
  const auto q = UnknownQubit::make(0.6, 0.8);
  const auto recs = analytic_dual_pipeline(q, 0.5, 0.5, 1, 1.0);
  const double e = std::exp(-2.0);
  for (const auto& rec : recs) {
    const double split = rec.outcome.parity == Parity::even ? (1 + e) / 2 : (1 - e) / 2;
    CHECK(rec.branch_probability == Approx(rec.probability * split));
  }
  for (const auto& rec : analytic_dual_pipeline(q, 0.5, 0.5, 1))
    CHECK(rec.branch_probability == Approx(rec.probability / 2));
}

TEST_CASE("single-rail output carries A_n") {
  const auto q = UnknownQubit::make(kS2, cplx(0, kS2), 0, 1, Encoding::single_rail);
  double total = 0.0;
  for (int n = 0; n <= 25; ++n) {
    const auto rec = single_rail_pipeline(q, 0.8, n, n % 2 ? Parity::odd : Parity::even);
    total += rec.probability;
    const QubitState want{q.a0, q.a1 * amp_factor_single(0, 1, n, 0.8)};
    CHECK(fidelity(rec.corrected_state, want) == Approx(1.0).epsilon(1e-12));
  }
  CHECK(total == Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(single_rail_pipeline(UnknownQubit::make(0.6, 0.8), 0.8, 0), InvalidArgumentError);
}

TEST_CASE("finite-reflectance circuit converges to the analytic protocol") {
  const auto q = UnknownQubit::make(0.6, cplx(0.0, 0.8));
  double prev_err = 1.0, prev_inf = 1.0;
  for (double r : {0.2, 0.1, 0.05}) {
    const auto run = brute_force_pipeline(q, 0.5, 0.5, r, 1);
    CHECK(run.beta == Approx(0.5 * std::sqrt(1 - r * r) / r));
    CHECK(run.max_probability_error() < prev_err);
    CHECK(run.max_infidelity() < prev_inf);
    prev_err = run.max_probability_error();
    prev_inf = run.max_infidelity();
    for (const auto& rec : run.records) CHECK(rec.purity <= 1.0 + 1e-12);
  }
  CHECK(prev_inf < 1e-2);
  CHECK(prev_err < 2e-3);
  CHECK_THROWS_AS(brute_force_pipeline(q, 0.5, 0.5, 0.5), InvalidArgumentError);
}
