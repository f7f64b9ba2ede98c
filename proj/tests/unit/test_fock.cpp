#include <doctest.h>

#include <cmath>

#include "dvcv/errors.hpp"
#include "dvcv/fock.hpp"

using namespace dvcv;
using doctest::Approx;

namespace {

FockState bell_like() {
  // (|0,1> + |1,0>)/sqrt2 on modes 1, 2 with cutoff 1
  const double s = 1.0 / std::sqrt(2.0);
  return FockState({Mode{1}, Mode{2}}, TruncationConfig{{1, 1}}, {0.0, s, s, 0.0});
}

}  // namespace

TEST_CASE("number state and amplitude lookup") {
  const auto s = FockState::number(Mode{3}, 2, 4);
  CHECK(s.num_modes() == 1);
  CHECK(s.n_max(Mode{3}) == 4);
  const int occ[] = {2};
  CHECK(std::abs(s.amplitude(occ) - cplx(1.0)) == 0.0);
  CHECK(s.norm() == Approx(1.0));
  CHECK_THROWS_AS(FockState::number(Mode{3}, 5, 4), OutOfRangeError);
}

TEST_CASE("construction rejects inconsistent input") {
  CHECK_THROWS_AS(FockState({Mode{1}, Mode{1}}, TruncationConfig{{1, 1}}, std::vector<cplx>(4)),
                  ModeCollisionError);
  CHECK_THROWS_AS(FockState({Mode{1}}, TruncationConfig{{1}}, std::vector<cplx>(3)),
                  InvalidArgumentError);
  CHECK_THROWS_AS(FockState({Mode{1}}, TruncationConfig{{0}}, std::vector<cplx>(1)),
                  InvalidArgumentError);
}

TEST_CASE("tensor product orders modes and rejects collisions") {
  const auto a = FockState::number(Mode{1}, 1, 2);
  const auto b = FockState::number(Mode{2}, 0, 1);
  const auto ab = tensor(a, b);
  REQUIRE(ab.modes().size() == 2);
  CHECK(ab.modes()[0] == Mode{1});
  const int occ[] = {1, 0};
  CHECK(std::abs(ab.amplitude(occ) - cplx(1.0)) == 0.0);
  CHECK_THROWS_AS(tensor(a, a), ModeCollisionError);
}

TEST_CASE("number projection removes the mode and renormalizes") {
  const auto s = bell_like();
  const auto p = project_number(s, Mode{2}, 1);
  CHECK(p.probability == Approx(0.5));
  REQUIRE_FALSE(p.empty());
  CHECK(p.state->num_modes() == 1);
  CHECK(std::abs(p.state->amplitudes()[0]) == Approx(1.0));
  CHECK_THROWS_AS(project_number(s, Mode{2}, 2), OutOfRangeError);
  CHECK_THROWS_AS(project_number(s, Mode{7}, 0), OutOfRangeError);
}

TEST_CASE("parity projection keeps the mode") {
  const double s = 1.0 / std::sqrt(3.0);
  const auto st = FockState::from_amplitudes(Mode{1}, {s, s, s}, 0.5);
  const auto even = project_parity(st, Mode{1}, Parity::even);
  const auto odd = project_parity(st, Mode{1}, Parity::odd);
  CHECK(even.probability == Approx(2.0 / 3.0));
  CHECK(odd.probability == Approx(1.0 / 3.0));
  CHECK(even.state->num_modes() == 1);
  CHECK(std::abs(odd.state->amplitudes()[1]) == Approx(1.0));
}

TEST_CASE("inner product, scaling and superposition") {
  const auto a = FockState::number(Mode{1}, 0, 2);
  const auto b = FockState::number(Mode{1}, 1, 3);
  CHECK(std::abs(inner(a, b)) == 0.0);
  const auto sum = (a + b.scaled(cplx(0.0, 1.0))).normalized();
  CHECK(sum.n_max(Mode{1}) == 3);
  CHECK(std::norm(inner(a, sum)) == Approx(0.5));
}

TEST_CASE("tail check reports mass at the cutoff") {
  const auto ok = FockState::from_amplitudes(Mode{1}, {1.0, 1e-8}, 1e-10);
  CHECK_NOTHROW(ok.check_tail());
  const auto bad = FockState::from_amplitudes(Mode{1}, {1.0, 1e-3}, 1e-10);
  CHECK_THROWS_AS(bad.check_tail(), TailMassError);
}

TEST_CASE("permutation relabels the storage order") {
  const auto ab = tensor(FockState::number(Mode{1}, 1, 1), FockState::number(Mode{2}, 0, 2));
  const auto ba = ab.permuted({Mode{2}, Mode{1}});
  const int occ[] = {0, 1};
  CHECK(std::abs(ba.amplitude(occ) - cplx(1.0)) == 0.0);
}

TEST_CASE("qubit fidelity requires matching bases") {
  const QubitState a{1.0, 1.0};
  const QubitState b{1.0, -1.0};
  CHECK(fidelity(a, a) == Approx(1.0));
  CHECK(fidelity(a, b) == Approx(0.0));
  QubitState c{1.0, 0.0, {"|0>", "|1>"}};
  CHECK_THROWS_AS(fidelity(a, c), BasisMismatchError);
}
