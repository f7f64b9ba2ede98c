#include <doctest.h>

#include <cmath>

#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/optics.hpp"
#include "oracles.hpp"

using namespace dvcv;
using doctest::Approx;

TEST_CASE("low-order coefficients match the explicit polynomials") {
  for (double a : {0.3, 0.7071067811865476, 1.0, 1.5}) {
    CAPTURE(a);
    CHECK(matrix_element(0, 0, a) == Approx(1.0).epsilon(1e-14));
    CHECK(matrix_element(1, 0, a) == Approx(-a).epsilon(1e-14));
    CHECK(matrix_element(1, 1, a) == Approx(1.0 - a * a).epsilon(1e-14));
    CHECK(matrix_element(0, 3, a) == Approx(a * a * a / std::sqrt(6.0)).epsilon(1e-14));
    for (int l = 0; l <= 5; ++l)
      for (int n = 0; n <= 20; ++n)
        CHECK(std::abs(matrix_element(l, n, a) - oracle::c_polynomial(l, n, a)) < 1e-12);
  }
}

TEST_CASE("frozen high-precision values") {
  // from tests/oracles/derive_values.py
  CHECK(matrix_element(2, 2, 0.4072) == Approx(0.6821231031420928).epsilon(1e-13));
  CHECK(matrix_element(3, 5, 0.7) == Approx(0.62241276346295584).epsilon(1e-13));
  CHECK(matrix_element(4, 3, 1.1) == Approx(0.34488309166666667).epsilon(1e-13));
  CHECK(matrix_element(5, 0, 1.5) == Approx(-0.69321136184247586).epsilon(1e-13));
  const auto s = displaced_number_state(Mode{1}, 2, 0.9);
  CHECK(std::real(s.amplitudes()[4]) == Approx(0.48160330018453617).epsilon(1e-12));
}

TEST_CASE("zero displacement is the identity") {
  CHECK(matrix_element(3, 3, 0.0) == 1.0);
  CHECK(matrix_element(3, 2, 0.0) == 0.0);
}

TEST_CASE("coefficients flip sign with the displacement by (-1)^(n-l)") {
  for (int l = 0; l <= 4; ++l)
    for (int n = 0; n <= 12; ++n) CHECK(parity_sign_check(l, n, 0.83));
}

TEST_CASE("displaced number states are normalized columns of the displacement operator") {
  const double a = 1.2;
  const auto d = displacement_matrix(a, 40);
  for (int l = 0; l <= 3; ++l) {
    const auto s = displaced_number_state(Mode{1}, l, a, 39);
    CHECK(s.norm() == Approx(1.0).epsilon(1e-10));
    for (int n = 0; n < 40; ++n) CHECK(std::abs(std::real(s.amplitudes()[static_cast<std::size_t>(n)]) - d(n, l)) < 1e-9);
  }
}

TEST_CASE("table completeness and orthogonality") {
  const MatrixElementTable t(0.8, 3, 40);
  CHECK(t.weighted_overlap(0, 0) == Approx(1.0).epsilon(1e-12));
  CHECK(t.weighted_overlap(3, 3) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(t.weighted_overlap(1, 2)) < 1e-12);
}

TEST_CASE("cat states carry a single parity") {
  const auto even = scs_state(Mode{1}, Parity::even, 1.3);
  const auto odd = scs_state(Mode{1}, Parity::odd, 1.3);
  CHECK(even.norm() == Approx(1.0));
  CHECK(odd.norm() == Approx(1.0));
  const auto amps_e = even.amplitudes();
  const auto amps_o = odd.amplitudes();
  for (std::size_t n = 1; n < amps_e.size(); n += 2) CHECK(std::abs(amps_e[n]) < 1e-14);
  for (std::size_t n = 0; n < amps_o.size(); n += 2) CHECK(std::abs(amps_o[n]) < 1e-14);
  CHECK(scs_normalizer(Parity::even, 1.0) ==
        Approx(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0)))));
}

TEST_CASE("tail guard fires when the cutoff is too small") {
  CHECK_THROWS_AS(coherent_state(Mode{1}, 3.0, 4), TailMassError);
  CHECK_NOTHROW(coherent_state(Mode{1}, 3.0));
  CHECK(default_cutoff(1.0) == 19);
}
