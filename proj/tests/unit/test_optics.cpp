#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/optics.hpp"

using namespace dvcv;
using doctest::Approx;

namespace {

FockState two_mode(int n1, int n2, int cut = 3) {
  return tensor(FockState::number(Mode{1}, n1, cut), FockState::number(Mode{2}, n2, cut));
}

cplx amp(const FockState& s, int n1, int n2) {
  const int occ[] = {n1, n2};
  return s.amplitude(occ);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(BeamSplitterParams::balanced().validate());
  CHECK_THROWS_AS((BeamSplitterParams{0.9, 0.9}.validate()), InvalidArgumentError);
  CHECK_THROWS_AS((BeamSplitterParams{0.0, 1.0}.validate()), InvalidArgumentError);
  CHECK_NOTHROW(BeamSplitterParams::from_reflectance(-0.3).validate());
  CHECK_THROWS_AS(HybridChannel{0.0}.validate(), InvalidArgumentError);
}

TEST_CASE("single photon follows the creation-operator map") {
  const auto bs = BeamSplitterParams::from_reflectance(0.6);
  const auto out = apply_bs(two_mode(1, 0, 1), Mode{1}, Mode{2}, bs);
  CHECK(std::real(amp(out, 1, 0)) == Approx(0.8));
  CHECK(std::real(amp(out, 0, 1)) == Approx(0.6));
  const auto out2 = apply_bs(two_mode(0, 1, 1), Mode{1}, Mode{2}, bs);
  CHECK(std::real(amp(out2, 1, 0)) == Approx(-0.6));
  CHECK(std::real(amp(out2, 0, 1)) == Approx(0.8));
}

TEST_CASE("two-photon interference on a balanced splitter") {
  // a+ b+ -> (b+^2 - a+^2) / 2, so |11> -> (|02> - |20>) / sqrt2
  const auto out = apply_bs(two_mode(1, 1, 1), Mode{1}, Mode{2}, BeamSplitterParams::balanced());
  CHECK(std::abs(amp(out, 1, 1)) < 1e-15);
  CHECK(std::real(amp(out, 2, 0)) == Approx(-1.0 / std::sqrt(2.0)));
  CHECK(std::real(amp(out, 0, 2)) == Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("blocks are orthogonal and the splitter inverts with -r") {
  const auto bs = BeamSplitterParams::from_reflectance(0.37);
  for (int total = 0; total <= 8; ++total) {
    const auto& u = beam_splitter_block(bs, total);
    CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(total + 1, total + 1)).norm() < 1e-12);
  }
  const auto inv = BeamSplitterParams{bs.t, -bs.r};
  const auto in = two_mode(2, 1);
  const auto back = apply_bs(apply_bs(in, Mode{1}, Mode{2}, bs), Mode{1}, Mode{2}, inv);
  CHECK(std::norm(amp(back, 2, 1)) == Approx(1.0));
}

TEST_CASE("coherent states split into coherent states") {
  // |x>|y> -> |t x - r y>|r x + t y>
  const double x = 0.7, y = -0.4;
  const auto bs = BeamSplitterParams::from_reflectance(0.3);
  const auto in = tensor(coherent_state(Mode{1}, x), coherent_state(Mode{2}, y));
  const auto out = apply_bs(in, Mode{1}, Mode{2}, bs);
  const auto want = tensor(coherent_state(Mode{1}, bs.t * x - bs.r * y, out.n_max(Mode{1})),
                           coherent_state(Mode{2}, bs.r * x + bs.t * y, out.n_max(Mode{2})));
  CHECK(std::norm(inner(want, out)) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("capped output throws when mass is discarded") {
  const auto in = two_mode(3, 3);
  CHECK_THROWS_AS(apply_bs(in, Mode{1}, Mode{2}, BeamSplitterParams::balanced(), 3), TailMassError);
  CHECK_THROWS_AS(apply_bs(in, Mode{1}, Mode{1}, BeamSplitterParams::balanced()),
                  InvalidArgumentError);
}

TEST_CASE("cache tolerates concurrent readers") {
  std::vector<std::thread> pool;
  std::vector<double> norms(8);
  for (int i = 0; i < 8; ++i) {
    pool.emplace_back([i, &norms] {
      const auto bs = BeamSplitterParams::from_reflectance(0.1 + 0.01 * (i % 3));
      norms[static_cast<std::size_t>(i)] = beam_splitter_block(bs, 12).norm();
    });
  }
  for (auto& t : pool) t.join();
  for (double n : norms) CHECK(n == Approx(std::sqrt(13.0)));
}

TEST_CASE("displacement unitary matches displaced number states") {
  const auto in = FockState::number(Mode{1}, 2, 2);
  const auto out = displacement_unitary(in, Mode{1}, 0.9);
  const auto want = displaced_number_state(Mode{1}, 2, 0.9, out.n_max(Mode{1}));
  CHECK(std::norm(inner(want, out)) == Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(displacement_unitary(in, Mode{1}, 3.0, 4), TailMassError);
}

TEST_CASE("highly transmissive splitter acts as a displacement") {
  const auto in = FockState::from_amplitudes(Mode{1}, {0.6, 0.8});
  const double beta = 3.0;
  double prev = 0.0;
  for (double r : {0.2, 0.1, 0.05}) {
    const auto res = htbs_residual(in, beta, r, 1);
    CHECK(res.displacement == Approx(beta * r / std::sqrt(1 - r * r)));
    const double infid = 1.0 - res.fidelity;
    if (prev > 0.0) CHECK(infid < prev);
    prev = infid;
  }
  CHECK(prev < 1e-2);
  const auto neg = htbs_residual(in, beta, 0.1, -1);
  CHECK(neg.displacement < 0.0);
  CHECK_THROWS_AS(htbs_residual(in, beta, 0.5, 1), InvalidArgumentError);
}

TEST_CASE("hybrid channel is normalized and entangled") {
  const HybridChannel ch{1.0};
  const auto s = channel_state(ch);
  CHECK(s.norm() == Approx(1.0));
  CHECK(channel_raw_norm(ch) == Approx(1.0).epsilon(1e-10));
  const auto n = negativity(ch);
  CHECK(n.closed_form == Approx(0.990799).epsilon(1e-6));
  CHECK(std::abs(n.numeric - n.closed_form) < 1e-6);
  CHECK(n.vidal_werner == Approx(n.numeric / 2));
  // frozen: sqrt(1 - exp(-1)) from tests/oracles/derive_values.py
  CHECK(negativity(HybridChannel{0.5}).numeric == Approx(0.79506009762065011).epsilon(1e-9));
  CHECK(negativity(HybridChannel{0.01}).numeric == Approx(0.02).epsilon(1e-3));
  CHECK(negativity(HybridChannel{2.0}).numeric > 0.9999);
}
