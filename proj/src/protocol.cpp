#include "dvcv/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/optics.hpp"

namespace dvcv {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double sign_power(int exponent) { return exponent % 2 == 0 ? 1.0 : -1.0; }

// X = c_ln(alpha) c_km(alpha1), Y = c_kn(alpha) c_lm(alpha1); A = Y / X.
struct FactorPair {
  double x = 0.0;
  double y = 0.0;
};

FactorPair dual_pair(int l, int k, int n, int m, double alpha, double alpha1) {
  const int lk = std::max(l, k);
  const MatrixElementTable ta(alpha, lk, n);
  const MatrixElementTable tb(alpha1, lk, m);
  return {ta(l, n) * tb(k, m), ta(k, n) * tb(l, m)};
}

FactorPair single_pair(int l, int k, int n, double alpha) {
  const MatrixElementTable t(alpha, std::max(l, k), n);
  return {t(l, n), t(k, n)};
}

// Bob's branches from the unreduced amplitudes (a0 X, a1 Y).
BobStates bob_states_from(const UnknownQubit& q, const FactorPair& f, int n) {
  const cplx u = q.a0 * f.x;
  const cplx v = q.a1 * f.y;
  const double rail_sign = sign_power(std::abs(n - q.l));
  const double lk_sign = sign_power(std::abs(q.l - q.k));
  BobStates out;
  out.even_branch = QubitState{u + v, rail_sign * (u + lk_sign * v), dual_rail_basis()};
  out.odd_branch = QubitState{u + v, -rail_sign * (u + lk_sign * v), dual_rail_basis()};
  if (out.even_branch.norm_squared() > 0.0) {
    out.even_branch = out.even_branch.normalized();
    out.odd_branch = out.odd_branch.normalized();
  }
  if (f.x != 0.0) {
    const double a = f.y / f.x;
    out.norm_factor = 1.0 / std::sqrt(std::norm(q.a0) + std::norm(q.a1) * a * a);
  }
  return out;
}

TeleportRecord make_record(const UnknownQubit& q, const FactorPair& f, const Outcome& outcome,
                           double probability, double branch_probability) {
  TeleportRecord rec;
  rec.outcome = outcome;
  const BobStates bob = bob_states_from(q, f, outcome.n);
  rec.bob_state = outcome.parity == Parity::even ? bob.even_branch : bob.odd_branch;
  rec.probability = probability;
  rec.branch_probability = branch_probability;
  rec.singular = f.x == 0.0;
  rec.amp_factor = rec.singular ? std::numeric_limits<double>::infinity() : f.y / f.x;
  rec.z_power = correction_z_power(outcome.parity, outcome.n, q.l);
  if (rec.bob_state.norm_squared() > 0.0) {
    rec.corrected_state = correct(rec.bob_state, outcome.parity, outcome.n, q.l);
  } else {
    rec.corrected_state = QubitState{0.0, 0.0, dual_rail_basis()};
  }
  return rec;
}

}  // namespace

UnknownQubit UnknownQubit::make(cplx a0, cplx a1, int l, int k, Encoding encoding,
                                bool allow_even_difference) {
  if (std::abs(std::norm(a0) + std::norm(a1) - 1.0) > 1e-12) {
    throw InvalidArgumentError("qubit amplitudes must satisfy |a0|^2 + |a1|^2 = 1");
  }
  if (l < 0 || k < 0 || l == k) throw InvalidArgumentError("need distinct l, k >= 0");
  UnknownQubit q{a0, a1, l, k, encoding};
  if (!q.has_odd_difference() && !allow_even_difference) {
    throw InvalidArgumentError("l - k must be odd for the controlled-Z sign flip");
  }
  return q;
}

int analytic_cutoff(double alpha, int l, int k) {
  return std::max(20, default_cutoff(alpha) + std::max(l, k));
}

double amp_factor_dual(int l, int k, int n, int m, double alpha, double alpha1) {
  const FactorPair f = dual_pair(l, k, n, m, alpha, alpha1);
  if (f.x == 0.0) throw SingularFactorError("c_ln(alpha) c_km(alpha1) vanishes");
  return f.y / f.x;
}

double amp_factor_single(int l, int k, int n, double alpha) {
  const FactorPair f = single_pair(l, k, n, alpha);
  if (f.x == 0.0) throw SingularFactorError("c_ln(alpha) vanishes");
  return f.y / f.x;
}

BobStates bob_states_dual(const UnknownQubit& qubit, double alpha, double alpha1, int n, int m) {
  return bob_states_from(qubit, dual_pair(qubit.l, qubit.k, n, m, alpha, alpha1), n);
}

BobStates bob_states_single(const UnknownQubit& qubit, double alpha, int n) {
  return bob_states_from(qubit, single_pair(qubit.l, qubit.k, n, alpha), n);
}

int correction_z_power(Parity parity, int n, int l) {
  const int power = n - l + (parity == Parity::odd ? 1 : 0);
  return ((power % 2) + 2) % 2;
}

QubitState apply_z(const QubitState& q, int power) {
  return {q.c0, power % 2 == 0 ? q.c1 : -q.c1, q.basis};
}

QubitState apply_h(const QubitState& q) {
  return {kInvSqrt2 * (q.c0 + q.c1), kInvSqrt2 * (q.c0 - q.c1), q.basis};
}

QubitState correct(const QubitState& bob, Parity parity, int n, int l) {
  return apply_h(apply_z(bob, correction_z_power(parity, n, l))).normalized();
}

double outcome_probability_dual(const UnknownQubit& qubit, int n, int m, double alpha,
                                double alpha1) {
  const FactorPair f = dual_pair(qubit.l, qubit.k, n, m, alpha, alpha1);
  const double ff = std::pow(displacement_prefactor(alpha) * displacement_prefactor(alpha1), 2);
  return ff * (std::norm(qubit.a0 * f.x) + std::norm(qubit.a1 * f.y));
}

double outcome_probability_single(const UnknownQubit& qubit, int n, double alpha) {
  const FactorPair f = single_pair(qubit.l, qubit.k, n, alpha);
  const double ff = std::pow(displacement_prefactor(alpha), 2);
  return ff * (std::norm(qubit.a0 * f.x) + std::norm(qubit.a1 * f.y));
}

double pair_sum_probability(int l, int k, int n, int m, double alpha) {
  const MatrixElementTable t(alpha, std::max(l, k), std::max(n, m));
  const double f4 = std::pow(t.prefactor(), 4);
  const double a = t(l, n) * t(k, m);
  const double b = t(l, m) * t(k, n);
  return f4 * (a * a + b * b);
}

double direct_success_probability(int l, int k, double alpha, int cutoff) {
  if (cutoff < 0) cutoff = analytic_cutoff(alpha, l, k);
  const MatrixElementTable t(alpha, std::max(l, k), cutoff);
  double s = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    const double v = t(l, n) * t(k, n);
    s += v * v;
  }
  return std::pow(t.prefactor(), 4) * s;
}

double am_probability(int l, int k, double alpha, int cutoff) {
  if (cutoff < 0) cutoff = analytic_cutoff(alpha, l, k);
  const MatrixElementTable t(alpha, std::max(l, k), cutoff);
  double s = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = n + 1; m <= cutoff; ++m) {
      const double a = t(l, n) * t(k, m);
      const double b = t(l, m) * t(k, n);
      s += a * a + b * b;
    }
  }
  return std::pow(t.prefactor(), 4) * s;
}

Maximum maximize_direct_success(int l, int k, double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgumentError("empty search interval");
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      [&](double a) { return -direct_success_probability(l, k, a); }, lo, hi,
      std::numeric_limits<double>::digits / 2);
  return {x, -fx};
}

std::vector<TeleportRecord> analytic_dual_pipeline(const UnknownQubit& qubit, double alpha,
                                                   double alpha1, int outcome_max,
                                                   std::optional<double> beta) {
  if (qubit.encoding != Encoding::dual_rail) {
    throw InvalidArgumentError("dual-rail pipeline needs a dual-rail qubit");
  }
  const double overlap = beta ? std::exp(-2.0 * *beta * *beta) : 0.0;
  std::vector<TeleportRecord> out;
  for (Parity parity : {Parity::even, Parity::odd}) {
    const double split = 0.5 * (1.0 + (parity == Parity::even ? overlap : -overlap));
    for (int n = 0; n <= outcome_max; ++n) {
      for (int m = 0; m <= outcome_max; ++m) {
        const double p = outcome_probability_dual(qubit, n, m, alpha, alpha1);
        out.push_back(make_record(qubit, dual_pair(qubit.l, qubit.k, n, m, alpha, alpha1),
                                  Outcome{parity, n, m}, p, p * split));
      }
    }
  }
  return out;
}

TeleportRecord single_rail_pipeline(const UnknownQubit& qubit, double alpha, int n,
                                    Parity parity) {
  if (qubit.encoding != Encoding::single_rail) {
    throw InvalidArgumentError("single-rail pipeline needs a single-rail qubit");
  }
  if (!qubit.has_odd_difference()) {
    throw InvalidArgumentError("l - k must be odd for the controlled-Z sign flip");
  }
  const double p = outcome_probability_single(qubit, n, alpha);
  return make_record(qubit, single_pair(qubit.l, qubit.k, n, alpha),
                     Outcome{parity, n, std::nullopt}, p, 0.5 * p);
}

double BruteForceRun::outcome_probability(int n, int m) const {
  double s = 0.0;
  for (const auto& rec : records) {
    if (rec.outcome.n == n && rec.outcome.m == m) s += rec.probability;
  }
  return s;
}

double BruteForceRun::max_probability_error() const {
  double worst = 0.0;
  for (const auto& rec : records) {
    if (rec.outcome.parity != Parity::even) continue;
    const int n = rec.outcome.n;
    const int m = *rec.outcome.m;
    worst = std::max(worst, std::abs(outcome_probability(n, m) - 2.0 * rec.analytic_probability));
  }
  return worst;
}

double BruteForceRun::max_infidelity() const {
  double worst = 0.0;
  for (const auto& rec : records) worst = std::max(worst, 1.0 - rec.fidelity);
  return worst;
}

BruteForceRun brute_force_pipeline(const UnknownQubit& qubit, double alpha, double alpha1,
                                   double r, int outcome_max, double tail_tolerance) {
  if (qubit.encoding != Encoding::dual_rail) {
    throw InvalidArgumentError("brute-force pipeline simulates the dual-rail circuit");
  }
  if (!(r > 0.0 && r <= 0.3)) throw InvalidArgumentError("reflectance must lie in (0, 0.3]");
  if (!(alpha > 0.0 && alpha1 > 0.0)) {
    throw InvalidArgumentError("displacement amplitudes must be positive");
  }
  const auto bs = BeamSplitterParams::from_reflectance(r);
  BruteForceRun run;
  run.r = r;
  run.beta = alpha * bs.t / r;
  run.beta1 = alpha1 * bs.t / r;

  const Mode m1{1}, m2{2}, m3{3}, m4{4};
  const int qmax = std::max({qubit.l, qubit.k, 1});
  // Qubit mode listed first: the coherent input |y> of the second mode then
  // displaces the qubit mode by -r y, so |-beta> shifts it by +beta r.
  const auto mix = [&](Mode qmode, int photons, Mode cmode, double amplitude) {
    const FockState in = tensor(FockState::number(qmode, photons, qmax, tail_tolerance),
                                coherent_state(cmode, amplitude, -1, tail_tolerance));
    return apply_bs(in, qmode, cmode, bs);
  };
  // photons[j]: occupation of mode 3 (resp. 4) in qubit term j.
  const std::array<int, 2> photons3{qubit.l, qubit.k};
  const std::array<int, 2> photons4{qubit.k, qubit.l};
  const std::array<cplx, 2> coeff{qubit.a0, qubit.a1};

  // pair13[b][j]: b = 0 is Bob's |01> branch riding on |-beta>, b = 1 is |10> on |beta>.
  const std::array<std::array<FockState, 2>, 2> pair13{{{mix(m3, photons3[0], m1, -run.beta),
                                                   mix(m3, photons3[1], m1, -run.beta)},
                                                  {mix(m3, photons3[0], m1, run.beta),
                                                   mix(m3, photons3[1], m1, run.beta)}}};
  const std::array<FockState, 2> pair24{mix(m4, photons4[0], m2, -run.beta1),
                                        mix(m4, photons4[1], m2, -run.beta1)};

  const auto slice = [](const FockState& s, int n) {
    // Amplitudes of the second mode with the first fixed at n.
    const std::size_t dim = s.dim(1);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    if (n <= s.truncation().n_max[0]) {
      for (std::size_t p = 0; p < dim; ++p) {
        v(static_cast<Eigen::Index>(p)) = s.amplitudes()[static_cast<std::size_t>(n) * dim + p];
      }
    }
    return v;
  };

  for (Parity parity : {Parity::even, Parity::odd}) {
    for (int n = 0; n <= outcome_max; ++n) {
      for (int m = 0; m <= outcome_max; ++m) {
        // Slices over mode 1 (parity-filtered) and mode 2 for each term.
        std::array<std::array<Eigen::VectorXcd, 2>, 2> v13;
        for (int b = 0; b < 2; ++b) {
          for (int j = 0; j < 2; ++j) {
            v13[b][j] = slice(pair13[b][j], n);
            for (Eigen::Index p = 0; p < v13[b][j].size(); ++p) {
              if ((p % 2 == 0) != (parity == Parity::even)) v13[b][j](p) = 0.0;
            }
          }
        }
        std::array<Eigen::VectorXcd, 2> v24{slice(pair24[0], m), slice(pair24[1], m)};

        Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
        for (int b = 0; b < 2; ++b) {
          for (int bp = 0; bp < 2; ++bp) {
            for (int j = 0; j < 2; ++j) {
              for (int jp = 0; jp < 2; ++jp) {
                const cplx g13 = v13[bp][jp].dot(v13[b][j]);  // sum conj(x') x
                const cplx g24 = v24[jp].dot(v24[j]);
                rho(b, bp) += 0.5 * coeff[j] * std::conj(coeff[jp]) * g13 * g24;
              }
            }
          }
        }

        BruteForceRecord rec;
        rec.outcome = Outcome{parity, n, m};
        rec.probability = rho.trace().real();
        rec.analytic_probability = 0.5 * outcome_probability_dual(qubit, n, m, alpha, alpha1);
        const FactorPair f = dual_pair(qubit.l, qubit.k, n, m, alpha, alpha1);
        rec.analytic_state =
            QubitState{qubit.a0 * f.x, qubit.a1 * f.y, dual_rail_basis()}.normalized();
        if (rec.probability > 0.0) {
          rec.bob_rho = rho / rec.probability;
          const int z = correction_z_power(parity, n, qubit.l);
          Eigen::Matrix2cd u;
          u << kInvSqrt2, kInvSqrt2 * sign_power(z), kInvSqrt2, -kInvSqrt2 * sign_power(z);
          rec.corrected_rho = u * rec.bob_rho * u.adjoint();
          rec.purity = (rec.bob_rho * rec.bob_rho).trace().real();
          const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(rec.corrected_rho);
          const Eigen::Vector2cd top = eig.eigenvectors().col(1);
          rec.corrected_state = QubitState{top(0), top(1), dual_rail_basis()};
          Eigen::Vector2cd target(rec.analytic_state.c0, rec.analytic_state.c1);
          rec.fidelity = (target.adjoint() * rec.corrected_rho * target)(0, 0).real();
        }
        run.records.push_back(std::move(rec));
      }
    }
  }
  return run;
}

}  // namespace dvcv
