#include "dvcv/displaced.hpp"

#include <cmath>

#include "dvcv/errors.hpp"

namespace dvcv {

int default_cutoff(double x) {
  const double a = std::abs(x);
  return static_cast<int>(std::ceil(a * a + 6.0 * a + 12.0));
}

double displacement_prefactor(double alpha) { return std::exp(-0.5 * alpha * alpha); }

MatrixElementTable::MatrixElementTable(double alpha, int l_max, int n_max)
    : alpha_(alpha),
      l_max_(l_max),
      n_max_(n_max),
      prefactor_(displacement_prefactor(alpha)) {
  if (l_max < 0 || n_max < 0) throw InvalidArgumentError("negative table bound");
  const auto width = static_cast<std::size_t>(n_max) + 1;
  c_.assign((static_cast<std::size_t>(l_max) + 1) * width, 0.0);

  c_[0] = 1.0;
  for (std::size_t n = 1; n < width; ++n) {
    c_[n] = c_[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  for (std::size_t l = 0; l < static_cast<std::size_t>(l_max); ++l) {
    const double* row = &c_[l * width];
    double* next = &c_[(l + 1) * width];
    const double norm = 1.0 / std::sqrt(static_cast<double>(l + 1));
    for (std::size_t n = 0; n < width; ++n) {
      const double up = n > 0 ? std::sqrt(static_cast<double>(n)) * row[n - 1] : 0.0;
      next[n] = (up - alpha * row[n]) * norm;
    }
  }
}

double MatrixElementTable::weighted_overlap(int l, int k) const {
  double s = 0.0;
  for (int n = 0; n <= n_max_; ++n) s += (*this)(l, n) * (*this)(k, n);
  return prefactor_ * prefactor_ * s;
}

double matrix_element(int l, int n, double alpha) {
  if (l < 0 || n < 0) throw OutOfRangeError("matrix element indices must be >= 0");
  return MatrixElementTable(alpha, l, n)(l, n);
}

FockState displaced_number_state(Mode mode, int l, double alpha, int n_max,
                                 double tail_tolerance) {
  if (l < 0) throw OutOfRangeError("negative photon number");
  if (n_max < 0) n_max = default_cutoff(alpha) + l;
  const MatrixElementTable table(alpha, l, n_max);
  std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    amps[static_cast<std::size_t>(n)] = table.prefactor() * table(l, n);
  }
  FockState state = FockState::from_amplitudes(mode, std::move(amps), tail_tolerance);
  state.check_tail();
  return state;
}

FockState coherent_state(Mode mode, double alpha, int n_max, double tail_tolerance) {
  return displaced_number_state(mode, 0, alpha, n_max, tail_tolerance);
}

double scs_normalizer(Parity parity, double beta) {
  const double overlap = std::exp(-2.0 * beta * beta);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return 1.0 / std::sqrt(2.0 * (1.0 + sign * overlap));
}

FockState scs_state(Mode mode, Parity parity, double beta, int n_max,
                    double tail_tolerance) {
  if (!(beta > 0.0)) throw InvalidArgumentError("SCS amplitude must be positive");
  if (n_max < 0) n_max = default_cutoff(beta);
  const MatrixElementTable table(beta, 0, n_max);
  const double norm = scs_normalizer(parity, beta) * table.prefactor();
  std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    // |-beta> contributes (-1)^n c_0n, |beta> contributes c_0n.
    const bool odd = n % 2 == 1;
    const double minus = odd ? -table(0, n) : table(0, n);
    const double value = parity == Parity::even ? minus + table(0, n) : minus - table(0, n);
    amps[static_cast<std::size_t>(n)] = norm * value;
  }
  FockState state = FockState::from_amplitudes(mode, std::move(amps), tail_tolerance);
  state.check_tail();
  return state;
}

bool parity_sign_check(int l, int n, double alpha) {
  const double plus = matrix_element(l, n, alpha);
  const double minus = matrix_element(l, n, -alpha);
  const double sign = (n - l) % 2 == 0 ? 1.0 : -1.0;
  return std::abs(minus - sign * plus) <= 1e-12 * std::max(1.0, std::abs(plus));
}

}  // namespace dvcv
