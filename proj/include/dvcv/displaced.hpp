#pragma once

#include <vector>

#include "dvcv/fock.hpp"

namespace dvcv {

/// Photon-number cutoff admitting a coherent or displaced component of
/// amplitude x: ceil(|x|^2 + 6|x| + 12).
int default_cutoff(double x);

/// exp(-|alpha|^2 / 2), the prefactor separating displaced number states from
/// their polynomial coefficients.
double displacement_prefactor(double alpha);

/// Coefficients c_ln(alpha) of displaced number states |l, alpha> = D(alpha)|l>
/// in the Fock basis:  <n| D(alpha) |l> = F(alpha) c_ln(alpha).
///
/// Rows are built by the ladder recurrence
///   c_{l+1,n} = (sqrt(n) c_{l,n-1} - alpha c_{l,n}) / sqrt(l+1)
/// seeded with the coherent row c_0n = alpha^n / sqrt(n!).
class MatrixElementTable {
 public:
  MatrixElementTable(double alpha, int l_max, int n_max);

  double alpha() const { return alpha_; }
  int l_max() const { return l_max_; }
  int n_max() const { return n_max_; }
  double prefactor() const { return prefactor_; }

  double operator()(int l, int n) const {
    return c_[static_cast<std::size_t>(l) * (static_cast<std::size_t>(n_max_) + 1) +
              static_cast<std::size_t>(n)];
  }

  /// F^2 sum_n c_ln c_kn over the stored columns.
  double weighted_overlap(int l, int k) const;

 private:
  double alpha_;
  int l_max_;
  int n_max_;
  double prefactor_;
  std::vector<double> c_;
};

/// Single coefficient c_ln(alpha). c_ln(0) is the Kronecker delta.
double matrix_element(int l, int n, double alpha);

/// Single-mode D(alpha)|l> truncated at n_max (default: cutoff for |alpha|
/// plus l). Throws TailMassError when the top level carries more than the
/// tail tolerance.
FockState displaced_number_state(Mode mode, int l, double alpha, int n_max = -1,
                                 double tail_tolerance = kDefaultTailTolerance);

/// Coherent state |alpha> (the l = 0 displaced number state).
FockState coherent_state(Mode mode, double alpha, int n_max = -1,
                         double tail_tolerance = kDefaultTailTolerance);

/// N_+ (even) or N_- (odd) normalizer of |-beta> +- |beta>:
/// (2 (1 +- exp(-2 beta^2)))^{-1/2}.
double scs_normalizer(Parity parity, double beta);

/// Even SCS N_+(|-beta> + |beta>) or odd SCS N_-(|-beta> - |beta>).
FockState scs_state(Mode mode, Parity parity, double beta, int n_max = -1,
                    double tail_tolerance = kDefaultTailTolerance);

/// True when c_ln(-alpha) = (-1)^{n-l} c_ln(alpha) holds to 1e-12.
bool parity_sign_check(int l, int n, double alpha);

}  // namespace dvcv
