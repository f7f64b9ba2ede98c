#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dvcv/fock.hpp"

namespace dvcv {

enum class Encoding { dual_rail, single_rail };

/// The state to teleport: a0|lk> + a1|kl> (dual rail) or a0|l> + a1|k>
/// (single rail).
struct UnknownQubit {
  cplx a0{1.0, 0.0};
  cplx a1{0.0, 0.0};
  int l = 0;
  int k = 1;
  Encoding encoding = Encoding::dual_rail;

  /// Validates normalization (1e-12), l != k, and l - k odd unless
  /// `allow_even_difference` is set.
  static UnknownQubit make(cplx a0, cplx a1, int l = 0, int k = 1,
                           Encoding encoding = Encoding::dual_rail,
                           bool allow_even_difference = false);

  /// (-1)^{l-k} = -1, the condition for the controlled-Z sign flip.
  bool has_odd_difference() const { return (l - k) % 2 != 0; }
};

/// Alice's measurement record. `m` is absent for single-rail runs.
struct Outcome {
  Parity parity = Parity::even;
  int n = 0;
  std::optional<int> m;
};

/// Bob's conditional state for one outcome, before and after correction.
struct TeleportRecord {
  Outcome outcome;
  QubitState bob_state;
  double probability = 0.0;         ///< outcome probability summed over parity
  double branch_probability = 0.0;  ///< probability of this parity branch
  double amp_factor = 0.0;          ///< A; infinite when singular
  bool singular = false;            ///< A has a vanishing denominator
  int z_power = 0;                  ///< Z exponent reduced mod 2
  QubitState corrected_state;       ///< H Z^{z_power} bob_state
};

/// Sum cutoff used by the analytic probability sums.
int analytic_cutoff(double alpha, int l, int k);

/// A_nm^(lk)(alpha, alpha1) = c_kn(alpha) c_lm(alpha1) / (c_ln(alpha) c_km(alpha1)).
/// Throws SingularFactorError on a zero denominator.
double amp_factor_dual(int l, int k, int n, int m, double alpha, double alpha1);

/// A_n^(lk)(alpha) = c_kn(alpha) / c_ln(alpha).
double amp_factor_single(int l, int k, int n, double alpha);

struct BobStates {
  QubitState even_branch;
  QubitState odd_branch;
  double norm_factor = 0.0;  ///< (|a0|^2 + |a1|^2 A^2)^{-1/2}; 0 when singular
};

/// Bob's normalized states after Alice registers (n, m) with an even or odd
/// parity in the coherent mode.
BobStates bob_states_dual(const UnknownQubit& qubit, double alpha, double alpha1, int n, int m);

/// Same for the single-rail variant with outcome n.
BobStates bob_states_single(const UnknownQubit& qubit, double alpha, int n);

/// Z exponent Bob applies: n - l (even branch) or n - l + 1 (odd), mod 2.
int correction_z_power(Parity parity, int n, int l);

QubitState apply_z(const QubitState& q, int power);
QubitState apply_h(const QubitState& q);

/// H Z^{z} applied to Bob's state; the result is renormalized.
QubitState correct(const QubitState& bob, Parity parity, int n, int l);

/// Probability of registering (n, m), summed over parity, in the unreduced
/// form F^2(alpha) F^2(alpha1) (|a0 c_ln c_km|^2 + |a1 c_kn c_lm|^2), which
/// stays finite where A is singular.
double outcome_probability_dual(const UnknownQubit& qubit, int n, int m, double alpha,
                                double alpha1);

/// Single-rail outcome probability F^2 (|a0 c_ln|^2 + |a1 c_kn|^2).
double outcome_probability_single(const UnknownQubit& qubit, int n, double alpha);

/// P_nm + P_mn at alpha = alpha1; independent of the qubit.
double pair_sum_probability(int l, int k, int n, int m, double alpha);

/// Probability of the outcomes n = m (clean teleportation) at alpha = alpha1.
double direct_success_probability(int l, int k, double alpha, int cutoff = -1);

/// Probability of the outcomes n != m (amplitude-modulated output), summed
/// pairwise over n < m.
double am_probability(int l, int k, double alpha, int cutoff = -1);

struct Maximum {
  double alpha = 0.0;
  double value = 0.0;
};

/// Displacement amplitude in [lo, hi] maximizing direct_success_probability.
Maximum maximize_direct_success(int l, int k, double lo = 0.05, double hi = 1.5);

/// Every outcome (parity, n, m) with n, m <= outcome_max in lexicographic
/// order. Parity branches split P_nm as (1 +- exp(-2 beta^2)) / 2; without a
/// channel amplitude (the zeroth-order limit) the split is even.
std::vector<TeleportRecord> analytic_dual_pipeline(const UnknownQubit& qubit, double alpha,
                                                   double alpha1, int outcome_max,
                                                   std::optional<double> beta = std::nullopt);

/// Record for single-rail outcome n; `probability` is the parity-summed P_n.
TeleportRecord single_rail_pipeline(const UnknownQubit& qubit, double alpha, int n,
                                    Parity parity = Parity::even);

/// Exact finite-reflectance simulation of one conditional branch.
struct BruteForceRecord {
  Outcome outcome;
  double probability = 0.0;           ///< this parity branch
  double analytic_probability = 0.0;  ///< zeroth-order P_nm / 2
  Eigen::Matrix2cd bob_rho;           ///< normalized, basis (|01>, |10>)
  Eigen::Matrix2cd corrected_rho;     ///< after H Z^{z}
  QubitState corrected_state;         ///< dominant eigenvector of corrected_rho
  QubitState analytic_state;          ///< normalize(a0, a1 A)
  double purity = 0.0;
  double fidelity = 0.0;              ///< <analytic|corrected_rho|analytic>
};

struct BruteForceRun {
  double r = 0.0;
  double beta = 0.0;   ///< channel amplitude alpha t / r
  double beta1 = 0.0;  ///< ancilla amplitude alpha1 t / r
  std::vector<BruteForceRecord> records;

  /// Parity-summed simulated probability of (n, m).
  double outcome_probability(int n, int m) const;
  /// Largest absolute probability error against the zeroth-order P_nm over
  /// the simulated outcomes.
  double max_probability_error() const;
  /// Largest corrected-state infidelity over the simulated branches.
  double max_infidelity() const;
};

/// Full optical circuit at reflectance r (t = sqrt(1 - r^2)) for both beam
/// splitters: channel, ancilla |-beta1>, and dual-rail qubit; beta and beta1
/// are chosen so that beta r / t = alpha. Every expansion term factorizes over
/// the mode pairs (1,3), (2,4) and Bob's rails, so only two-mode states are
/// ever materialized. Mode 2 is traced out; mode 1 is measured for parity.
BruteForceRun brute_force_pipeline(const UnknownQubit& qubit, double alpha, double alpha1,
                                   double r, int outcome_max = 2,
                                   double tail_tolerance = kDefaultTailTolerance);

}  // namespace dvcv
