#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dvcv/fock.hpp"
#include "dvcv/protocol.hpp"

namespace dvcv {

/// Amplitude-modulated qubit N (a0 |0_L> + a1 A |1_L>) with a factor A known to
/// both parties.
struct AMQubit {
  cplx a0{1.0, 0.0};
  cplx a1{0.0, 0.0};
  double factor = 1.0;
  std::array<std::string, 2> basis = dual_rail_basis();

  /// (|a0|^2 + |a1|^2 A^2)^{-1/2}
  double norm_factor() const;
  /// Normalized N (a0, a1 A).
  QubitState state() const;
};

enum class DemodMethod { displacement, swap, none };

const char* to_string(DemodMethod m);

/// One detector outcome of a demodulation attempt.
struct DemodBranch {
  std::string aux_outcome;
  double probability = 0.0;  ///< conditional on the normalized AM input
  QubitState restored;
  int sign = 1;              ///< restored is proportional to (a0, sign * a1)
};

struct DemodResult {
  bool success = false;
  DemodMethod method = DemodMethod::none;
  QubitState restored;
  int sign = 1;
  /// Success weight relative to the unnormalized branch (the quantity that
  /// multiplies F^4 |c_ln c_km|^2 in the overall probability).
  double success_probability = 0.0;
  /// Same, conditional on the normalized AM input: N^2 * success_probability,
  /// obtained from the simulated optics.
  double simulated_probability = 0.0;
  std::optional<double> gamma;
  double residual_factor = 0.0;  ///< |factor| left on the restored branch; 1 on success
  std::vector<DemodBranch> branches;
  /// Non-matching outcomes of the displacement method, each still an AM qubit
  /// that may be demodulated again, with its weight relative to the
  /// unnormalized input.
  std::vector<AMQubit> residual;
  std::vector<double> residual_weights;
};

/// All gamma in [-gamma_max, gamma_max] with A c_0n(gamma) / c_1n(gamma) = +-1.
/// Since c_0n / c_1n = gamma / (n - gamma^2) this is gamma^2 +- A gamma - n = 0.
std::vector<double> solve_gamma(double factor, int n, double gamma_max = 8.0);

/// F^2(gamma) c_1n(gamma)^2
double displacement_demod_probability(double gamma, int n);

/// |A|^2 / (1 + |A|^2)
double swap_probability(double factor);

struct DisplacementPlan {
  int outcome = 0;
  double gamma = 0.0;
  double q = 0.0;
};

/// Root and detector outcome (n <= max_outcome) with the largest single-step
/// success probability; empty when no root exists.
std::optional<DisplacementPlan> best_displacement_step(double factor, int max_outcome = 8);

/// Displaces the auxiliary rail by the best root for detector outcome n,
/// simulated through the optics module, and reports the branch for n plus
/// the residual AM qubits of the other outcomes.
DemodResult demod_displacement(const AMQubit& am, int n);

/// Interferes the AM rail with the prearranged state N'(A|01> + |10>) on a
/// balanced splitter and post-selects one photon in the two mixed modes.
/// Usable once.
DemodResult demod_swap(const AMQubit& am);

/// Success weight of the displacement method iterated on the residual
/// outcomes up to `depth` attempts. Factors within `unit_tolerance` of +-1 count
/// as restored.
double displacement_chain_success(double factor, int depth, double unit_tolerance = 1e-9);

enum class PolicyKind { best_of, swap_only, displacement_only, skip_all };

struct DemodPolicy {
  PolicyKind kind = PolicyKind::best_of;
  int chain_depth = 3;
  double unit_tolerance = 1e-9;
};

struct OutcomeContribution {
  int n = 0;
  std::optional<int> m;
  double factor = 0.0;
  double weight = 0.0;  ///< F^4 c_ln^2 c_km^2 (dual) or F^2 c_ln^2 (single)
  DemodMethod method = DemodMethod::none;
  bool clean = false;   ///< |A| = 1: restored by the Pauli correction alone
  double q = 0.0;
  double contribution = 0.0;
};

struct OverallResult {
  double direct = 0.0;  ///< clean outcomes
  double delta = 0.0;   ///< demodulated AM outcomes
  double total = 0.0;
  std::vector<OutcomeContribution> outcomes;  ///< AM outcomes in (n, m) order
};

/// Teleportation plus demodulation probability at alpha = alpha1.
OverallResult overall_success(int l, int k, double alpha, const DemodPolicy& policy = {},
                              Encoding encoding = Encoding::dual_rail, int cutoff = -1);

/// Displacement amplitude in [lo, hi] where A_nm^(lk)(alpha, alpha) = target.
double unit_factor_alpha(int l, int k, int n, int m, double lo, double hi,
                         double target = -1.0);

struct InitiallyAMRecord {
  int n = 0;
  std::optional<int> m;
  double factor = 0.0;       ///< residual factor on Bob's side
  double probability = 0.0;  ///< probability of registering this outcome
  bool clean = false;
  double q = 0.0;
  double contribution = 0.0;
};

struct InitiallyAMResult {
  std::vector<InitiallyAMRecord> records;
  double clean_probability = 0.0;
  double total_success = 0.0;  ///< recomputed from the composed factors
  /// Dual rail only: the closed expression with |A_10|^4 in the (1,0) term and
  /// |A_10|^{-2} |A_nm|^2 in the remaining AM terms, evaluated literally.
  std::optional<double> total_printed;
};

/// Pre-modulated dual-rail qubit N_AM (a0, a1 / A_01) teleported at
/// alpha = alpha1; AM outcomes restored by swapping. Outcomes with
/// n + m <= max_photon_sum.
InitiallyAMResult initially_am_dual(cplx a0, cplx a1, double alpha, int max_photon_sum = 20);

/// Pre-modulated single-rail qubit N_AM (a0, a1 / A_0); non-vacuum outcomes
/// restored by the displacement chain.
InitiallyAMResult initially_am_single(cplx a0, cplx a1, double alpha, int chain_depth = 3,
                                      int cutoff = -1);

}  // namespace dvcv
