#pragma once

#include <Eigen/Dense>

#include "dvcv/fock.hpp"

namespace dvcv {

/// Real two-mode beam splitter with transmittance t and reflectance r.
///
/// Acting on modes (a, b) listed in that order, creation operators map as
///   a^+ -> t a^+ + r b^+,   b^+ -> -r a^+ + t b^+,
/// so |10> -> t|10> + r|01> and |01> -> -r|10> + t|01>.
struct BeamSplitterParams {
  double t = 1.0;
  double r = 0.0;

  /// Throws InvalidArgumentError unless t > 0 and t^2 + r^2 = 1 within 1e-12.
  /// Negative r is accepted so that BS(t, -r) inverts BS(t, r).
  void validate() const;

  static BeamSplitterParams from_reflectance(double r);
  static BeamSplitterParams balanced();
};

/// Entangled hybrid channel (|-beta>|01> + |beta>|10>)/sqrt(2).
struct HybridChannel {
  double beta = 1.0;

  void validate() const;
};

/// Block of the beam-splitter unitary on the subspace with `total` photons.
/// Entry (i, j) maps |j, total-j> to |i, total-i> (index = photons in mode a).
/// Blocks are cached per (t, r); the cache is safe for concurrent readers.
const Eigen::MatrixXd& beam_splitter_block(const BeamSplitterParams& params, int total);

/// Exact beam-splitter action. Output cutoffs of both modes default to the
/// largest total photon number of the input, which makes the map exactly
/// unitary on the truncated space. A smaller `n_max_out` discards the excess
/// and throws TailMassError when the discarded mass exceeds the tail tolerance.
FockState apply_bs(const FockState& state, Mode a, Mode b, const BeamSplitterParams& params,
                   int n_max_out = -1);

/// Top-left dim x dim block of D(gamma) = exp(gamma (a^+ - a)), computed by
/// exponentiating the generator on a padded space.
Eigen::MatrixXd displacement_matrix(double gamma, int dim);

/// D(gamma) on one mode. The output cutoff defaults to the input cutoff plus
/// default_cutoff(gamma); mass pushed beyond it must stay within the tail
/// tolerance, otherwise TailMassError.
FockState displacement_unitary(const FockState& state, Mode mode, double gamma,
                               int n_max_out = -1);

struct HtbsResidual {
  double fidelity = 0.0;
  double displacement = 0.0;  ///< target amplitude beta r / t (signed)
  FockState exact_joint = FockState::scalar(1.0);  ///< ancilla (first) and input mode after the splitter
};

/// Mixes a single-mode state with the coherent state |sign * beta> on a
/// splitter of reflectance r (ancilla listed first) and compares the reduced
/// output of the input mode with D(sign * beta r / t) applied to the input.
HtbsResidual htbs_residual(const FockState& input, double beta, double r, int sign);

/// Three-mode channel state: modes (coherent, rail_a, rail_b).
FockState channel_state(const HybridChannel& channel, Mode coherent = Mode{1},
                        Mode rail_a = Mode{2}, Mode rail_b = Mode{3}, int n_max = -1,
                        double tail_tolerance = kDefaultTailTolerance);

/// Norm of the channel before renormalization (the two branches are
/// orthogonal through the dual-rail photon, so this is 1 up to truncation).
double channel_raw_norm(const HybridChannel& channel, int n_max = -1);

struct NegativityResult {
  double closed_form = 0.0;    ///< sqrt(1 - exp(-4 beta^2))
  double numeric = 0.0;        ///< ||rho^{T_B}||_1 - 1 from the truncated state
  double vidal_werner = 0.0;   ///< (||rho^{T_B}||_1 - 1) / 2
};

/// Entanglement of the hybrid channel across the coherent mode and the
/// dual-rail qubit, computed in closed form and from the partial transpose.
NegativityResult negativity(const HybridChannel& channel, int n_max = -1);

}  // namespace dvcv
