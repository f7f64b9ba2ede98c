#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dvcv {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr double kNormEpsilon = 1e-12;

/// Optical mode label. Labels follow the numbering of the optical scheme
/// (1..6 for the dual-rail circuit) but carry no meaning beyond identity.
struct Mode {
  int id = 0;

  constexpr Mode() = default;
  constexpr explicit Mode(int i) : id(i) {}

  auto operator<=>(const Mode&) const = default;
};

std::string to_string(Mode m);

enum class Parity { even, odd };

const char* to_string(Parity p);

/// Photon-number cutoff per mode plus the largest probability mass tolerated
/// at any mode's top level.
struct TruncationConfig {
  std::vector<int> n_max;
  double tail_tolerance = kDefaultTailTolerance;

  /// Throws InvalidArgumentError unless every n_max >= 1 and
  /// tail_tolerance lies in [0, 1).
  void validate() const;
};

/// Pure state on a truncated multi-mode Fock space, stored densely over the
/// grid of occupation numbers (first listed mode is the slowest index).
class FockState {
 public:
  FockState(std::vector<Mode> modes, TruncationConfig trunc,
            std::vector<cplx> amplitudes);

  /// Zero-mode state holding a single complex number.
  static FockState scalar(cplx value);

  /// Single-mode number state |n> with cutoff n_max.
  static FockState number(Mode mode, int n, int n_max,
                          double tail_tolerance = kDefaultTailTolerance);

  /// Single-mode state from explicit amplitudes <0|psi>, <1|psi>, ...
  static FockState from_amplitudes(Mode mode, std::vector<cplx> amplitudes,
                                   double tail_tolerance = kDefaultTailTolerance);

  const std::vector<Mode>& modes() const { return modes_; }
  const TruncationConfig& truncation() const { return trunc_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::size_t num_modes() const { return modes_.size(); }

  bool has_mode(Mode m) const;
  /// Position of `m` in modes(); throws OutOfRangeError when absent.
  std::size_t position(Mode m) const;
  int n_max(Mode m) const { return trunc_.n_max[position(m)]; }
  std::size_t dim(std::size_t pos) const {
    return static_cast<std::size_t>(trunc_.n_max[pos]) + 1;
  }
  const std::vector<std::size_t>& strides() const { return strides_; }

  /// Amplitude of the multi-index (one occupation per mode, in modes() order).
  /// Occupations beyond a mode's cutoff read as zero.
  cplx amplitude(std::span<const int> occupation) const;

  double norm_squared() const;
  double norm() const;
  FockState normalized() const;
  FockState scaled(cplx factor) const;

  /// Probability mass sitting at the cutoff level of `m`.
  double top_level_mass(Mode m) const;
  /// Throws TailMassError when any mode's top-level mass exceeds the
  /// tail tolerance.
  void check_tail() const;

  /// Copy with the cutoff of `m` changed; amplitudes above a lowered cutoff
  /// are discarded.
  FockState with_cutoff(Mode m, int n_max) const;

  /// Copy with modes rearranged into `order` (a permutation of modes()).
  FockState permuted(const std::vector<Mode>& order) const;

  /// Sum of two states over the same ordered modes. Cutoffs are widened to
  /// the larger of the two.
  friend FockState operator+(const FockState& a, const FockState& b);

 private:
  void compute_strides();

  std::vector<Mode> modes_;
  TruncationConfig trunc_;
  std::vector<cplx> amps_;
  std::vector<std::size_t> strides_;
};

/// <a|b> over the intersection of the two grids; modes must match in order.
cplx inner(const FockState& a, const FockState& b);

/// a (x) b. Throws ModeCollisionError when mode labels overlap.
FockState tensor(const FockState& a, const FockState& b);

/// Result of a projective measurement. A zero-probability outcome carries no
/// state.
struct Projection {
  std::optional<FockState> state;
  double probability = 0.0;

  bool empty() const { return !state.has_value(); }
};

/// Projects `mode` onto |n>, removing the mode. The returned state is
/// renormalized and the probability is relative to the input's norm.
Projection project_number(const FockState& state, Mode mode, int n);

/// Keeps components whose occupation of `mode` has the requested parity.
/// The mode is retained.
Projection project_parity(const FockState& state, Mode mode, Parity parity);

/// Logical qubit c0|0_L> + c1|1_L> with named basis kets.
struct QubitState {
  cplx c0{1.0, 0.0};
  cplx c1{0.0, 0.0};
  std::array<std::string, 2> basis{"|01>", "|10>"};

  double norm_squared() const { return std::norm(c0) + std::norm(c1); }
  QubitState normalized() const;
};

std::array<std::string, 2> dual_rail_basis();

/// |<a|b>|^2 for normalized copies of a and b. Throws BasisMismatchError when
/// the basis labels differ.
double fidelity(const QubitState& a, const QubitState& b);

}  // namespace dvcv
