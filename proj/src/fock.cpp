#include "dvcv/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "dvcv/errors.hpp"

namespace dvcv {

namespace {

// Advances a mixed-radix counter; returns false after the last index.
bool next_index(std::vector<int>& idx, const std::vector<int>& n_max) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (idx[i] < n_max[i]) {
      ++idx[i];
      return true;
    }
    idx[i] = 0;
  }
  return false;
}

std::size_t grid_size(const std::vector<int>& n_max) {
  std::size_t size = 1;
  for (int n : n_max) size *= static_cast<std::size_t>(n) + 1;
  return size;
}

}  // namespace

std::string to_string(Mode m) { return "mode " + std::to_string(m.id); }

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

void TruncationConfig::validate() const {
  for (int n : n_max) {
    if (n < 1) throw InvalidArgumentError("photon-number cutoff must be >= 1");
  }
  if (!(tail_tolerance >= 0.0 && tail_tolerance < 1.0)) {
    throw InvalidArgumentError("tail tolerance must lie in [0, 1)");
  }
}

FockState::FockState(std::vector<Mode> modes, TruncationConfig trunc,
                     std::vector<cplx> amplitudes)
    : modes_(std::move(modes)), trunc_(std::move(trunc)), amps_(std::move(amplitudes)) {
  if (trunc_.n_max.size() != modes_.size()) {
    throw InvalidArgumentError("one cutoff per mode required");
  }
  trunc_.validate();
  std::set<Mode> unique(modes_.begin(), modes_.end());
  if (unique.size() != modes_.size()) {
    throw ModeCollisionError("duplicate mode label in state");
  }
  if (amps_.size() != grid_size(trunc_.n_max)) {
    throw InvalidArgumentError("amplitude count does not match the Fock grid");
  }
  compute_strides();
}

void FockState::compute_strides() {
  strides_.assign(modes_.size(), 1);
  for (std::size_t i = modes_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * dim(i);
  }
}

FockState FockState::scalar(cplx value) { return FockState({}, {}, {value}); }

FockState FockState::number(Mode mode, int n, int n_max, double tail_tolerance) {
  if (n < 0 || n > n_max) throw OutOfRangeError("photon number outside cutoff");
  std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1);
  amps[static_cast<std::size_t>(n)] = 1.0;
  return FockState({mode}, {{n_max}, tail_tolerance}, std::move(amps));
}

FockState FockState::from_amplitudes(Mode mode, std::vector<cplx> amplitudes,
                                     double tail_tolerance) {
  if (amplitudes.size() < 2) {
    throw InvalidArgumentError("single-mode state needs at least two levels");
  }
  const int n_max = static_cast<int>(amplitudes.size()) - 1;
  return FockState({mode}, {{n_max}, tail_tolerance}, std::move(amplitudes));
}

bool FockState::has_mode(Mode m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t FockState::position(Mode m) const {
  auto it = std::find(modes_.begin(), modes_.end(), m);
  if (it == modes_.end()) throw OutOfRangeError(to_string(m) + " not present");
  return static_cast<std::size_t>(it - modes_.begin());
}

cplx FockState::amplitude(std::span<const int> occupation) const {
  if (occupation.size() != modes_.size()) {
    throw OutOfRangeError("occupation arity does not match mode count");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < occupation.size(); ++i) {
    if (occupation[i] < 0) throw OutOfRangeError("negative occupation");
    if (occupation[i] > trunc_.n_max[i]) return 0.0;
    flat += strides_[i] * static_cast<std::size_t>(occupation[i]);
  }
  return amps_[flat];
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

double FockState::norm() const { return std::sqrt(norm_squared()); }

FockState FockState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidArgumentError("cannot normalize the zero vector");
  return scaled(1.0 / n);
}

FockState FockState::scaled(cplx factor) const {
  FockState out = *this;
  for (auto& a : out.amps_) a *= factor;
  return out;
}

double FockState::top_level_mass(Mode m) const {
  const std::size_t pos = position(m);
  const std::size_t top = static_cast<std::size_t>(trunc_.n_max[pos]);
  double mass = 0.0;
  for (std::size_t flat = 0; flat < amps_.size(); ++flat) {
    if ((flat / strides_[pos]) % dim(pos) == top) mass += std::norm(amps_[flat]);
  }
  return mass;
}

void FockState::check_tail() const {
  for (const Mode m : modes_) {
    const double mass = top_level_mass(m);
    if (mass > trunc_.tail_tolerance) {
      std::ostringstream msg;
      msg << "tail mass " << mass << " at cutoff " << n_max(m) << " of "
          << to_string(m) << " exceeds tolerance " << trunc_.tail_tolerance;
      throw TailMassError(msg.str());
    }
  }
}

FockState FockState::with_cutoff(Mode m, int n_max) const {
  const std::size_t pos = position(m);
  TruncationConfig trunc = trunc_;
  trunc.n_max[pos] = n_max;
  trunc.validate();
  std::vector<cplx> amps(grid_size(trunc.n_max));
  FockState out(modes_, trunc, std::move(amps));
  std::vector<int> idx(modes_.size(), 0);
  std::size_t flat = 0;
  do {
    if (idx[pos] <= n_max) {
      std::size_t target = 0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        target += out.strides_[i] * static_cast<std::size_t>(idx[i]);
      }
      out.amps_[target] = amps_[flat];
    }
    ++flat;
  } while (next_index(idx, trunc_.n_max));
  return out;
}

FockState FockState::permuted(const std::vector<Mode>& order) const {
  if (order.size() != modes_.size()) {
    throw InvalidArgumentError("permutation must list every mode once");
  }
  std::vector<std::size_t> from(order.size());
  TruncationConfig trunc = trunc_;
  for (std::size_t i = 0; i < order.size(); ++i) {
    from[i] = position(order[i]);
    trunc.n_max[i] = trunc_.n_max[from[i]];
  }
  FockState out(order, trunc, std::vector<cplx>(amps_.size()));
  std::vector<int> idx(order.size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t source = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      source += strides_[from[i]] * static_cast<std::size_t>(idx[i]);
    }
    out.amps_[flat++] = amps_[source];
  } while (next_index(idx, trunc.n_max));
  return out;
}

FockState operator+(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes()) {
    throw InvalidArgumentError("superposition requires identical mode order");
  }
  FockState wa = a;
  FockState wb = b;
  for (std::size_t i = 0; i < a.num_modes(); ++i) {
    const int n = std::max(a.truncation().n_max[i], b.truncation().n_max[i]);
    wa = wa.with_cutoff(a.modes()[i], n);
    wb = wb.with_cutoff(a.modes()[i], n);
  }
  std::vector<cplx> amps(wa.amplitudes().begin(), wa.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += wb.amplitudes()[i];
  TruncationConfig trunc = wa.truncation();
  trunc.tail_tolerance =
      std::max(a.truncation().tail_tolerance, b.truncation().tail_tolerance);
  return FockState(a.modes(), trunc, std::move(amps));
}

cplx inner(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes()) {
    throw InvalidArgumentError("inner product requires identical mode order");
  }
  std::vector<int> common(a.num_modes());
  for (std::size_t i = 0; i < common.size(); ++i) {
    common[i] = std::min(a.truncation().n_max[i], b.truncation().n_max[i]);
  }
  cplx s = 0.0;
  std::vector<int> idx(common.size(), 0);
  do {
    s += std::conj(a.amplitude(idx)) * b.amplitude(idx);
  } while (next_index(idx, common));
  return s;
}

FockState tensor(const FockState& a, const FockState& b) {
  for (const Mode m : b.modes()) {
    if (a.has_mode(m)) throw ModeCollisionError(to_string(m) + " appears in both factors");
  }
  std::vector<Mode> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  TruncationConfig trunc;
  trunc.n_max = a.truncation().n_max;
  trunc.n_max.insert(trunc.n_max.end(), b.truncation().n_max.begin(),
                     b.truncation().n_max.end());
  trunc.tail_tolerance =
      std::max(a.truncation().tail_tolerance, b.truncation().tail_tolerance);
  std::vector<cplx> amps;
  amps.reserve(a.amplitudes().size() * b.amplitudes().size());
  for (const auto& x : a.amplitudes()) {
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  }
  return FockState(std::move(modes), std::move(trunc), std::move(amps));
}

Projection project_number(const FockState& state, Mode mode, int n) {
  const std::size_t pos = state.position(mode);
  if (n < 0 || n > state.truncation().n_max[pos]) {
    throw OutOfRangeError("projection onto photon number outside cutoff");
  }
  std::vector<Mode> modes;
  TruncationConfig trunc;
  trunc.tail_tolerance = state.truncation().tail_tolerance;
  for (std::size_t i = 0; i < state.num_modes(); ++i) {
    if (i == pos) continue;
    modes.push_back(state.modes()[i]);
    trunc.n_max.push_back(state.truncation().n_max[i]);
  }
  const std::size_t stride = state.strides()[pos];
  const std::size_t dim = state.dim(pos);
  std::vector<cplx> amps;
  amps.reserve(state.amplitudes().size() / dim);
  for (std::size_t flat = 0; flat < state.amplitudes().size(); ++flat) {
    if ((flat / stride) % dim == static_cast<std::size_t>(n)) {
      amps.push_back(state.amplitudes()[flat]);
    }
  }
  double kept = 0.0;
  for (const auto& a : amps) kept += std::norm(a);
  Projection out;
  out.probability = kept / state.norm_squared();
  if (kept == 0.0) return out;
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : amps) a *= scale;
  out.state = FockState(std::move(modes), std::move(trunc), std::move(amps));
  return out;
}

Projection project_parity(const FockState& state, Mode mode, Parity parity) {
  const std::size_t pos = state.position(mode);
  const std::size_t stride = state.strides()[pos];
  const std::size_t dim = state.dim(pos);
  const std::size_t want = parity == Parity::even ? 0 : 1;
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  double kept = 0.0;
  for (std::size_t flat = 0; flat < amps.size(); ++flat) {
    if ((flat / stride) % dim % 2 != want) {
      amps[flat] = 0.0;
    } else {
      kept += std::norm(amps[flat]);
    }
  }
  Projection out;
  out.probability = kept / state.norm_squared();
  if (kept == 0.0) return out;
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : amps) a *= scale;
  out.state = FockState(state.modes(), state.truncation(), std::move(amps));
  return out;
}

std::array<std::string, 2> dual_rail_basis() { return {"|01>", "|10>"}; }

QubitState QubitState::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw InvalidArgumentError("cannot normalize the zero qubit");
  return {c0 / n, c1 / n, basis};
}

double fidelity(const QubitState& a, const QubitState& b) {
  if (a.basis != b.basis) throw BasisMismatchError("qubit bases differ");
  const QubitState x = a.normalized();
  const QubitState y = b.normalized();
  const double f = std::norm(std::conj(x.c0) * y.c0 + std::conj(x.c1) * y.c1);
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace dvcv
