#include "dvcv/optics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <unsupported/Eigen/MatrixFunctions>

#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"

namespace dvcv {

void BeamSplitterParams::validate() const {
  if (!(t > 0.0)) throw InvalidArgumentError("beam splitter needs t > 0");
  if (std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw InvalidArgumentError("beam splitter needs t^2 + r^2 = 1");
  }
}

BeamSplitterParams BeamSplitterParams::from_reflectance(double r) {
  if (!(std::abs(r) < 1.0)) throw InvalidArgumentError("reflectance must satisfy |r| < 1");
  return {std::sqrt(1.0 - r * r), r};
}

BeamSplitterParams BeamSplitterParams::balanced() {
  return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
}

void HybridChannel::validate() const {
  if (!(beta > 0.0)) throw InvalidArgumentError("channel amplitude must be positive");
}

namespace {

class BlockCache {
 public:
  const Eigen::MatrixXd& get(const BeamSplitterParams& p, int total) {
    const Key key{p.t, p.r};
    {
      std::shared_lock lock(mutex_);
      auto it = blocks_.find(key);
      if (it != blocks_.end() && static_cast<int>(it->second.size()) > total) {
        return it->second[static_cast<std::size_t>(total)];
      }
    }
    std::unique_lock lock(mutex_);
    auto& blocks = blocks_[key];
    if (blocks.empty()) blocks.push_back(Eigen::MatrixXd::Ones(1, 1));
    while (static_cast<int>(blocks.size()) <= total) {
      extend(p, blocks);
    }
    return blocks[static_cast<std::size_t>(total)];
  }

 private:
  using Key = std::pair<double, double>;

  // Column j of block N is U|j, N-j>; it follows from block N-1 by one more
  // transformed creation operator.
  static void extend(const BeamSplitterParams& p, std::deque<Eigen::MatrixXd>& blocks) {
    const Eigen::MatrixXd& prev = blocks.back();
    const int n = static_cast<int>(prev.rows());  // new total photon number
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n + 1, n + 1);
    auto raise = [&](const Eigen::VectorXd& v, double ca, double cb) {
      // (ca a^+ + cb b^+) on a vector with n-1 photons in total.
      Eigen::VectorXd out = Eigen::VectorXd::Zero(n + 1);
      for (int i = 0; i < n; ++i) {
        out(i + 1) += ca * std::sqrt(static_cast<double>(i + 1)) * v(i);
        out(i) += cb * std::sqrt(static_cast<double>(n - i)) * v(i);
      }
      return out;
    };
    for (int j = 1; j <= n; ++j) {
      next.col(j) = raise(prev.col(j - 1), p.t, p.r) / std::sqrt(static_cast<double>(j));
    }
    next.col(0) = raise(prev.col(0), -p.r, p.t) / std::sqrt(static_cast<double>(n));
    blocks.push_back(std::move(next));
  }

  std::shared_mutex mutex_;
  std::map<Key, std::deque<Eigen::MatrixXd>> blocks_;
};

BlockCache& block_cache() {
  static BlockCache cache;
  return cache;
}

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

}  // namespace

const Eigen::MatrixXd& beam_splitter_block(const BeamSplitterParams& params, int total) {
  params.validate();
  if (total < 0) throw OutOfRangeError("negative photon number");
  return block_cache().get(params, total);
}

FockState apply_bs(const FockState& state, Mode a, Mode b, const BeamSplitterParams& params,
                   int n_max_out) {
  params.validate();
  if (a == b) throw InvalidArgumentError("beam splitter needs two distinct modes");
  const std::size_t pa = state.position(a);
  const std::size_t pb = state.position(b);
  const auto& in_trunc = state.truncation();
  const int total_max = in_trunc.n_max[pa] + in_trunc.n_max[pb];
  const int cap = n_max_out < 0 ? total_max : std::min(n_max_out, total_max);

  TruncationConfig out_trunc = in_trunc;
  out_trunc.n_max[pa] = cap;
  out_trunc.n_max[pb] = cap;
  std::size_t out_size = 1;
  for (int n : out_trunc.n_max) out_size *= static_cast<std::size_t>(n) + 1;
  std::vector<cplx> out_amps(out_size);
  FockState shape(state.modes(), out_trunc, std::vector<cplx>(out_size));
  const auto& out_strides = shape.strides();

  std::vector<int> idx(state.num_modes(), 0);
  std::size_t flat = 0;
  do {
    const cplx value = state.amplitudes()[flat++];
    if (value == cplx{}) continue;
    std::size_t base = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i != pa && i != pb) base += out_strides[i] * static_cast<std::size_t>(idx[i]);
    }
    const int total = idx[pa] + idx[pb];
    const Eigen::MatrixXd& block = block_cache().get(params, total);
    for (int i = 0; i <= total; ++i) {
      const cplx contrib = block(i, idx[pa]) * value;
      if (i > cap || total - i > cap) continue;
      out_amps[base + out_strides[pa] * static_cast<std::size_t>(i) +
               out_strides[pb] * static_cast<std::size_t>(total - i)] += contrib;
    }
  } while (next_index(idx, in_trunc.n_max));

  FockState out(state.modes(), out_trunc, std::move(out_amps));
  if (cap < total_max) {
    const double lost = state.norm_squared() - out.norm_squared();
    if (lost > in_trunc.tail_tolerance * state.norm_squared()) {
      throw TailMassError("beam splitter output exceeds the photon-number cutoff");
    }
  }
  return out;
}

Eigen::MatrixXd displacement_matrix(double gamma, int dim) {
  if (dim < 1) throw InvalidArgumentError("displacement matrix needs dim >= 1");
  const double g = std::abs(gamma);
  const int padded = dim + static_cast<int>(std::ceil(g * g + 10.0 * g + 30.0));
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(padded, padded);
  for (int n = 0; n + 1 < padded; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    generator(n + 1, n) = gamma * s;   // gamma a^+
    generator(n, n + 1) = -gamma * s;  // -gamma a
  }
  const Eigen::MatrixXd full = generator.exp();
  return full.topLeftCorner(dim, dim);
}

FockState displacement_unitary(const FockState& state, Mode mode, double gamma,
                               int n_max_out) {
  const std::size_t pos = state.position(mode);
  const int n_in = state.truncation().n_max[pos];
  if (n_max_out < 0) n_max_out = gamma == 0.0 ? n_in : n_in + default_cutoff(gamma);
  const Eigen::MatrixXd d = displacement_matrix(gamma, std::max(n_in, n_max_out) + 1);

  TruncationConfig out_trunc = state.truncation();
  out_trunc.n_max[pos] = n_max_out;
  std::size_t out_size = 1;
  for (int n : out_trunc.n_max) out_size *= static_cast<std::size_t>(n) + 1;
  FockState shape(state.modes(), out_trunc, std::vector<cplx>(out_size));
  const auto& out_strides = shape.strides();
  std::vector<cplx> out_amps(out_size);

  std::vector<int> idx(state.num_modes(), 0);
  std::size_t flat = 0;
  do {
    const cplx value = state.amplitudes()[flat++];
    if (value == cplx{}) continue;
    std::size_t base = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i != pos) base += out_strides[i] * static_cast<std::size_t>(idx[i]);
    }
    for (int n = 0; n <= n_max_out; ++n) {
      out_amps[base + out_strides[pos] * static_cast<std::size_t>(n)] += d(n, idx[pos]) * value;
    }
  } while (next_index(idx, state.truncation().n_max));

  FockState out(state.modes(), out_trunc, std::move(out_amps));
  const double lost = state.norm_squared() - out.norm_squared();
  if (lost > state.truncation().tail_tolerance * std::max(1.0, state.norm_squared())) {
    throw TailMassError("displaced state exceeds the photon-number cutoff");
  }
  return out;
}

HtbsResidual htbs_residual(const FockState& input, double beta, double r, int sign) {
  if (input.num_modes() != 1) throw InvalidArgumentError("HTBS input must be single-mode");
  if (!(r > 0.0 && r < 0.3)) throw InvalidArgumentError("HTBS reflectance must lie in (0, 0.3)");
  if (sign != 1 && sign != -1) throw InvalidArgumentError("sign must be +1 or -1");
  const auto bs = BeamSplitterParams::from_reflectance(r);
  const Mode in_mode = input.modes().front();
  const Mode ancilla{in_mode.id + 1000};

  const FockState pump = coherent_state(ancilla, sign * beta);
  FockState joint = apply_bs(tensor(pump, input), ancilla, in_mode, bs);

  // Reduced state of the input mode.
  const int dim = joint.truncation().n_max[1] + 1;
  const int anc_dim = joint.truncation().n_max[0] + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  const auto amps = joint.amplitudes();
  for (int p = 0; p < anc_dim; ++p) {
    Eigen::Map<const Eigen::VectorXcd> slice(amps.data() + static_cast<std::size_t>(p) * dim, dim);
    rho.noalias() += slice * slice.adjoint();
  }

  HtbsResidual out;
  out.displacement = sign * beta * r / bs.t;
  const FockState target = displacement_unitary(input, in_mode, out.displacement, dim - 1);
  Eigen::VectorXcd psi(dim);
  for (int n = 0; n < dim; ++n) psi(n) = target.amplitudes()[static_cast<std::size_t>(n)];
  const cplx overlap = psi.adjoint() * rho * psi;
  out.fidelity = overlap.real() / (rho.trace().real() * psi.squaredNorm());
  out.exact_joint = std::move(joint);
  return out;
}

namespace {

FockState channel_unnormalized(const HybridChannel& channel, Mode coherent, Mode rail_a,
                               Mode rail_b, int n_max, double tail_tolerance) {
  channel.validate();
  if (n_max < 0) n_max = default_cutoff(channel.beta);
  const FockState minus = coherent_state(coherent, -channel.beta, n_max, tail_tolerance);
  const FockState plus = coherent_state(coherent, channel.beta, n_max, tail_tolerance);
  const auto rails = [&](int na, int nb) {
    return tensor(FockState::number(rail_a, na, 1, tail_tolerance),
                  FockState::number(rail_b, nb, 1, tail_tolerance));
  };
  const FockState sum = tensor(minus, rails(0, 1)) + tensor(plus, rails(1, 0));
  return sum.scaled(1.0 / std::sqrt(2.0));
}

}  // namespace

FockState channel_state(const HybridChannel& channel, Mode coherent, Mode rail_a, Mode rail_b,
                        int n_max, double tail_tolerance) {
  FockState state =
      channel_unnormalized(channel, coherent, rail_a, rail_b, n_max, tail_tolerance).normalized();
  // Rail modes hold at most one photon, so only the coherent mode's cutoff matters.
  const double top = state.top_level_mass(coherent);
  if (top > tail_tolerance) throw TailMassError("channel coherent mode exceeds its cutoff");
  return state;
}

double channel_raw_norm(const HybridChannel& channel, int n_max) {
  return channel_unnormalized(channel, Mode{1}, Mode{2}, Mode{3}, n_max, kDefaultTailTolerance)
      .norm();
}

NegativityResult negativity(const HybridChannel& channel, int n_max) {
  channel.validate();
  const FockState state = channel_state(channel, Mode{1}, Mode{2}, Mode{3}, n_max);
  const int dim = state.truncation().n_max[0] + 1;

  // psi(p, b): b = 0 for rails |01>, b = 1 for rails |10>.
  Eigen::MatrixXcd psi(dim, 2);
  for (int p = 0; p < dim; ++p) {
    const std::array<int, 3> q0{p, 0, 1};
    const std::array<int, 3> q1{p, 1, 0};
    psi(p, 0) = state.amplitude(q0);
    psi(p, 1) = state.amplitude(q1);
  }
  // Partial transpose over the logical qubit:
  // rho^{T_B}[(p, b), (p', b')] = psi(p, b') conj(psi(p', b)).
  const int size = 2 * dim;
  Eigen::MatrixXcd pt(size, size);
  for (int p = 0; p < dim; ++p) {
    for (int b = 0; b < 2; ++b) {
      for (int q = 0; q < dim; ++q) {
        for (int c = 0; c < 2; ++c) {
          pt(2 * p + b, 2 * q + c) = psi(p, c) * std::conj(psi(q, b));
        }
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt, Eigen::EigenvaluesOnly);
  const double trace_norm = solver.eigenvalues().cwiseAbs().sum();

  NegativityResult out;
  out.closed_form = std::sqrt(1.0 - std::exp(-4.0 * channel.beta * channel.beta));
  out.numeric = trace_norm - 1.0;
  out.vidal_werner = 0.5 * (trace_norm - 1.0);
  return out;
}

}  // namespace dvcv
