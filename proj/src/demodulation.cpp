#include "dvcv/demodulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "dvcv/displaced.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/optics.hpp"

namespace dvcv {

namespace {

const std::array<std::string, 2> kSingleRailBasis{"|0>", "|1>"};

bool is_unit(double factor, double tol) { return std::abs(std::abs(factor) - 1.0) <= tol; }

// +1 when q is closer to (a0, a1), -1 when closer to (a0, -a1).
int restored_sign(const QubitState& q, cplx a0, cplx a1) {
  QubitState plus{a0, a1, q.basis};
  QubitState minus{a0, -a1, q.basis};
  return fidelity(q, plus) >= fidelity(q, minus) ? 1 : -1;
}

void check_normalized(cplx a0, cplx a1) {
  const double n2 = std::norm(a0) + std::norm(a1);
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw InvalidArgumentError("qubit amplitudes must be normalized, got norm^2 = " +
                               std::to_string(n2));
  }
}

}  // namespace

double AMQubit::norm_factor() const {
  return 1.0 / std::sqrt(std::norm(a0) + std::norm(a1) * factor * factor);
}

QubitState AMQubit::state() const {
  const double n = norm_factor();
  return QubitState{n * a0, n * a1 * factor, basis};
}

const char* to_string(DemodMethod m) {
  switch (m) {
    case DemodMethod::displacement: return "displacement";
    case DemodMethod::swap: return "swap";
    case DemodMethod::none: return "none";
  }
  return "none";
}

std::vector<double> solve_gamma(double factor, int n, double gamma_max) {
  if (n < 0) throw InvalidArgumentError("detector outcome must be non-negative");
  if (factor == 0.0 || !std::isfinite(factor)) return {};
  std::vector<double> roots;
  for (int s : {1, -1}) {
    // gamma^2 + s A gamma - n = 0
    const double b = s * factor;
    const double disc = b * b + 4.0 * n;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    // Stable pair: q = -(b + sign(b) sqrt(disc)) / 2, roots q and -n / q.
    const double q = -0.5 * (b + std::copysign(sq, b));
    std::vector<double> cand{q};
    if (q != 0.0) cand.push_back(-static_cast<double>(n) / q);
    for (double g : cand) {
      if (g == 0.0 || std::abs(g) > gamma_max) continue;
      if (std::abs(n - g * g) < 1e-12) continue;
      const double resid = std::abs(std::abs(factor * g / (n - g * g)) - 1.0);
      if (resid > 1e-10) continue;
      if (std::none_of(roots.begin(), roots.end(),
                       [g](double r) { return std::abs(r - g) < 1e-14; })) {
        roots.push_back(g);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double displacement_demod_probability(double gamma, int n) {
  const double f = displacement_prefactor(gamma);
  const double c = matrix_element(1, n, gamma);
  return f * f * c * c;
}

double swap_probability(double factor) {
  const double a2 = factor * factor;
  return a2 / (1.0 + a2);
}

std::optional<DisplacementPlan> best_displacement_step(double factor, int max_outcome) {
  std::optional<DisplacementPlan> best;
  for (int p = 0; p <= max_outcome; ++p) {
    for (double g : solve_gamma(factor, p)) {
      const double q = displacement_demod_probability(g, p);
      // ties broken toward the smaller outcome and the positive root
      if (!best || q > best->q + 1e-15 ||
          (std::abs(q - best->q) <= 1e-15 && best->outcome == p && g > best->gamma)) {
        best = DisplacementPlan{p, g, q};
      }
    }
  }
  return best;
}

DemodResult demod_displacement(const AMQubit& am, int n) {
  DemodResult res;
  res.method = DemodMethod::displacement;
  const auto roots = solve_gamma(am.factor, n);
  if (roots.empty()) return res;

  double gamma = roots.front();
  double best_q = -1.0;
  for (double g : roots) {
    const double q = displacement_demod_probability(g, n);
    if (q > best_q + 1e-15 || (std::abs(q - best_q) <= 1e-15 && g > gamma)) {
      best_q = q;
      gamma = g;
    }
  }
  res.gamma = gamma;
  res.success_probability = best_q;

  // N (a0 |0>_1 |1>_2 + a1 A |1>_1 |0>_2), rail 1 slowest.
  const double nf = am.norm_factor();
  std::vector<cplx> amps{0.0, nf * am.a0, nf * am.a1 * am.factor, 0.0};
  FockState input({Mode{1}, Mode{2}}, TruncationConfig{{1, 1}}, std::move(amps));
  FockState displaced = displacement_unitary(input, Mode{2}, gamma);

  const int top = displaced.n_max(Mode{2});
  const MatrixElementTable table(gamma, 1, top);
  const double f2 = table.prefactor() * table.prefactor();
  for (int p = 0; p <= top; ++p) {
    Projection proj = project_number(displaced, Mode{2}, p);
    if (p == n) {
      if (proj.empty()) continue;
      auto a = proj.state->amplitudes();
      QubitState restored{a[0], a[1], kSingleRailBasis};
      res.restored = restored.normalized();
      res.sign = restored_sign(res.restored, am.a0, am.a1);
      res.simulated_probability = proj.probability;
      const double c0 = table(0, p);
      const double c1 = table(1, p);
      res.residual_factor = std::abs(am.factor * c0 / c1);
      res.success = is_unit(res.residual_factor, 1e-9);
      res.branches.push_back(
          DemodBranch{"|" + std::to_string(p) + ">", proj.probability, res.restored, res.sign});
      continue;
    }
    const double c1 = table(1, p);
    if (c1 == 0.0) continue;
    res.residual.push_back(AMQubit{am.a0, am.a1, am.factor * table(0, p) / c1, kSingleRailBasis});
    res.residual_weights.push_back(f2 * c1 * c1);
  }
  return res;
}

DemodResult demod_swap(const AMQubit& am) {
  if (am.factor == 0.0 || !std::isfinite(am.factor)) {
    throw InvalidArgumentError("swap demodulation needs a finite nonzero factor");
  }
  DemodResult res;
  res.method = DemodMethod::swap;
  res.success_probability = swap_probability(am.factor);

  // Modes 1,2 carry the AM qubit, modes 3,4 the prearranged N'(A|01> + |10>).
  const double nf = am.norm_factor();
  const double np = 1.0 / std::sqrt(1.0 + am.factor * am.factor);
  const cplx q01 = nf * am.a0;
  const cplx q10 = nf * am.a1 * am.factor;
  const double p01 = np * am.factor;
  const double p10 = np;
  std::vector<cplx> amps(16, 0.0);
  auto idx = [](int n1, int n2, int n3, int n4) { return n1 * 8 + n2 * 4 + n3 * 2 + n4; };
  amps[idx(0, 1, 0, 1)] = q01 * p01;
  amps[idx(0, 1, 1, 0)] = q01 * p10;
  amps[idx(1, 0, 0, 1)] = q10 * p01;
  amps[idx(1, 0, 1, 0)] = q10 * p10;
  FockState joint({Mode{1}, Mode{2}, Mode{3}, Mode{4}}, TruncationConfig{{1, 1, 1, 1}},
                  std::move(amps));
  FockState mixed = apply_bs(joint, Mode{2}, Mode{3}, BeamSplitterParams::balanced());

  double total = 0.0;
  for (auto [n2, n3] : {std::pair{1, 0}, std::pair{0, 1}}) {
    Projection first = project_number(mixed, Mode{2}, n2);
    if (first.empty()) continue;
    Projection second = project_number(*first.state, Mode{3}, n3);
    if (second.empty()) continue;
    const double prob = first.probability * second.probability;
    // remaining modes (1, 4): dual-rail |01> = rail 1 empty
    auto a = second.state->amplitudes();
    const int n4_max = second.state->n_max(Mode{4});
    const cplx c0 = a[static_cast<std::size_t>(1)];
    const cplx c1 = a[static_cast<std::size_t>(n4_max + 1)];
    QubitState restored = QubitState{c0, c1, dual_rail_basis()}.normalized();
    const int sign = restored_sign(restored, am.a0, am.a1);
    res.branches.push_back(DemodBranch{"|" + std::to_string(n2) + std::to_string(n3) + ">",
                                       prob, restored, sign});
    total += prob;
  }
  res.simulated_probability = total;
  if (!res.branches.empty()) {
    res.restored = res.branches.front().restored;
    res.sign = res.branches.front().sign;
    res.residual_factor = 1.0;
    res.success = true;
  }
  return res;
}

double displacement_chain_success(double factor, int depth, double unit_tolerance) {
  if (is_unit(factor, unit_tolerance)) return 1.0;
  if (depth <= 0 || factor == 0.0 || !std::isfinite(factor)) return 0.0;
  const auto plan = best_displacement_step(factor);
  if (!plan) return 0.0;
  double s = plan->q;
  if (depth == 1) return s;

  const int top = 1 + default_cutoff(plan->gamma);
  const MatrixElementTable table(plan->gamma, 1, top);
  const double f2 = table.prefactor() * table.prefactor();
  for (int p = 0; p <= top; ++p) {
    if (p == plan->outcome) continue;
    const double c1 = table(1, p);
    const double w = f2 * c1 * c1;
    if (w < 1e-14) continue;
    s += w * displacement_chain_success(factor * table(0, p) / c1, depth - 1, unit_tolerance);
  }
  return s;
}

namespace {

// Success weight for an AM factor under the policy, with the method used.
std::pair<double, DemodMethod> demod_weight(double factor, const DemodPolicy& policy) {
  switch (policy.kind) {
    case PolicyKind::skip_all:
      return {0.0, DemodMethod::none};
    case PolicyKind::swap_only:
      return {swap_probability(factor), DemodMethod::swap};
    case PolicyKind::displacement_only:
      return {displacement_chain_success(factor, policy.chain_depth, policy.unit_tolerance),
              DemodMethod::displacement};
    case PolicyKind::best_of: {
      const double qs = swap_probability(factor);
      const auto plan = best_displacement_step(factor);
      if (plan && plan->q > qs) {
        return {displacement_chain_success(factor, policy.chain_depth, policy.unit_tolerance),
                DemodMethod::displacement};
      }
      return {qs, DemodMethod::swap};
    }
  }
  return {0.0, DemodMethod::none};
}

}  // namespace

OverallResult overall_success(int l, int k, double alpha, const DemodPolicy& policy,
                              Encoding encoding, int cutoff) {
  if (cutoff < 0) cutoff = analytic_cutoff(alpha, l, k);
  const MatrixElementTable t(alpha, std::max(l, k), cutoff);
  const double f2 = t.prefactor() * t.prefactor();
  OverallResult out;

  auto account = [&](OutcomeContribution c, double numerator) {
    // numerator is the factor's denominator amplitude; zero means the a0 part vanished
    if (numerator == 0.0) {
      c.factor = std::numeric_limits<double>::infinity();
      out.outcomes.push_back(c);
      return;
    }
    if (is_unit(c.factor, policy.unit_tolerance)) {
      c.clean = true;
      c.q = 1.0;
    } else {
      auto [q, method] = demod_weight(c.factor, policy);
      c.q = q;
      c.method = method;
    }
    c.contribution = c.weight * c.q;
    out.delta += c.contribution;
    out.outcomes.push_back(c);
  };

  if (encoding == Encoding::dual_rail) {
    for (int n = 0; n <= cutoff; ++n) {
      for (int m = 0; m <= cutoff; ++m) {
        const double x = t(l, n) * t(k, m);
        const double w = f2 * f2 * x * x;
        if (n == m) {
          out.direct += w;
          continue;
        }
        OutcomeContribution c;
        c.n = n;
        c.m = m;
        c.weight = w;
        c.factor = x != 0.0 ? t(k, n) * t(l, m) / x : 0.0;
        account(c, x);
      }
    }
  } else {
    for (int n = 0; n <= cutoff; ++n) {
      const double x = t(l, n);
      const double w = f2 * x * x;
      const double factor = x != 0.0 ? t(k, n) / x : 0.0;
      if (x != 0.0 && is_unit(factor, policy.unit_tolerance)) {
        out.direct += w;
        continue;
      }
      OutcomeContribution c;
      c.n = n;
      c.weight = w;
      c.factor = factor;
      account(c, x);
    }
  }
  out.total = out.direct + out.delta;
  return out;
}

double unit_factor_alpha(int l, int k, int n, int m, double lo, double hi, double target) {
  auto f = [&](double a) {
    return matrix_element(k, n, a) * matrix_element(l, m, a) -
           target * matrix_element(l, n, a) * matrix_element(k, m, a);
  };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InvalidArgumentError("factor does not cross the target inside the bracket");
  }
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                  boost::math::tools::eps_tolerance<double>(52),
                                                  iters);
  return 0.5 * (a + b);
}

InitiallyAMResult initially_am_dual(cplx a0, cplx a1, double alpha, int max_photon_sum) {
  check_normalized(a0, a1);
  if (!(alpha > 0.0)) throw InvalidArgumentError("alpha must be positive");
  const double a01 = amp_factor_dual(0, 1, 0, 1, alpha, alpha);
  if (a01 == 0.0) throw SingularFactorError("A_01 vanishes; the premodulation is undefined");
  const double a10 = amp_factor_dual(0, 1, 1, 0, alpha, alpha);

  const MatrixElementTable t(alpha, 1, max_photon_sum);
  const double f4 = std::pow(t.prefactor(), 4);
  const double am2 = 1.0 / (std::norm(a0) + std::norm(a1) / (a01 * a01));

  InitiallyAMResult out;
  for (int n = 0; n <= max_photon_sum; ++n) {
    for (int m = 0; n + m <= max_photon_sum; ++m) {
      const double x = t(0, n) * t(1, m);
      const double y = t(1, n) * t(0, m);
      InitiallyAMRecord rec;
      rec.n = n;
      rec.m = m;
      rec.probability = f4 * am2 * (std::norm(a0) * x * x + std::norm(a1) * y * y / (a01 * a01));
      if (x == 0.0) {
        rec.factor = std::numeric_limits<double>::infinity();
        out.records.push_back(rec);
        continue;
      }
      rec.factor = (y / x) / a01;
      rec.clean = is_unit(rec.factor, 1e-9);
      rec.q = rec.clean ? 1.0 : swap_probability(rec.factor);
      rec.contribution = f4 * am2 * x * x * rec.q;
      if (rec.clean) out.clean_probability += rec.probability;
      out.total_success += rec.contribution;
      out.records.push_back(rec);
    }
  }

  // Literal closed expression.
  auto c = [&](int l, int n) { return t(l, n); };
  const double a10_2 = a10 * a10;
  double s = c(0, 0) * c(0, 0) * c(1, 1) * c(1, 1);
  s += c(0, 1) * c(0, 1) * c(1, 0) * c(1, 0) * (a10_2 * a10_2) / (1.0 + a10_2 * a10_2);
  double diag = 0.0;
  for (int n = 0; 2 * n <= max_photon_sum; ++n) diag += std::pow(c(0, n) * c(1, n), 2);
  s += a10_2 / (1.0 + a10_2) * diag;
  for (int n = 0; n <= max_photon_sum; ++n) {
    for (int m = 0; n + m <= max_photon_sum; ++m) {
      if (n == m || n + m <= 1) continue;
      const double x = c(0, n) * c(1, m);
      if (x == 0.0) continue;
      const double anm = c(1, n) * c(0, m) / x;
      const double b2 = anm * anm / a10_2;
      s += x * x * b2 / (1.0 + b2);
    }
  }
  out.total_printed = f4 * am2 * s;
  return out;
}

InitiallyAMResult initially_am_single(cplx a0, cplx a1, double alpha, int chain_depth,
                                      int cutoff) {
  check_normalized(a0, a1);
  if (!(alpha > 0.0)) throw InvalidArgumentError("alpha must be positive");
  if (cutoff < 0) cutoff = analytic_cutoff(alpha, 0, 1);
  const double a0f = amp_factor_single(0, 1, 0, alpha);

  const MatrixElementTable t(alpha, 1, cutoff);
  const double f2 = t.prefactor() * t.prefactor();
  const double am2 = 1.0 / (std::norm(a0) + std::norm(a1) / (a0f * a0f));

  InitiallyAMResult out;
  for (int n = 0; n <= cutoff; ++n) {
    const double x = t(0, n);
    const double y = t(1, n);
    InitiallyAMRecord rec;
    rec.n = n;
    rec.probability = f2 * am2 * (std::norm(a0) * x * x + std::norm(a1) * y * y / (a0f * a0f));
    if (x == 0.0) {
      rec.factor = std::numeric_limits<double>::infinity();
      out.records.push_back(rec);
      continue;
    }
    rec.factor = (y / x) / a0f;
    rec.clean = is_unit(rec.factor, 1e-9);
    rec.q = rec.clean ? 1.0 : displacement_chain_success(rec.factor, chain_depth);
    rec.contribution = f2 * am2 * x * x * rec.q;
    if (rec.clean) out.clean_probability += rec.probability;
    out.total_success += rec.contribution;
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace dvcv
