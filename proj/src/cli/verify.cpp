#include "dvcv/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "dvcv/demodulation.hpp"
#include "dvcv/displaced.hpp"
#include "dvcv/optics.hpp"
#include "dvcv/protocol.hpp"

namespace dvcv::cli {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::uint64_t kSeed = 20240917;

std::string fmt(double x) { return format_number(x); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Explicit polynomial of the displaced-number-state coefficients:
// c_ln = (l! n!)^{-1/2} sum_j C(l,j) (-1)^j alpha^{n-l+2j} n! / (n-l+j)!
double c_polynomial(int l, int n, double alpha) {
  double s = 0.0;
  for (int j = std::max(0, l - n); j <= l; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    s += binomial(l, j) * sign * std::pow(alpha, n - l + 2 * j) * factorial(n) /
         factorial(n - l + j);
  }
  return s / std::sqrt(factorial(l) * factorial(n));
}

cplx random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return cplx(g(rng), g(rng));
}

std::pair<cplx, cplx> random_qubit(std::mt19937_64& rng) {
  cplx a0 = random_unit(rng);
  cplx a1 = random_unit(rng);
  const double n = std::sqrt(std::norm(a0) + std::norm(a1));
  return {a0 / n, a1 / n};
}

Criterion criterion_1(const GlobalOptions&) {
  Criterion c{1, "displaced number state coefficients", {}, 0.0};
  double max_poly = 0.0;
  double max_op = 0.0;
  for (double alpha : {0.3, kInvSqrt2, 1.0, 1.5}) {
    const MatrixElementTable t(alpha, 5, 20);
    const Eigen::MatrixXd d = displacement_matrix(alpha, 21);
    for (int l = 0; l <= 5; ++l) {
      for (int n = 0; n <= 20; ++n) {
        max_poly = std::max(max_poly, std::abs(t(l, n) - c_polynomial(l, n, alpha)));
        max_op = std::max(max_op, std::abs(t.prefactor() * t(l, n) - d(n, l)));
      }
    }
  }
  c.checks.push_back(make_at_most("max |c_ln - explicit polynomial|, l<=5, n<=20", max_poly, 1e-12,
                                  "alpha in {0.3, 1/sqrt2, 1.0, 1.5}"));
  c.checks.push_back(make_at_most("max |F c_ln - <n|exp(alpha(a+ - a))|l>|", max_op, 1e-9,
                                  "operator exponential on a padded Fock space"));
  return c;
}

Criterion criterion_2(const GlobalOptions& opts) {
  Criterion c{2, "channel negativity", {}, 0.0};
  for (double beta : {0.5, 1.0, 1.5, 2.0}) {
    const auto n = negativity(HybridChannel{beta}, opts.nmax);
    c.checks.push_back(make_at_most("|closed form - partial transpose| at beta=" + fmt(beta),
                                    std::abs(n.closed_form - n.numeric), 1e-6,
                                    "numeric = ||rho^T||_1 - 1; Vidal-Werner value " +
                                        fmt(n.vidal_werner)));
  }
  const auto one = negativity(HybridChannel{1.0}, opts.nmax);
  c.checks.push_back(make_check("tau(beta=1), closed form", one.closed_form, 0.990799, 1e-5));
  c.checks.push_back(make_check("tau(beta=1), partial transpose", one.numeric, 0.990799, 1e-5));
  return c;
}

Criterion criterion_3(const GlobalOptions&) {
  Criterion c{3, "amplitude factors A_nm^(01) at alpha = 1/sqrt2", {}, 0.0};
  const std::vector<std::pair<int, int>> cols{{0, 2}, {0, 3}, {1, 2}, {0, 4}, {1, 3}, {0, 5}, {1, 4}};
  const std::vector<double> printed{-1.0 / 3, -0.2, 1.0 / 3, -1.0 / 7, 0.2, -1.0 / 9, 1.0 / 7};
  for (std::size_t i = 0; i < cols.size(); ++i) {
    auto [n, m] = cols[i];
    const double a = amp_factor_dual(0, 1, n, m, kInvSqrt2, kInvSqrt2);
    const double rational = (2.0 * n - 1.0) / (2.0 * m - 1.0);
    c.checks.push_back(make_check("A_" + std::to_string(n) + std::to_string(m), a, printed[i],
                                  1e-12, "(2n-1)/(2m-1) = " + fmt(rational)));
  }
  const double a23 = amp_factor_dual(0, 1, 2, 3, kInvSqrt2, kInvSqrt2);
  c.checks.push_back(make_check("eighth entry 3/5 is A_23", a23, 0.6, 1e-12));
  const double a05 = amp_factor_dual(0, 1, 0, 5, kInvSqrt2, kInvSqrt2);
  c.checks.push_back(make_property(
      "eighth entry labelled (0,5) does not match A_05", std::abs(a05 - 0.6) > 0.1,
      "A_05 = " + fmt(a05) + "; the value 3/5 belongs to (2,3), the label is reported as "
                             "inconsistent rather than matched"));
  return c;
}

Criterion criterion_4(const GlobalOptions&) {
  Criterion c{4, "amplitude factors A_nm^(12) at alpha = 0.5053", {}, 0.0};
  const double alpha = 0.5053;
  const std::vector<std::pair<int, int>> cols{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}};
  const std::vector<double> row{0.427, -0.427, -0.155, -0.0954, -0.362};
  const std::vector<double> recip{2.343, -2.343, -6.468, -10.481, -2.76};
  for (std::size_t i = 0; i < cols.size(); ++i) {
    auto [n, m] = cols[i];
    const std::string nm = std::to_string(n) + std::to_string(m);
    const std::string mn = std::to_string(m) + std::to_string(n);
    c.checks.push_back(
        make_check("A_" + nm, amp_factor_dual(1, 2, n, m, alpha, alpha), row[i], 0.002));
    c.checks.push_back(
        make_check("A_" + mn, amp_factor_dual(1, 2, m, n, alpha, alpha), recip[i], 0.01));
  }
  return c;
}

Criterion criterion_5(const GlobalOptions& opts) {
  Criterion c{5, "teleportation probabilities and optima", {}, 0.0};
  const auto m01 = maximize_direct_success(0, 1);
  c.checks.push_back(make_check("max P_T^(01)", m01.value, 0.2637, 0.0005));
  c.checks.push_back(make_check("argmax P_T^(01)", m01.alpha, 0.628482, 0.005,
                                "located by Brent's method on [0.05, 1.5]"));
  const double pt_s2 = direct_success_probability(0, 1, kInvSqrt2, opts.nmax);
  const double p01s_s2 = pair_sum_probability(0, 1, 0, 1, kInvSqrt2);
  c.checks.push_back(make_check("P_T^(01)(1/sqrt2)", pt_s2, 0.2578, 0.0005));
  c.checks.push_back(make_check("P_01^(01)S(1/sqrt2)", p01s_s2, 0.18394, 0.0005));
  c.checks.push_back(make_check("P_S(1/sqrt2)", pt_s2 + p01s_s2, 0.441789, 0.0005));
  const double ps_opt = direct_success_probability(0, 1, 0.628482, opts.nmax) +
                        pair_sum_probability(0, 1, 0, 1, 0.628482);
  c.checks.push_back(make_check("P_S(0.628482)", ps_opt, 0.500673, 0.0005));

  const auto m12 = maximize_direct_success(1, 2);
  c.checks.push_back(make_check("max P_T^(12)", m12.value, 0.24371, 0.0005));
  c.checks.push_back(make_check("argmax P_T^(12)", m12.alpha, 0.4072, 0.005));
  const double p12s = pair_sum_probability(1, 2, 1, 2, 0.4072);
  c.checks.push_back(make_check("P_12^(12)S(0.4072)", p12s, 0.2883, 0.001));
  c.checks.push_back(make_check("P_T^(12)(0.4072) + P_12^(12)S(0.4072)",
                                direct_success_probability(1, 2, 0.4072, opts.nmax) + p12s,
                                0.5317, 0.001));
  c.checks.push_back(make_check("P_T^(12)(0.5053) + P_12^(12)S(0.5053)",
                                direct_success_probability(1, 2, 0.5053, opts.nmax) +
                                    pair_sum_probability(1, 2, 1, 2, 0.5053),
                                0.4014, 0.001));
  c.checks.push_back(make_check("A_12^(12)(0.5053)", amp_factor_dual(1, 2, 1, 2, 0.5053, 0.5053),
                                -1.0, 0.001));
  return c;
}

std::string itemize_gap(const OverallResult& r, double reference) {
  std::ostringstream s;
  s << "direct " << fmt(r.direct) << ", demodulated " << fmt(r.delta) << ", total "
    << fmt(r.total) << ", gap to reference " << fmt(r.total - reference) << "\n";
  auto items = r.outcomes;
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.contribution > b.contribution; });
  s << "largest demodulated outcomes (n,m: factor, method, q, weight, contribution):";
  for (std::size_t i = 0; i < std::min<std::size_t>(8, items.size()); ++i) {
    const auto& o = items[i];
    s << "\n  (" << o.n << "," << o.m.value_or(0) << "): A=" << fmt(o.factor) << ", "
      << (o.clean ? "clean" : to_string(o.method)) << ", q=" << fmt(o.q)
      << ", w=" << fmt(o.weight) << ", +" << fmt(o.contribution);
  }
  double rest = 0.0;
  for (std::size_t i = 8; i < items.size(); ++i) rest += items[i].contribution;
  s << "\n  remaining " << (items.size() > 8 ? items.size() - 8 : 0) << " outcomes: +"
    << fmt(rest);
  return s.str();
}

std::string policy_summary(int l, int k, double alpha, const GlobalOptions& opts) {
  std::ostringstream s;
  s << "other policies:";
  for (auto [kind, name] : {std::pair{PolicyKind::swap_only, "swap only"},
                            std::pair{PolicyKind::displacement_only, "displacement only"},
                            std::pair{PolicyKind::skip_all, "no demodulation"}}) {
    s << " " << name << " "
      << fmt(overall_success(l, k, alpha, DemodPolicy{kind}, Encoding::dual_rail, opts.nmax).total)
      << ";";
  }
  return s.str();
}

Criterion criterion_6(const GlobalOptions& opts) {
  Criterion c{6, "overall probability with demodulation", {}, 0.0};
  const auto r01 = overall_success(0, 1, kInvSqrt2, DemodPolicy{}, Encoding::dual_rail, opts.nmax);
  c.checks.push_back(make_check("P_T^(01)O at alpha=1/sqrt2 (best-of policy)", r01.total,
                                0.522765, 0.02,
                                itemize_gap(r01, 0.522765) + "\n" +
                                    policy_summary(0, 1, kInvSqrt2, opts)));
  const double astar = unit_factor_alpha(1, 2, 1, 2, 0.45, 0.55);
  const auto r12 = overall_success(1, 2, astar, DemodPolicy{}, Encoding::dual_rail, opts.nmax);
  c.checks.push_back(make_check("P_T^(12)O at alpha*=" + fmt(astar) + " where A_12^(12) = -1",
                                r12.total, 0.4968, 0.02,
                                itemize_gap(r12, 0.4968) + "\n" +
                                    policy_summary(1, 2, astar, opts)));
  return c;
}

Criterion criterion_7(const GlobalOptions& opts) {
  Criterion c{7, "normalization and algebraic identities", {}, 0.0};
  std::mt19937_64 rng(kSeed);
  const std::vector<std::pair<int, int>> pairs{{0, 1}, {1, 2}, {0, 3}};

  double worst27 = 0.0;
  double worst31 = 0.0;
  for (auto [l, k] : pairs) {
    for (double alpha : {0.3, 0.7, 1.2}) {
      const int cut = opts.nmax < 0 ? analytic_cutoff(alpha, l, k) : opts.nmax;
      for (int trial = 0; trial < 3; ++trial) {
        auto [a0, a1] = random_qubit(rng);
        const auto q = UnknownQubit::make(a0, a1, l, k);
        double s = 0.0;
        for (int n = 0; n <= cut; ++n)
          for (int m = 0; m <= cut; ++m) s += outcome_probability_dual(q, n, m, alpha, alpha);
        worst27 = std::max(worst27, std::abs(1.0 - s));
      }
      worst31 = std::max(worst31, std::abs(1.0 - direct_success_probability(l, k, alpha, opts.nmax) -
                                           am_probability(l, k, alpha, opts.nmax)));
    }
  }
  c.checks.push_back(make_at_most("max |1 - sum_nm P_nm| over random qubits", worst27, 1e-6));
  c.checks.push_back(make_at_most("max |1 - P_T - P_AM|", worst31, 1e-6));

  std::uniform_int_distribution<int> pick_n(0, 8);
  std::uniform_int_distribution<int> pick_pair(0, 2);
  std::uniform_real_distribution<double> pick_alpha(0.2, 1.5);
  double worst32 = 0.0;
  int triples = 0;
  while (triples < 50) {
    const int n = pick_n(rng);
    const int m = pick_n(rng);
    const double alpha = pick_alpha(rng);
    auto [l, k] = pairs[static_cast<std::size_t>(pick_pair(rng))];
    try {
      const double prod = amp_factor_dual(l, k, n, m, alpha, alpha) *
                          amp_factor_dual(l, k, m, n, alpha, alpha);
      worst32 = std::max(worst32, std::abs(prod - 1.0));
      ++triples;
    } catch (const SingularFactorError&) {
    }
  }
  c.checks.push_back(make_at_most("max |A_nm A_mn - 1| on 50 random (n,m,alpha)", worst32, 1e-10));

  double worst33 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = pick_n(rng);
    const int m = pick_n(rng);
    const double alpha = pick_alpha(rng);
    auto [l, k] = pairs[static_cast<std::size_t>(pick_pair(rng))];
    const double ref = pair_sum_probability(l, k, n, m, alpha);
    for (int j = 0; j < 4; ++j) {
      auto [a0, a1] = random_qubit(rng);
      const auto q = UnknownQubit::make(a0, a1, l, k);
      const double s = outcome_probability_dual(q, n, m, alpha, alpha) +
                       outcome_probability_dual(q, m, n, alpha, alpha);
      worst33 = std::max(worst33, std::abs(s - ref));
    }
  }
  c.checks.push_back(make_at_most("max |P_nm + P_mn - pair sum| across random qubits", worst33, 1e-10));
  return c;
}

Criterion criterion_8(const GlobalOptions& opts) {
  Criterion c{8, "finite-reflectance oracle converges to the zeroth-order protocol", {}, 0.0};
  const std::vector<double> rs{0.2, 0.1, 0.05};
  const std::vector<std::pair<int, int>> outcomes{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::vector<UnknownQubit> qubits{
      UnknownQubit::make(0.6, 0.8),
      UnknownQubit::make(kInvSqrt2, cplx(0.0, kInvSqrt2)),
  };
  const double alpha = 0.5;
  for (std::size_t qi = 0; qi < qubits.size(); ++qi) {
    const auto& q = qubits[qi];
    std::vector<std::vector<double>> errors(outcomes.size());
    double infid_last = 0.0;
    double seconds_last = 0.0;
    std::ostringstream detail;
    for (double r : rs) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto run = brute_force_pipeline(q, alpha, alpha, r, 1, opts.tail_tol);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      detail << "r=" << fmt(r) << ":";
      for (std::size_t o = 0; o < outcomes.size(); ++o) {
        auto [n, m] = outcomes[o];
        const double e = std::abs(run.outcome_probability(n, m) -
                                  outcome_probability_dual(q, n, m, alpha, alpha));
        errors[o].push_back(e);
        detail << " err(" << n << m << ")=" << fmt(e);
      }
      detail << " max infidelity " << fmt(run.max_infidelity()) << " (" << fmt(dt) << " s)\n";
      infid_last = run.max_infidelity();
      seconds_last = dt;
    }
    bool monotone = true;
    for (const auto& e : errors) monotone = monotone && e[0] > e[1] && e[1] > e[2];
    const std::string label = "qubit " + std::to_string(qi + 1);
    std::string d = detail.str();
    if (!d.empty()) d.pop_back();
    c.checks.push_back(
        make_property(label + ": per-outcome probability error decreases with r", monotone, d));
    c.checks.push_back(make_at_most(label + ": corrected-state infidelity at r=0.05", infid_last, 1e-2));
    c.checks.push_back(make_at_most(label + ": runtime of the r=0.05 point [s]", seconds_last, 300.0));
  }
  return c;
}

Criterion criterion_9(const GlobalOptions&) {
  Criterion c{9, "demodulation exactness", {}, 0.0};
  std::mt19937_64 rng(kSeed + 9);
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  std::bernoulli_distribution flip(0.5);
  std::uniform_int_distribution<int> pick_n(0, 3);
  const std::array<std::string, 2> single_basis{"|0>", "|1>"};

  double worst_fid_d = 0.0;
  double worst_qd = 0.0;
  double worst_sim_d = 0.0;
  double worst_fid_s = 0.0;
  double worst_qs = 0.0;
  double worst_sim_s = 0.0;
  int disp_success = 0;
  for (int i = 0; i < 20; ++i) {
    auto [a0, a1] = random_qubit(rng);
    const double factor = (flip(rng) ? -1.0 : 1.0) * mag(rng);
    const int n = pick_n(rng);
    const AMQubit am{a0, a1, factor};
    const double n2 = am.norm_factor() * am.norm_factor();

    const auto d = demod_displacement(am, n);
    if (d.success) {
      ++disp_success;
      const QubitState want{a0, static_cast<double>(d.sign) * a1, single_basis};
      worst_fid_d = std::max(worst_fid_d, 1.0 - fidelity(d.restored, want));
      const double g = *d.gamma;
      const double closed = std::exp(-g * g) * std::pow(g, 2 * (n - 1)) * (n - g * g) *
                            (n - g * g) / factorial(n);
      worst_qd = std::max(worst_qd, std::abs(d.success_probability - closed));
      worst_sim_d = std::max(worst_sim_d, std::abs(d.simulated_probability - n2 * closed));
    }

    const auto s = demod_swap(am);
    for (const auto& b : s.branches) {
      const QubitState want{a0, static_cast<double>(b.sign) * a1, dual_rail_basis()};
      worst_fid_s = std::max(worst_fid_s, 1.0 - fidelity(b.restored, want));
    }
    const double qs = factor * factor / (1.0 + factor * factor);
    worst_qs = std::max(worst_qs, std::abs(s.success_probability - qs));
    worst_sim_s = std::max(worst_sim_s, std::abs(s.simulated_probability - n2 * qs));
  }
  c.checks.push_back(make_check("displacement: successful runs out of 20", disp_success, 20, 0.0,
                                "every random factor admits a root for its outcome"));
  c.checks.push_back(make_at_most("displacement: max infidelity of restored state", worst_fid_d, 1e-9));
  c.checks.push_back(make_at_most("displacement: max |q^D - exp(-g^2) c_1n(g)^2|", worst_qd, 1e-10));
  c.checks.push_back(make_at_most("displacement: max |simulated - N^2 q^D|", worst_sim_d, 1e-10));
  c.checks.push_back(make_at_most("swap: max infidelity of restored state", worst_fid_s, 1e-9));
  c.checks.push_back(make_at_most("swap: max |q^S - A^2/(1+A^2)|", worst_qs, 0.0));
  c.checks.push_back(make_at_most("swap: max |simulated - N^2 q^S|", worst_sim_s, 1e-12));
  return c;
}

Criterion criterion_10(const GlobalOptions& opts) {
  Criterion c{10, "initially amplitude-modulated qubit", {}, 0.0};
  const int sum_cap = opts.nmax < 0 ? 20 : opts.nmax;
  auto dual = [&](double alpha, double a1) {
    return initially_am_dual(std::sqrt(1.0 - a1 * a1), a1, alpha, sum_cap);
  };
  auto single = [&](double alpha, double a1) {
    return initially_am_single(std::sqrt(1.0 - a1 * a1), a1, alpha, 3, opts.nmax).total_success;
  };

  double min_total = 1.0;
  double min_printed = 1.0;
  std::ostringstream pts;
  pts << "alpha=0.2 (recomposed / closed expression):";
  for (int i = 0; i <= 10; ++i) {
    const double a1 = 0.01 * i;
    const auto r = dual(0.2, a1);
    min_total = std::min(min_total, r.total_success);
    min_printed = std::min(min_printed, *r.total_printed);
    if (i % 2 == 0) {
      pts << "\n  |a1|=" << fmt(a1) << ": " << fmt(r.total_success) << " / "
          << fmt(*r.total_printed);
    }
  }
  const double a01 = amp_factor_dual(0, 1, 0, 1, 0.2, 0.2);
  pts << "\nN_AM^2 = 1/(1 + (|A_01|^-2 - 1)|a1|^2) with A_01(0.2) = " << fmt(a01)
      << " bounds every outcome's weight";
  c.checks.push_back(make_above("dual-rail total at alpha=0.2, min over |a1|<=0.1", min_total, 0.9,
                                pts.str()));
  c.checks.push_back(make_above("dual-rail closed expression at alpha=0.2, min over |a1|<=0.1",
                                min_printed, 0.9));

  bool monotone = true;
  double prev = 2.0;
  for (int i = 0; i < 50; ++i) {
    const double t = dual(0.2, i / 49.0).total_success;
    monotone = monotone && t <= prev + 1e-12;
    prev = t;
  }
  c.checks.push_back(make_property("dual-rail total non-increasing in |a1| on 50 points", monotone));

  double worst_margin = 1.0;
  std::ostringstream cmp;
  for (double alpha : {0.1, 0.2, 0.3}) {
    for (double a1 : {0.0, 0.05, 0.1}) {
      const double s = single(alpha, a1);
      const double d = dual(alpha, a1).total_success;
      worst_margin = std::min(worst_margin, s - d);
      cmp << "alpha=" << fmt(alpha) << " |a1|=" << fmt(a1) << ": single " << fmt(s) << ", dual "
          << fmt(d) << "\n";
    }
  }
  std::string detail = cmp.str();
  detail.pop_back();
  c.checks.push_back(make_property("single rail dominates dual rail at small alpha and |a1|",
                                   worst_margin >= 0.0, detail));
  return c;
}

Criterion extra_figures(const GlobalOptions& opts) {
  Criterion c{11, "sweep and figure data", {}, 0.0};
  auto peak = [](const CsvTable& t) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.rows().size(); ++i)
      if (t.value(i, "P_T") > t.value(best, "P_T")) best = i;
    return std::pair{t.value(best, "alpha"), t.value(best, "P_T")};
  };
  SweepSpec s01;
  const auto t01 = run_sweep(s01, opts);
  auto [a01, p01] = peak(t01);
  c.checks.push_back(make_check("dual (0,1) sweep: alpha at P_T peak", a01, 0.628, 0.005));
  c.checks.push_back(make_check("dual (0,1) sweep: P_T peak", p01, 0.2637, 0.0005));
  SweepSpec s12;
  s12.l = 1;
  s12.k = 2;
  const auto t12 = run_sweep(s12, opts);
  auto [a12, p12] = peak(t12);
  c.checks.push_back(make_check("dual (1,2) sweep: alpha at P_T peak", a12, 0.407, 0.005));
  c.checks.push_back(make_check("dual (1,2) sweep: P_T peak", p12, 0.24371, 0.0005));
  SweepSpec two;
  two.steps = 2;
  c.checks.push_back(make_check("steps=2 sweep row count", static_cast<double>(run_sweep(two, opts).rows().size()), 2.0, 0.0));

  auto at = [](const CsvTable& t, double alpha, const std::string& col) {
    for (std::size_t i = 0; i < t.rows().size(); ++i)
      if (std::abs(t.value(i, "alpha") - alpha) < 1e-8) return t.value(i, col);
    return std::nan("");
  };
  const auto f2 = make_figure("fig2", opts).tables.front().second;
  c.checks.push_back(make_check("fig2 P_S at alpha=1/sqrt2", at(f2, kInvSqrt2, "P_S"), 0.441789, 0.0005));
  c.checks.push_back(make_check("fig2 P_S at alpha=0.628482", at(f2, 0.628482, "P_S"), 0.500673, 0.0005));
  const auto f3 = make_figure("fig3", opts).tables.front().second;
  c.checks.push_back(make_check("fig3 P_S at alpha=0.4072", at(f3, 0.4072, "P_S"), 0.5317, 0.001));
  c.checks.push_back(make_check("fig3 P_S at alpha=0.5053", at(f3, 0.5053, "P_S"), 0.4014, 0.001));
  return c;
}

Criterion extra_properties(const GlobalOptions& opts) {
  Criterion c{12, "channel and demodulation properties", {}, 0.0};
  const auto small = negativity(HybridChannel{0.01}, opts.nmax);
  c.checks.push_back(make_check("negativity at beta=0.01 (about 2 beta)", small.numeric, 0.02, 1e-4));
  const auto large = negativity(HybridChannel{2.0}, opts.nmax);
  c.checks.push_back(make_above("negativity at beta=2", large.numeric, 0.9999));

  // Chain depth: what a fourth attempt would add.
  const double astar = unit_factor_alpha(1, 2, 1, 2, 0.45, 0.55);
  double worst_tail = 0.0;
  std::ostringstream tail;
  struct Scenario {
    int l, k;
    double alpha;
    Encoding enc;
    const char* name;
  };
  const std::vector<Scenario> scenarios{{0, 1, kInvSqrt2, Encoding::dual_rail, "dual (0,1) 1/sqrt2"},
                                        {1, 2, astar, Encoding::dual_rail, "dual (1,2) alpha*"},
                                        {0, 1, 0.5, Encoding::single_rail, "single (0,1) 0.5"},
                                        {0, 1, 1.0, Encoding::single_rail, "single (0,1) 1.0"}};
  for (const auto& s : scenarios) {
    const double d3 = overall_success(s.l, s.k, s.alpha, DemodPolicy{PolicyKind::displacement_only, 3},
                                      s.enc, opts.nmax).total;
    const double d4 = overall_success(s.l, s.k, s.alpha, DemodPolicy{PolicyKind::displacement_only, 4},
                                      s.enc, opts.nmax).total;
    worst_tail = std::max(worst_tail, d4 - d3);
    tail << s.name << ": depth 3 " << fmt(d3) << ", depth 4 " << fmt(d4) << "\n";
  }
  std::string t = tail.str();
  t.pop_back();
  c.checks.push_back(make_at_most("gain of a fourth displacement attempt", worst_tail, 1e-3, t));

  double worst_excess = -1.0;
  for (double alpha : {0.2, 0.5, 0.8, 1.2}) {
    const auto sw = overall_success(0, 1, alpha, DemodPolicy{PolicyKind::swap_only},
                                    Encoding::single_rail, opts.nmax);
    const auto dp = overall_success(0, 1, alpha, DemodPolicy{PolicyKind::displacement_only},
                                    Encoding::single_rail, opts.nmax);
    double mass = 0.0;
    for (const auto& o : sw.outcomes) mass += o.weight;
    worst_excess = std::max({worst_excess, sw.delta - mass, dp.delta - mass});
  }
  c.checks.push_back(make_at_most("single-rail gains exceed the AM mass by", worst_excess, 0.0));

  const auto skip = overall_success(0, 1, 0.6, DemodPolicy{PolicyKind::skip_all},
                                    Encoding::dual_rail, opts.nmax);
  c.checks.push_back(make_check("no-demodulation policy equals P_T", skip.total,
                                direct_success_probability(0, 1, 0.6, opts.nmax), 1e-14));

  const auto r = initially_am_single(std::sqrt(1.0 - 0.16), 0.4, 0.5, 3, opts.nmax);
  double total = 0.0;
  for (const auto& rec : r.records) total += rec.probability;
  c.checks.push_back(make_check("single-rail initially-AM outcome probabilities sum to 1",
                                total, 1.0, 1e-6));
  c.checks.push_back(make_property("vacuum outcome is clean", r.records.front().clean &&
                                                                   std::abs(r.records.front().factor - 1.0) < 1e-12));
  return c;
}

}  // namespace

Check make_check(std::string claim, double computed, double expected, double tolerance,
                 std::string note) {
  Check c{std::move(claim), computed, expected, tolerance, "abs", false, std::move(note)};
  c.pass = std::abs(computed - expected) <= tolerance;
  return c;
}

Check make_property(std::string claim, bool holds, std::string note) {
  return Check{std::move(claim), holds ? 1.0 : 0.0, 1.0, 0.0, "property", holds, std::move(note)};
}

Check make_at_most(std::string claim, double computed, double bound, std::string note) {
  return Check{std::move(claim), computed, bound, 0.0, "<=", computed <= bound, std::move(note)};
}

Check make_above(std::string claim, double computed, double bound, std::string note) {
  return Check{std::move(claim), computed, bound, 0.0, ">", computed > bound, std::move(note)};
}

bool Criterion::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Criterion run_criterion(int number, const GlobalOptions& opts) {
  static const std::vector<std::function<Criterion(const GlobalOptions&)>> table{
      criterion_1, criterion_2, criterion_3, criterion_4,    criterion_5,     criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, extra_figures, extra_properties};
  if (number < 1 || number > static_cast<int>(table.size())) {
    throw UsageError("no criterion numbered " + std::to_string(number));
  }
  const auto t0 = std::chrono::steady_clock::now();
  Criterion c = table[static_cast<std::size_t>(number - 1)](opts);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::vector<Criterion> run_acceptance(const GlobalOptions& opts) {
  std::vector<Criterion> out;
  for (int i = 1; i <= 10; ++i) out.push_back(run_criterion(i, opts));
  return out;
}

std::vector<std::string> suite_names() { return {"paper", "properties", "oracle", "all"}; }

std::vector<Criterion> run_suite(const std::string& suite, const GlobalOptions& opts) {
  std::vector<int> ids;
  if (suite == "paper") {
    ids = {3, 4, 5, 6, 10, 11};
  } else if (suite == "properties") {
    ids = {1, 2, 7, 9, 12};
  } else if (suite == "oracle") {
    ids = {8};
  } else if (suite == "all") {
    ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  } else {
    throw UsageError("unknown suite '" + suite + "' (expected paper, properties, oracle or all)");
  }
  std::vector<Criterion> out;
  for (int id : ids) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_report(const std::vector<Criterion>& criteria) {
  std::ostringstream s;
  int passed = 0;
  for (const auto& c : criteria) {
    s << "== [" << (c.pass() ? "PASS" : "FAIL") << "] " << c.number << ". " << c.title << " ("
      << fmt(c.seconds) << " s)\n";
    for (const auto& k : c.checks) {
      s << "  [" << (k.pass ? "PASS" : "FAIL") << "] " << k.claim << ": ";
      if (k.relation == "abs") {
        s << "computed " << fmt(k.computed) << ", reference " << fmt(k.expected) << ", tolerance "
          << fmt(k.tolerance);
      } else if (k.relation == "property") {
        s << (k.pass ? "holds" : "violated");
      } else {
        s << "computed " << fmt(k.computed) << ", required " << k.relation << " "
          << fmt(k.expected);
      }
      s << "\n";
      if (!k.note.empty()) {
        std::istringstream lines(k.note);
        for (std::string line; std::getline(lines, line);) s << "      " << line << "\n";
      }
    }
    if (c.pass()) ++passed;
  }
  s << passed << "/" << criteria.size() << " groups passed\n";
  return s.str();
}

}  // namespace dvcv::cli
