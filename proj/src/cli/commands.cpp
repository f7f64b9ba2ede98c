#include "dvcv/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dvcv/demodulation.hpp"
#include "dvcv/displaced.hpp"
#include "dvcv/optics.hpp"
#include "dvcv/protocol.hpp"

namespace dvcv::cli {

namespace {

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  v.back() = hi;
  return v;
}

void guard_mass(double completeness, double tol, const std::string& where) {
  if (std::abs(1.0 - completeness) > tol) {
    std::ostringstream msg;
    msg << where << ": probability mass " << format_number(completeness)
        << " misses 1 by more than the tail tolerance " << tol
        << "; raise --nmax or --tail-tol";
    throw TailMassError(msg.str());
  }
}

struct DualRow {
  double p_t, p_am, pair, overall;
};

DualRow dual_row(int l, int k, double alpha, const GlobalOptions& opts) {
  DualRow r{};
  r.p_t = direct_success_probability(l, k, alpha, opts.nmax);
  r.p_am = am_probability(l, k, alpha, opts.nmax);
  guard_mass(r.p_t + r.p_am, opts.tail_tol, "alpha=" + format_number(alpha));
  r.pair = pair_sum_probability(l, k, l, k, alpha);
  r.overall = overall_success(l, k, alpha, DemodPolicy{}, Encoding::dual_rail, opts.nmax).total;
  return r;
}

struct SingleRow {
  double p_t, p_am, d_swap, d_disp;
};

SingleRow single_row(int l, int k, double alpha, const GlobalOptions& opts) {
  const auto swap = overall_success(l, k, alpha, DemodPolicy{PolicyKind::swap_only},
                                    Encoding::single_rail, opts.nmax);
  const auto disp = overall_success(l, k, alpha, DemodPolicy{PolicyKind::displacement_only},
                                    Encoding::single_rail, opts.nmax);
  SingleRow r{};
  r.p_t = swap.direct;
  for (const auto& o : swap.outcomes) r.p_am += o.weight;
  guard_mass(r.p_t + r.p_am, opts.tail_tol, "alpha=" + format_number(alpha));
  r.d_swap = swap.delta;
  r.d_disp = disp.delta;
  return r;
}

double am_completeness(const InitiallyAMResult& res) {
  double s = 0.0;
  for (const auto& rec : res.records) s += rec.probability;
  return s;
}

std::string pair_label(int n, int m) {
  return "P_" + std::to_string(n) + std::to_string(m) + "_S";
}

}  // namespace

std::vector<std::string> metadata_lines(const GlobalOptions& opts) {
  std::vector<std::string> lines;
  lines.push_back(std::string("dvcv ") + DVCV_VERSION);
  lines.push_back("truncation: nmax=" + (opts.nmax < 0 ? std::string("auto")
                                                        : std::to_string(opts.nmax)) +
                  " tail_tol=" + format_number(opts.tail_tol));
  return lines;
}

void SweepSpec::validate() const {
  static const std::vector<std::string> known{"dual", "single", "init_am_dual", "init_am_single"};
  if (std::find(known.begin(), known.end(), protocol) == known.end()) {
    throw UsageError("unknown protocol '" + protocol +
                     "' (expected dual, single, init_am_dual or init_am_single)");
  }
  if (!(alpha_min < alpha_max)) throw UsageError("alpha-min must be below alpha-max");
  if (alpha_min < 0.0) throw UsageError("alpha-min must be non-negative");
  if (steps < 2) throw UsageError("steps must be at least 2");
  if (l < 0 || k < 0 || l == k) throw UsageError("l and k must be distinct non-negative integers");
  if (a1_abs && a1_grid) throw UsageError("--a1-abs and --a1-grid are exclusive");
  if (a1_abs && !(*a1_abs >= 0.0 && *a1_abs <= 1.0)) throw UsageError("a1-abs must lie in [0, 1]");
  if (a1_grid && *a1_grid < 2) throw UsageError("a1-grid needs at least 2 points");
  const bool init_am = protocol.rfind("init_am", 0) == 0;
  if (init_am && alpha_min <= 0.0) throw UsageError("initially-AM protocols need alpha > 0");
  if (init_am && (l != 0 || k != 1)) throw UsageError("initially-AM protocols use (l, k) = (0, 1)");
  if (!init_am && (a1_abs || a1_grid)) {
    throw UsageError("|a1| options apply only to the initially-AM protocols");
  }
}

std::vector<double> SweepSpec::a1_values() const {
  if (a1_grid) return linspace(0.0, 1.0, *a1_grid);
  return {a1_abs.value_or(0.0)};
}

std::string SweepSpec::describe() const {
  std::ostringstream s;
  s << "sweep protocol=" << protocol << " l=" << l << " k=" << k
    << " alpha_min=" << format_number(alpha_min) << " alpha_max=" << format_number(alpha_max)
    << " steps=" << steps;
  if (a1_abs) s << " a1_abs=" << format_number(*a1_abs);
  if (a1_grid) s << " a1_grid=" << *a1_grid;
  return s.str();
}

CsvTable run_sweep(const SweepSpec& spec, const GlobalOptions& opts, unsigned threads) {
  spec.validate();
  const auto alphas = linspace(spec.alpha_min, spec.alpha_max, spec.steps);
  const auto a1s = spec.a1_values();
  const std::size_t rows = alphas.size() * a1s.size();

  std::vector<std::string> columns;
  if (spec.protocol == "dual") {
    columns = {"alpha", "P_T", "P_AM", "completeness", pair_label(spec.l, spec.k), "P_S",
               "P_overall"};
  } else if (spec.protocol == "single") {
    columns = {"alpha", "P_T", "P_AM", "completeness", "dP_S", "dP_D"};
  } else if (spec.protocol == "init_am_dual") {
    columns = {"alpha", "a1_abs", "total_success", "total_printed", "clean_probability",
               "completeness"};
  } else {
    columns = {"alpha", "a1_abs", "total_success", "clean_probability", "completeness"};
  }

  std::vector<std::vector<double>> values(rows);
  parallel_for(rows, threads, [&](std::size_t i) {
    const double alpha = alphas[i / a1s.size()];
    const double a1 = a1s[i % a1s.size()];
    const double a0 = std::sqrt(std::max(0.0, 1.0 - a1 * a1));
    if (spec.protocol == "dual") {
      const auto r = dual_row(spec.l, spec.k, alpha, opts);
      values[i] = {alpha, r.p_t, r.p_am, r.p_t + r.p_am, r.pair, r.p_t + r.pair, r.overall};
    } else if (spec.protocol == "single") {
      const auto r = single_row(spec.l, spec.k, alpha, opts);
      values[i] = {alpha, r.p_t, r.p_am, r.p_t + r.p_am, r.d_swap, r.d_disp};
    } else if (spec.protocol == "init_am_dual") {
      const auto res = initially_am_dual(a0, a1, alpha, opts.nmax < 0 ? 20 : opts.nmax);
      const double c = am_completeness(res);
      guard_mass(c, opts.tail_tol, "alpha=" + format_number(alpha));
      values[i] = {alpha, a1, res.total_success, *res.total_printed, res.clean_probability, c};
    } else {
      const auto res = initially_am_single(a0, a1, alpha, 3, opts.nmax);
      const double c = am_completeness(res);
      guard_mass(c, opts.tail_tol, "alpha=" + format_number(alpha));
      values[i] = {alpha, a1, res.total_success, res.clean_probability, c};
    }
  });

  CsvTable table(columns);
  for (auto& line : metadata_lines(opts)) table.add_comment(std::move(line));
  table.add_comment(spec.describe());
  for (const auto& v : values) table.add_row(v);
  return table;
}

std::vector<std::string> figure_names() { return {"fig2", "fig3", "fig4", "fig5"}; }

namespace {

std::vector<double> grid_with(double lo, double hi, int steps, std::vector<double> extra) {
  auto g = linspace(lo, hi, steps);
  g.insert(g.end(), extra.begin(), extra.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          g.end());
  return g;
}

CsvTable teleport_figure(int l, int k, const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<double>& alphas, const GlobalOptions& opts) {
  std::vector<std::string> cols{"alpha", "P_T"};
  for (auto [n, m] : pairs) cols.push_back(pair_label(n, m));
  cols.insert(cols.end(), {"P_S", "P_AM", "P_overall"});
  std::vector<std::vector<double>> values(alphas.size());
  parallel_for(alphas.size(), 0, [&](std::size_t i) {
    const double a = alphas[i];
    const auto r = dual_row(l, k, a, opts);
    std::vector<double> row{a, r.p_t};
    for (auto [n, m] : pairs) row.push_back(pair_sum_probability(l, k, n, m, a));
    row.insert(row.end(), {r.p_t + r.pair, r.p_am, r.overall});
    values[i] = std::move(row);
  });
  CsvTable t(cols);
  for (const auto& v : values) t.add_row(v);
  return t;
}

std::string plot_lines(const std::string& file, const CsvTable& t, std::size_t xcol,
                       std::size_t first, std::size_t last) {
  std::ostringstream s;
  s << "plot ";
  for (std::size_t c = first; c <= last; ++c) {
    if (c != first) s << ", \\\n     ";
    s << "'" << file << "' using " << xcol + 1 << ":" << c + 1 << " with lines title '"
      << t.columns()[c] << "'";
  }
  s << "\n";
  return s.str();
}

std::string script_header(const std::string& xlabel) {
  return "set datafile separator ','\nset datafile commentschars '#'\nset key outside\n"
         "set xlabel '" + xlabel + "'\nset ylabel 'probability'\n";
}

}  // namespace

FigureBundle make_figure(const std::string& name, const GlobalOptions& opts) {
  FigureBundle b;
  const auto meta = metadata_lines(opts);
  auto stamp = [&](CsvTable& t, const std::string& what) {
    for (const auto& line : meta) t.add_comment(line);
    t.add_comment("figure " + name + ": " + what);
  };

  if (name == "fig2" || name == "fig3") {
    const bool f2 = name == "fig2";
    const int l = f2 ? 0 : 1;
    const int k = f2 ? 1 : 2;
    const std::vector<std::pair<int, int>> pairs =
        f2 ? std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}}
           : std::vector<std::pair<int, int>>{{1, 2}, {0, 1}, {0, 2}, {1, 3}, {0, 3}};
    std::vector<double> keys;
    if (f2) {
      keys = {0.628482, 1.0 / std::sqrt(2.0)};
    } else {
      keys = {0.4072, 0.5053, unit_factor_alpha(1, 2, 1, 2, 0.45, 0.55)};
    }
    CsvTable t = teleport_figure(l, k, pairs, grid_with(0.05, 1.5, 146, keys), opts);
    stamp(t, "dual rail (l,k)=(" + std::to_string(l) + "," + std::to_string(k) +
                 "); P_S = P_T + " + pair_label(l, k));
    const std::string file = name + ".csv";
    b.gnuplot = script_header("alpha") + plot_lines(file, t, 0, 1, t.columns().size() - 1);
    b.tables.emplace_back(file, std::move(t));
  } else if (name == "fig4") {
    const auto alphas = linspace(0.05, 1.5, 146);
    std::vector<std::vector<double>> values(alphas.size());
    parallel_for(alphas.size(), 0, [&](std::size_t i) {
      const auto r = single_row(0, 1, alphas[i], opts);
      values[i] = {alphas[i], r.d_swap, r.d_disp};
    });
    CsvTable t({"alpha", "dP_S", "dP_D"});
    stamp(t, "single rail (l,k)=(0,1); swap and displacement-chain (depth 3) gains");
    for (const auto& v : values) t.add_row(v);
    b.gnuplot = script_header("alpha") + plot_lines("fig4.csv", t, 0, 1, 2);
    b.tables.emplace_back("fig4.csv", std::move(t));
  } else if (name == "fig5") {
    const std::vector<double> alphas{0.1, 0.2, 0.3, 0.5};
    const auto a1s = linspace(0.0, 1.0, 51);
    const std::size_t rows = alphas.size() * a1s.size();
    std::vector<std::vector<double>> values(rows);
    parallel_for(rows, 0, [&](std::size_t i) {
      const double alpha = alphas[i / a1s.size()];
      const double a1 = a1s[i % a1s.size()];
      const double a0 = std::sqrt(std::max(0.0, 1.0 - a1 * a1));
      const auto d = initially_am_dual(a0, a1, alpha, opts.nmax < 0 ? 20 : opts.nmax);
      const auto s = initially_am_single(a0, a1, alpha, 3, opts.nmax);
      values[i] = {alpha, a1, d.total_success, *d.total_printed, s.total_success};
    });
    CsvTable t({"alpha", "a1_abs", "dual_total", "dual_total_printed", "single_total"});
    stamp(t, "initially amplitude-modulated qubit; dual rail restored by swapping, single rail"
             " by the displacement chain");
    for (const auto& v : values) t.add_row(v);
    std::ostringstream s;
    s << script_header("|a1|") << "set multiplot layout 1,2\nplot ";
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (j) s << ", \\\n     ";
      s << "'fig5.csv' every ::" << j * a1s.size() << "::" << (j + 1) * a1s.size() - 1
        << " using 2:3 with lines title 'alpha=" << format_number(alphas[j]) << "'";
    }
    s << "\nplot ";
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (j) s << ", \\\n     ";
      s << "'fig5.csv' every ::" << j * a1s.size() << "::" << (j + 1) * a1s.size() - 1
        << " using 2:5 with lines title 'alpha=" << format_number(alphas[j]) << "'";
    }
    s << "\nunset multiplot\n";
    b.gnuplot = s.str();
    b.tables.emplace_back("fig5.csv", std::move(t));
  } else {
    throw UsageError("unknown figure '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  return b;
}

std::string negativity_report(double beta, const GlobalOptions& opts) {
  if (!(beta > 0.0)) throw UsageError("beta must be positive");
  const auto n = negativity(HybridChannel{beta}, opts.nmax);
  std::ostringstream s;
  s << "beta: " << format_number(beta) << "\n"
    << "closed_form: " << format_number(n.closed_form) << "\n"
    << "numeric: " << format_number(n.numeric) << "\n"
    << "abs_diff: " << format_number(std::abs(n.closed_form - n.numeric)) << "\n"
    << "vidal_werner: " << format_number(n.vidal_werner) << "\n";
  return s.str();
}

CsvTable run_oracle(const OracleSpec& spec, const GlobalOptions& opts) {
  if (!(spec.r > 0.0 && spec.r <= 0.3)) throw UsageError("r must lie in (0, 0.3]");
  if (!(spec.alpha > 0.0)) throw UsageError("alpha must be positive");
  if (spec.outcome_max < 0) throw UsageError("outcome-max must be non-negative");
  UnknownQubit q;
  try {
    q = UnknownQubit::make(spec.a0, spec.a1, spec.l, spec.k);
  } catch (const InvalidArgumentError& e) {
    throw UsageError(e.what());
  }
  const auto run = brute_force_pipeline(q, spec.alpha, spec.alpha, spec.r, spec.outcome_max,
                                        opts.tail_tol);
  CsvTable t({"parity", "n", "m", "probability", "analytic_probability", "abs_error", "fidelity",
              "purity"});
  for (auto line : metadata_lines(opts)) t.add_comment(std::move(line));
  t.add_comment("oracle alpha=" + format_number(spec.alpha) + " r=" + format_number(spec.r) +
                " l=" + std::to_string(spec.l) + " k=" + std::to_string(spec.k) +
                " a0=" + format_number(spec.a0) + " a1=" + format_number(spec.a1) +
                " beta=" + format_number(run.beta) + " beta1=" + format_number(run.beta1));
  for (const auto& rec : run.records) {
    t.add_row({to_string(rec.outcome.parity), std::to_string(rec.outcome.n),
               std::to_string(rec.outcome.m.value_or(0)), format_number(rec.probability),
               format_number(rec.analytic_probability),
               format_number(std::abs(rec.probability - rec.analytic_probability)),
               format_number(rec.fidelity), format_number(rec.purity)});
  }
  return t;
}

}  // namespace dvcv::cli
