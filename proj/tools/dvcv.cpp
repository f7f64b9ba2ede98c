// Command-line front end: sweeps, figure data, verification suites,
// channel negativity and the finite-reflectance oracle.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dvcv/cli/commands.hpp"
#include "dvcv/cli/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumericGuard = 3 };

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("DVCV_OUT_DIR"); env && *env) return env;
  return ".";
}

void emit(const dvcv::cli::CsvTable& table, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << table.str();
  } else {
    table.write(out);
    std::cerr << "wrote " << out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dvcv::cli;

  CLI::App app{"Hybrid discrete/continuous-variable teleportation simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file ([subcommand] sections)");
  app.set_version_flag("--version", std::string("dvcv ") + DVCV_VERSION);

  GlobalOptions opts;
  app.add_option("--nmax", opts.nmax, "Photon-number cutoff for analytic sums (-1: automatic)")
      ->check(CLI::Range(-1, 200));
  app.add_option("--tail-tol", opts.tail_tol, "Largest tolerated truncated probability mass")
      ->check(CLI::Range(0.0, 1.0));

  SweepSpec sweep;
  std::string sweep_out;
  unsigned threads = 0;
  auto* sw = app.add_subcommand("sweep", "Tabulate probabilities over a range of alpha");
  sw->add_option("--protocol", sweep.protocol, "dual | single | init_am_dual | init_am_single")
      ->capture_default_str();
  sw->add_option("--l", sweep.l, "First logical Fock label")->capture_default_str();
  sw->add_option("--k", sweep.k, "Second logical Fock label")->capture_default_str();
  sw->add_option("--alpha-min", sweep.alpha_min)->capture_default_str();
  sw->add_option("--alpha-max", sweep.alpha_max)->capture_default_str();
  sw->add_option("--steps", sweep.steps)->capture_default_str();
  auto* a1_abs = sw->add_option("--a1-abs", sweep.a1_abs, "Single |a1| value (initially-AM)");
  sw->add_option("--a1-grid", sweep.a1_grid, "Number of |a1| points on [0, 1] (initially-AM)")
      ->excludes(a1_abs);
  sw->add_option("--out", sweep_out, "Output CSV (default: stdout)");
  sw->add_option("--threads", threads, "Worker threads (0: all cores)");

  std::string figure_name;
  std::string figure_dir;
  auto* fig = app.add_subcommand("figure", "Write the curve data of a figure");
  fig->add_option("name", figure_name, "fig2 | fig3 | fig4 | fig5")->required();
  fig->add_option("--out", figure_dir, "Output directory (default: $DVCV_OUT_DIR or .)");

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", suite, "paper | properties | oracle | all")->capture_default_str();

  double beta = 1.0;
  auto* neg = app.add_subcommand("negativity", "Entanglement of the hybrid channel");
  neg->add_option("--beta", beta, "Coherent amplitude of the channel")->capture_default_str();

  OracleSpec oracle;
  std::string oracle_out;
  auto* orc = app.add_subcommand("oracle", "Finite-reflectance circuit against the r -> 0 limit");
  orc->add_option("--alpha", oracle.alpha)->capture_default_str();
  orc->add_option("--r", oracle.r, "Beam-splitter reflectance")->capture_default_str();
  orc->add_option("--l", oracle.l)->capture_default_str();
  orc->add_option("--k", oracle.k)->capture_default_str();
  orc->add_option("--a0", oracle.a0)->capture_default_str();
  orc->add_option("--a1", oracle.a1)->capture_default_str();
  orc->add_option("--outcome-max", oracle.outcome_max)->capture_default_str();
  orc->add_option("--out", oracle_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sw) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto table = run_sweep(sweep, opts, threads);
      emit(table, sweep_out);
      std::cerr << "sweep: " << table.rows().size() << " rows in "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                << " s\n";
    } else if (*fig) {
      const auto bundle = make_figure(figure_name, opts);
      const std::filesystem::path dir =
          figure_dir.empty() ? default_out_dir() : std::filesystem::path(figure_dir);
      std::filesystem::create_directories(dir);
      for (const auto& [file, table] : bundle.tables) {
        table.write(dir / file);
        std::cerr << "wrote " << (dir / file).string() << "\n";
      }
      std::ofstream(dir / (figure_name + ".gp"), std::ios::binary) << bundle.gnuplot;
      std::cerr << "wrote " << (dir / (figure_name + ".gp")).string() << "\n";
    } else if (*ver) {
      const auto criteria = run_suite(suite, opts);
      std::cout << format_report(criteria);
      for (const auto& c : criteria)
        if (!c.pass()) return kVerifyFailed;
    } else if (*neg) {
      std::cout << negativity_report(beta, opts);
    } else if (*orc) {
      emit(run_oracle(oracle, opts), oracle_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const dvcv::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const dvcv::TailMassError& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kNumericGuard;
  } catch (const dvcv::Error& e) {
    std::cerr << "numeric guard: " << e.what() << "\n";
    return kNumericGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
