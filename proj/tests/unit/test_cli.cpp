#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dvcv/cli/commands.hpp"
#include "dvcv/cli/csv.hpp"
#include "dvcv/cli/verify.hpp"

using namespace dvcv;
using namespace dvcv::cli;

TEST_CASE("numbers print with nine significant digits") {
  CHECK(format_number(0.263736831) == "0.263736831");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5e-12) == "1.5e-12");
}

TEST_CASE("csv layout") {
  CsvTable t({"a", "b"});
  t.add_comment("hello");
  t.add_row(std::vector<double>{1.0, 0.5});
  CHECK(t.str() == "# hello\na,b\n1,0.5\n");
  CHECK(t.value(0, "b") == 0.5);
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), InvalidArgumentError);
  CHECK_THROWS_AS(t.column_index("c"), InvalidArgumentError);
}

TEST_CASE("sweep output is deterministic across thread counts") {
  SweepSpec s;
  s.steps = 9;
  const GlobalOptions o;
  const auto one = run_sweep(s, o, 1).str();
  const auto many = run_sweep(s, o, 4).str();
  CHECK(one == many);
  CHECK(one == run_sweep(s, o, 3).str());
  CHECK(one.find('\r') == std::string::npos);
}

TEST_CASE("sweep shapes and protocols") {
  const GlobalOptions o;
  SweepSpec two;
  two.steps = 2;
  CHECK(run_sweep(two, o).rows().size() == 2);

  SweepSpec grid;
  grid.protocol = "init_am_dual";
  grid.alpha_min = 0.2;
  grid.alpha_max = 0.3;
  grid.steps = 3;
  grid.a1_grid = 4;
  const auto t = run_sweep(grid, o);
  CHECK(t.rows().size() == 12);
  CHECK(t.value(1, "a1_abs") == doctest::Approx(1.0 / 3.0));
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    const double p = t.value(i, "total_success");
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(std::abs(t.value(i, "completeness") - 1.0) < 1e-6);
  }

  SweepSpec single;
  single.protocol = "single";
  single.steps = 3;
  const auto ts = run_sweep(single, o);
  for (std::size_t i = 0; i < ts.rows().size(); ++i) {
    CHECK(ts.value(i, "dP_S") <= ts.value(i, "P_AM") + 1e-12);
    CHECK(ts.value(i, "dP_D") <= ts.value(i, "P_AM") + 1e-12);
  }
}

TEST_CASE("invalid sweeps are usage errors") {
  const GlobalOptions o;
  SweepSpec s;
  s.steps = 1;
  CHECK_THROWS_AS(run_sweep(s, o), UsageError);
  s = SweepSpec{};
  s.alpha_min = 1.0;
  s.alpha_max = 0.5;
  CHECK_THROWS_AS(run_sweep(s, o), UsageError);
  s = SweepSpec{};
  s.protocol = "bogus";
  CHECK_THROWS_AS(run_sweep(s, o), UsageError);
  s = SweepSpec{};
  s.a1_abs = 0.3;
  CHECK_THROWS_AS(run_sweep(s, o), UsageError);
}

TEST_CASE("a tiny cutoff trips the numeric guard") {
  GlobalOptions o;
  o.nmax = 3;
  SweepSpec s;
  s.steps = 3;
  CHECK_THROWS_AS(run_sweep(s, o), TailMassError);
}

TEST_CASE("figures") {
  const GlobalOptions o;
  CHECK_THROWS_AS(make_figure("fig9", o), UsageError);
  const auto f4 = make_figure("fig4", o);
  REQUIRE(f4.tables.size() == 1);
  CHECK(f4.tables[0].first == "fig4.csv");
  CHECK(f4.gnuplot.find("set datafile separator ','") != std::string::npos);
  const auto f2 = make_figure("fig2", o).tables[0].second;
  bool found = false;
  for (std::size_t i = 0; i < f2.rows().size(); ++i) {
    if (std::abs(f2.value(i, "alpha") - 1.0 / std::sqrt(2.0)) < 1e-8) {
      found = true;
      CHECK(std::abs(f2.value(i, "P_S") - 0.441789) < 0.0005);
    }
  }
  CHECK(found);
}

TEST_CASE("negativity and oracle reports") {
  const GlobalOptions o;
  const auto rep = negativity_report(1.0, o);
  CHECK(rep.find("closed_form: 0.9907") != std::string::npos);
  CHECK_THROWS_AS(negativity_report(-1.0, o), UsageError);
  OracleSpec spec;
  spec.outcome_max = 1;
  const auto t = run_oracle(spec, o);
  CHECK(t.rows().size() == 8);
  spec.r = 0.9;
  CHECK_THROWS_AS(run_oracle(spec, o), UsageError);
  spec.r = 0.1;
  spec.a0 = 0.9;
  CHECK_THROWS_AS(run_oracle(spec, o), UsageError);
}

TEST_CASE("check helpers and report") {
  CHECK(make_check("x", 1.0, 1.05, 0.1).pass);
  CHECK_FALSE(make_check("x", 1.0, 1.2, 0.1).pass);
  CHECK(make_at_most("y", 0.1, 0.2).pass);
  CHECK_FALSE(make_above("z", 0.5, 0.9).pass);
  Criterion c{3, "demo", {make_property("p", true, "line one\nline two")}, 0.0};
  const auto rep = format_report({c});
  CHECK(rep.find("[PASS] 3. demo") != std::string::npos);
  CHECK(rep.find("      line two") != std::string::npos);
  CHECK_THROWS_AS(run_suite("nope", GlobalOptions{}), UsageError);
  CHECK_THROWS_AS(run_criterion(13, GlobalOptions{}), UsageError);
}
