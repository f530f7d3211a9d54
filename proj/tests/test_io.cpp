#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "oracles.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/io.hpp"
#include "tvvecm/montecarlo.hpp"
#include "tvvecm/pipeline.hpp"

using namespace tvvecm;

TEST_CASE("csv parsing handles headers, quotes, and CRLF") {
  std::istringstream in(
      "date,\"long, rate\",short\r\n"
      "\"2001-01\",4.5,3.25\r\n"
      "2001-02,4.75,3.5\r\n"
      "\r\n"
      "2001-03,-1.0e-2,0\r\n");
  CsvOptions opts;
  opts.skip_column = "date";
  Panel panel = parse_panel_csv(in, opts);
  REQUIRE(panel.T() == 3);
  REQUIRE(panel.d() == 2);
  CHECK(panel.columns[0] == "long, rate");
  CHECK(panel.columns[1] == "short");
  CHECK(panel.labels[0] == "2001-01");
  CHECK(panel.values(0, 0) == 4.5);
  CHECK(panel.values(2, 0) == -0.01);
  CHECK(panel.values(2, 1) == 0.0);
}

TEST_CASE("leading date column is dropped without an explicit skip") {
  std::istringstream iso("date,l,s\n2001-01-31,4.5,3.25\n2001-02-28,4.75,3.5\n");
  Panel panel = parse_panel_csv(iso);
  REQUIRE(panel.d() == 2);
  CHECK(panel.columns[0] == "l");
  CHECK(panel.labels[0] == "2001-01-31");

  std::istringstream monthly("date,l,s\n1961:M6,4.5,3.25\n1961:M7,4.75,3.5\n");
  Panel monthly_panel = parse_panel_csv(monthly);
  CHECK(monthly_panel.d() == 2);
  CHECK(monthly_panel.labels[1] == "1961:M7");
}

TEST_CASE("column order flag permutes the panel") {
  std::istringstream in("l,s\n1.0,2.0\n3.0,4.0\n");
  CsvOptions opts;
  opts.order = {"s", "l"};
  Panel panel = parse_panel_csv(in, opts);
  CHECK(panel.columns[0] == "s");
  CHECK(panel.values(0, 0) == 2.0);
  CHECK(panel.values(1, 1) == 3.0);

  std::istringstream unknown("l,s\n1.0,2.0\n");
  CsvOptions bad;
  bad.order = {"s", "x"};
  CHECK_THROWS_AS(parse_panel_csv(unknown, bad), ParseError);
  std::istringstream partial("l,s\n1.0,2.0\n");
  CsvOptions too_few;
  too_few.order = {"s"};
  CHECK_THROWS_AS(parse_panel_csv(partial, too_few), ParseError);
}

TEST_CASE("headerless csv with index skip column") {
  std::istringstream in("0,1.5,2.5\n1,1.6,2.4\n2,1.7,2.3\n");
  CsvOptions opts;
  opts.header = false;
  opts.skip_column = "0";
  Panel panel = parse_panel_csv(in, opts);
  REQUIRE(panel.T() == 3);
  REQUIRE(panel.d() == 2);
  CHECK(panel.labels[2] == "2");
  CHECK(panel.columns[0] == "c2");
}

TEST_CASE("parse failures carry the row and column") {
  std::istringstream bad_cell("a,b\n1.0,x2\n");
  CHECK_THROWS_WITH_AS(parse_panel_csv(bad_cell),
                       doctest::Contains("row 2, column b"), ParseError);

  std::istringstream ragged("a,b\n1.0\n");
  CHECK_THROWS_AS(parse_panel_csv(ragged), ParseError);

  std::istringstream empty("");
  CHECK_THROWS_AS(parse_panel_csv(empty), ParseError);

  std::istringstream no_rows("a,b\n");
  CHECK_THROWS_AS(parse_panel_csv(no_rows), ParseError);

  std::istringstream missing_col("a,b\n1,2\n");
  CsvOptions opts;
  opts.skip_column = "date";
  CHECK_THROWS_AS(parse_panel_csv(missing_col, opts), ParseError);

  std::istringstream nan_cell("a,b\n1.0,nan\n");
  CHECK_THROWS_AS(parse_panel_csv(nan_cell), ParseError);
}

TEST_CASE("panel csv round trip") {
  Panel panel = oracle::random_walk_panel(25, 3, 77);
  std::ostringstream out;
  write_panel_csv(out, panel);
  std::istringstream in(out.str());
  Panel back = parse_panel_csv(in);
  REQUIRE(back.T() == panel.T());
  REQUIRE(back.d() == panel.d());
  CHECK((back.values - panel.values).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(back.columns == panel.columns);
}

TEST_CASE("paths csv has one row per grid point and full headers") {
  DgpSpec spec;
  spec.T = 150;
  Panel panel = simulate_path(spec, 3);
  KernelConfig cfg;
  cfg.h = 0.35;
  LocalLinearFit fit = fit_paths(panel, 2, cfg);
  estimate_omega(fit, cfg);
  CiBands bands = pointwise_ci(fit, cfg, 0.95);
  std::ostringstream out;
  write_paths_csv(out, fit, bands);

  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("t,tau,pi_11,", 0) == 0);
  CHECK(header.find("gamma1_22_hi") != std::string::npos);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) rows += !line.empty();
  CHECK(rows == fit.grid.size());
}

TEST_CASE("panel json lists columns and values") {
  Panel panel = oracle::random_walk_panel(4, 2, 9);
  nlohmann::json j = panel_to_json(panel);
  CHECK(j["columns"].size() == 2);
  CHECK(j["values"].size() == 4);
  CHECK(j["values"][0].size() == 2);
}

TEST_CASE("pipeline report carries the versioned schema and echoes config") {
  DgpSpec spec;
  spec.T = 300;
  Panel panel = simulate_path(spec, 12);
  RunConfig cfg;
  cfg.seed = 99;
  RunResult res = run_pipeline(panel, cfg);
  const nlohmann::json& rep = res.report;
  CHECK(rep["schema"] == 1);
  CHECK(rep["seed"] == 99);
  CHECK(rep["data"]["T"] == 300);
  CHECK(rep["data"]["d"] == 2);
  CHECK(rep["bandwidth"]["cross_validated"] == true);
  CHECK(rep.contains("selection"));
  CHECK(rep.contains("residual_autocorrelation"));
  CHECK(rep["fit"]["p"].get<int>() >= 1);
  if (rep["fit"]["r"] == 1) {
    CHECK(rep.contains("cointegration"));
  }
}

TEST_CASE("pipeline honors fixed settings and runs the stability test") {
  DgpSpec spec;
  spec.kind = DgpKind::Stability;
  spec.T = 250;
  Panel panel = simulate_path(spec, 5);
  RunConfig cfg;
  cfg.p = 2;
  cfg.r = 1;
  cfg.h = 0.3;
  cfg.run_stability = true;
  cfg.bootstrap_B = 99;
  RunResult res = run_pipeline(panel, cfg);
  CHECK(res.report["bandwidth"]["h"] == 0.3);
  CHECK_FALSE(res.report.contains("selection"));
  REQUIRE(res.stability.has_value());
  CHECK(res.report["stability"]["B"] == 99);
  CHECK(res.report["stability"].contains("reject"));
}

TEST_CASE("stability on a full-rank request is a config error") {
  DgpSpec spec;
  spec.T = 200;
  Panel panel = simulate_path(spec, 6);
  RunConfig cfg;
  cfg.p = 2;
  cfg.r = 2;
  cfg.run_stability = true;
  CHECK_THROWS_AS(run_pipeline(panel, cfg), RankOutOfRange);
}

TEST_CASE("thread resolution prefers the explicit count then the environment") {
  CHECK(resolve_threads(3) == 3);
  setenv("TVVECM_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  setenv("TVVECM_THREADS", "junk", 1);
  CHECK(resolve_threads(0) == 1);
  unsetenv("TVVECM_THREADS");
  CHECK(resolve_threads(0) == 1);
}

TEST_CASE("error categories map to distinct exit codes") {
  CHECK(static_cast<int>(ErrorCode::Config) == 2);
  CHECK(static_cast<int>(ErrorCode::Data) == 3);
  CHECK(static_cast<int>(ErrorCode::Numerical) == 4);
  ParseError pe("x");
  CHECK(pe.code() == ErrorCode::Data);
  CHECK(pe.name() == "ParseError");
}
