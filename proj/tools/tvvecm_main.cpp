#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tvvecm/errors.hpp"
#include "tvvecm/io.hpp"
#include "tvvecm/montecarlo.hpp"
#include "tvvecm/pipeline.hpp"
#include "tvvecm/selection.hpp"

namespace {

using tvvecm::RunConfig;

void add_csv_options(CLI::App* cmd, tvvecm::CsvOptions& csv) {
  cmd->add_flag("--no-header", [&csv](std::int64_t) { csv.header = false; },
                "input has no header row");
  cmd->add_option("--delimiter", csv.delimiter, "field delimiter (default ,)");
  cmd->add_option("--skip-column", csv.skip_column,
                  "name (or index, without header) of a date/index column to drop");
  cmd->add_option("--order", csv.order,
                  "comma-separated column order; first columns are the "
                  "normalized block")
      ->delimiter(',');
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw tvvecm::ParseError("cannot open '" + out_path + "' for writing");
  f << j.dump(2) << '\n';
}

nlohmann::json report_json(const tvvecm::McReport& rep) {
  nlohmann::json j;
  j["schema"] = 1;
  j["experiment"] = rep.experiment;
  j["reps"] = rep.reps;
  j["seed"] = rep.seed;
  j["wall_seconds"] = rep.wall_seconds;
  j["cells"] = rep.cells;
  return j;
}

std::vector<tvvecm::DgpKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<tvvecm::DgpKind> kinds;
  for (const std::string& name : names) {
    if (name == "dgp1") {
      kinds.push_back(tvvecm::DgpKind::Dgp1);
    } else if (name == "dgp2") {
      kinds.push_back(tvvecm::DgpKind::Dgp2);
    } else if (name == "stability") {
      kinds.push_back(tvvecm::DgpKind::Stability);
    } else {
      throw tvvecm::InvalidPenalty("unknown design '" + name + "'");
    }
  }
  return kinds;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Time-varying vector error-correction model estimation"};
  app.require_subcommand(1);

  std::string input, output, paths_csv;
  RunConfig cfg;

  auto* fit = app.add_subcommand("fit", "estimate coefficient paths and rank");
  fit->add_option("input", input, "CSV of level series")->required();
  add_csv_options(fit, cfg.csv);
  fit->add_option("-o,--output", output, "JSON report path (default stdout)");
  fit->add_option("--paths", paths_csv, "write coefficient paths to this CSV");
  fit->add_option("-p,--lags", cfg.p, "lag count, 0 selects by information criterion");
  fit->add_option("--max-lag", cfg.max_lag, "largest candidate lag");
  fit->add_option("-r,--rank", cfg.r, "cointegration rank, -1 selects by ratio rule");
  fit->add_option("--bandwidth", cfg.h, "kernel bandwidth, 0 cross-validates");
  fit->add_option("--ci-level", cfg.ci_level, "pointwise confidence level");
  fit->add_flag("--stability", cfg.run_stability, "run the parameter-stability test");
  fit->add_option("-B,--bootstrap", cfg.bootstrap_B, "bootstrap replicates");
  fit->add_option("--level", cfg.stability_level, "stability test level");
  fit->add_option("--seed", cfg.seed, "bootstrap seed");
  fit->add_option("--threads", cfg.threads,
                  "worker threads, 0 reads TVVECM_THREADS");

  auto* sel_lag = app.add_subcommand("select-lag", "information-criterion lag choice");
  sel_lag->add_option("input", input)->required();
  add_csv_options(sel_lag, cfg.csv);
  sel_lag->add_option("-o,--output", output);
  sel_lag->add_option("--max-lag", cfg.max_lag);

  auto* sel_rank = app.add_subcommand("select-rank", "ratio-rule rank choice");
  sel_rank->add_option("input", input)->required();
  add_csv_options(sel_rank, cfg.csv);
  sel_rank->add_option("-o,--output", output);
  sel_rank->add_option("-p,--lags", cfg.p, "lag count, 0 selects first");
  sel_rank->add_option("--bandwidth", cfg.h, "bandwidth, 0 cross-validates");

  auto* stab = app.add_subcommand("stability", "bootstrap parameter-stability test");
  stab->add_option("input", input)->required();
  add_csv_options(stab, cfg.csv);
  stab->add_option("-o,--output", output);
  stab->add_option("-p,--lags", cfg.p);
  stab->add_option("--max-lag", cfg.max_lag);
  stab->add_option("-r,--rank", cfg.r);
  stab->add_option("--bandwidth", cfg.h);
  stab->add_option("-B,--bootstrap", cfg.bootstrap_B);
  stab->add_option("--level", cfg.stability_level);
  stab->add_option("--seed", cfg.seed);
  stab->add_option("--threads", cfg.threads);

  auto* sim = app.add_subcommand("simulate", "draw one path from a built-in design");
  std::string kind = "dgp1";
  Eigen::Index T = 400;
  double b = 0.0, h_for_dt = 0.0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--design", kind, "dgp1, dgp2, or stability");
  sim->add_option("-T,--length", T, "sample size");
  sim->add_option("-b", b, "stability design alternative scale");
  sim->add_option("--dt-bandwidth", h_for_dt, "bandwidth in d_T, 0 uses T^{-1/5}");
  sim->add_option("--seed", sim_seed);
  sim->add_option("-o,--output", output, "CSV path (default stdout)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo experiment tables");
  std::string experiment = "lag";
  tvvecm::McConfig mc_cfg;
  std::vector<std::string> mc_kinds = {"dgp1", "dgp2"};
  std::vector<Eigen::Index> sizes = {200, 400};
  std::vector<double> b_values = {0.0, 1.0};
  std::vector<double> alphas = {1.0};
  mc->add_option("--experiment", experiment, "lag, rank, rmse, or size-power");
  mc->add_option_function<int>(
      "--table",
      [&experiment](int t) {
        static const char* names[] = {"lag", "rank", "rmse", "size-power"};
        if (t < 1 || t > 4) throw CLI::ValidationError("--table must be 1..4");
        experiment = names[t - 1];
      },
      "numbered alias for --experiment (1 lag, 2 rank, 3 rmse, 4 size-power)");
  mc->add_option("--reps", mc_cfg.reps);
  mc->add_option("--seed", mc_cfg.seed);
  mc->add_option("--design", mc_kinds, "designs for lag/rank tables");
  mc->add_option("-T,--sizes", sizes, "sample sizes");
  mc->add_option("-b", b_values, "size-power alternative scales");
  mc->add_option("--bandwidth-alpha", alphas, "size-power h = a T^{-1/5} multipliers");
  mc->add_option("-B,--bootstrap", mc_cfg.bootstrap_B);
  mc->add_flag("--fixed-bandwidth", [&mc_cfg](std::int64_t) {
    mc_cfg.cv_bandwidth = false;
  }, "use h = a T^{-1/5} instead of cross-validation in the rmse table");
  mc->add_option("--threads", mc_cfg.threads);
  mc->add_option("-o,--output", output);

  CLI11_PARSE(app, argc, argv);
  cfg.paths_csv = paths_csv;

  if (fit->parsed()) {
    tvvecm::Panel panel = tvvecm::load_panel_csv(input, cfg.csv);
    emit(tvvecm::run_pipeline(panel, cfg).report, output);
  } else if (sel_lag->parsed()) {
    tvvecm::Panel panel = tvvecm::load_panel_csv(input, cfg.csv);
    tvvecm::LagSelection lag = tvvecm::select_lag(panel, cfg.max_lag);
    emit({{"schema", 1},
          {"p_hat", lag.p_hat},
          {"max_lag", lag.max_lag},
          {"ic", lag.ic},
          {"rss", lag.rss},
          {"penalty", lag.chi},
          {"h_per_candidate", lag.h_per_candidate}},
         output);
  } else if (sel_rank->parsed()) {
    tvvecm::Panel panel = tvvecm::load_panel_csv(input, cfg.csv);
    int p = cfg.p > 0 ? cfg.p : tvvecm::select_lag(panel, cfg.max_lag).p_hat;
    tvvecm::KernelConfig kcfg;
    kcfg.h = cfg.h > 0.0
                 ? cfg.h
                 : tvvecm::cv_bandwidth(panel, p,
                                        tvvecm::default_bandwidth_grid(panel.T()));
    tvvecm::RankSelection rank = tvvecm::select_rank(panel, p, kcfg);
    emit({{"schema", 1},
          {"p", p},
          {"h", kcfg.h},
          {"r_hat", rank.r_hat},
          {"mu", std::vector<double>(rank.mu.begin(), rank.mu.end())},
          {"mu0", rank.mu0},
          {"threshold", rank.w_threshold},
          {"ratios", std::vector<double>(rank.ratios.begin(), rank.ratios.end())}},
         output);
  } else if (stab->parsed()) {
    cfg.run_stability = true;
    tvvecm::Panel panel = tvvecm::load_panel_csv(input, cfg.csv);
    nlohmann::json rep = tvvecm::run_pipeline(panel, cfg).report;
    emit({{"schema", 1},
          {"stability", rep["stability"]},
          {"fit", rep["fit"]},
          {"bandwidth", rep["bandwidth"]}},
         output);
  } else if (sim->parsed()) {
    tvvecm::DgpSpec spec;
    spec.kind = parse_kinds({kind}).front();
    spec.T = T;
    spec.b = b;
    spec.h_for_dt = h_for_dt;
    tvvecm::Panel panel = tvvecm::simulate_path(spec, sim_seed);
    if (output.empty() || output == "-") {
      tvvecm::write_panel_csv(std::cout, panel);
    } else {
      std::ofstream f(output);
      if (!f) throw tvvecm::ParseError("cannot open '" + output + "'");
      tvvecm::write_panel_csv(f, panel);
    }
  } else if (mc->parsed()) {
    mc_cfg.threads = tvvecm::resolve_threads(mc_cfg.threads);
    tvvecm::McReport rep;
    if (experiment == "lag") {
      rep = tvvecm::run_lag_table(mc_cfg, parse_kinds(mc_kinds), sizes);
    } else if (experiment == "rank") {
      rep = tvvecm::run_rank_table(mc_cfg, parse_kinds(mc_kinds), sizes);
    } else if (experiment == "rmse") {
      rep = tvvecm::run_rmse_coverage(mc_cfg, sizes);
    } else if (experiment == "size-power") {
      rep = tvvecm::run_size_power(mc_cfg, b_values, alphas, sizes);
    } else {
      throw tvvecm::InvalidPenalty("unknown experiment '" + experiment + "'");
    }
    emit(report_json(rep), output);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const tvvecm::Error& e) {
    std::cerr << nlohmann::json{{"error",
                                 {{"code", static_cast<int>(e.code())},
                                  {"name", e.name()},
                                  {"message", e.what()}}}}
                     .dump()
              << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"code", 1}, {"message", e.what()}}}}
                     .dump()
              << '\n';
    return 1;
  }
}
