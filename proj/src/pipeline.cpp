#include "tvvecm/pipeline.hpp"

#include <cstdlib>
#include <fstream>

#include "tvvecm/errors.hpp"

namespace tvvecm {

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TVVECM_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return 1;
}

RunResult run_pipeline(const Panel& panel, const RunConfig& cfg) {
  RunResult out;
  const int threads = resolve_threads(cfg.threads);
  const Eigen::Index d = panel.d();

  nlohmann::json& rep = out.report;
  rep["schema"] = 1;
  rep["seed"] = cfg.seed;
  rep["config"] = {{"p", cfg.p},
                   {"max_lag", cfg.max_lag},
                   {"r", cfg.r},
                   {"h", cfg.h},
                   {"ci_level", cfg.ci_level},
                   {"bootstrap_B", cfg.bootstrap_B},
                   {"stability_level", cfg.stability_level},
                   {"threads", threads}};
  rep["data"] = {{"T", panel.T()}, {"d", d}, {"columns", panel.columns}};

  int p = cfg.p;
  KernelConfig kcfg;
  if (p <= 0) {
    out.lag = select_lag(panel, cfg.max_lag);
    p = out.lag.p_hat;
    kcfg.h = cfg.h > 0.0 ? cfg.h : out.lag.h_per_candidate[p - 1];
    rep["selection"]["lag"] = {{"p_hat", out.lag.p_hat},
                               {"max_lag", out.lag.max_lag},
                               {"ic", out.lag.ic},
                               {"rss", out.lag.rss},
                               {"penalty", out.lag.chi},
                               {"h_per_candidate", out.lag.h_per_candidate}};
  } else {
    kcfg.h = cfg.h > 0.0 ? cfg.h
                         : cv_bandwidth(panel, p, default_bandwidth_grid(panel.T()));
  }
  rep["bandwidth"] = {{"h", kcfg.h}, {"cross_validated", cfg.h <= 0.0}};

  out.fit = fit_paths(panel, p, kcfg);
  estimate_omega(out.fit, kcfg);
  out.bands = pointwise_ci(out.fit, kcfg, cfg.ci_level);

  int r = cfg.r;
  if (r < 0) {
    out.rank = rank_decision(out.fit.ybar_pi, panel.T(), kcfg.h);
    r = out.rank.r_hat;
    rep["selection"]["rank"] = {{"r_hat", out.rank.r_hat},
                                {"mu", vector_json(out.rank.mu)},
                                {"mu0", out.rank.mu0},
                                {"threshold", out.rank.w_threshold},
                                {"ratios", vector_json(out.rank.ratios)}};
  }
  if (r > d) throw RankOutOfRange("r = " + std::to_string(r) + " exceeds d");

  rep["fit"] = {{"p", p},
                {"r", r},
                {"n", out.fit.grid.size()},
                {"pi_mean", matrix_json(out.fit.ybar_pi)},
                {"omega_mid",
                 matrix_json(out.fit.Omega[out.fit.grid_index(0.5)])}};

  Eigen::MatrixXd std_resid = standardized_residuals(out.fit);
  BgTestResult bg = bg_lm_test(std_resid);
  rep["residual_autocorrelation"] = {{"stat", bg.stat},
                                     {"df", bg.df},
                                     {"p_value", bg.p_value}};

  if (r >= 1 && r <= d - 1) {
    out.coin.emplace(wls_beta_star(panel, out.fit, r, kcfg, cfg.ci_level));
    rep["cointegration"] = {{"r", r},
                            {"beta_star", matrix_json(out.coin->beta_star)},
                            {"ci_lo", matrix_json(out.coin->ci_lo)},
                            {"ci_hi", matrix_json(out.coin->ci_hi)},
                            {"beta", matrix_json(out.coin->beta_full())}};
    if (cfg.run_stability) {
      Restriction restriction =
          alpha_block_restriction(static_cast<int>(d), r, p);
      out.stability.emplace(stability_test(out.fit, out.coin->beta_full(), r,
                                           restriction, kcfg, cfg.bootstrap_B,
                                           cfg.seed, cfg.stability_level,
                                           threads));
      rep["stability"] = {{"q_hat", out.stability->q_hat},
                          {"q_star", out.stability->q_star},
                          {"B", out.stability->B},
                          {"crit", out.stability->crit},
                          {"level", out.stability->alpha_level},
                          {"reject", out.stability->reject},
                          {"seed", out.stability->seed}};
    }
  } else if (cfg.run_stability) {
    throw RankOutOfRange(
        "stability test needs a cointegration rank between 1 and d - 1, got " +
        std::to_string(r));
  }

  if (!cfg.paths_csv.empty()) {
    std::ofstream pf(cfg.paths_csv);
    if (!pf) throw ParseError("cannot open '" + cfg.paths_csv + "' for writing");
    write_paths_csv(pf, out.fit, out.bands);
    rep["paths_csv"] = cfg.paths_csv;
  }
  return out;
}

}  // namespace tvvecm
