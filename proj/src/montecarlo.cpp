#include "tvvecm/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "tvvecm/cointegration.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/local_linear.hpp"
#include "tvvecm/rng.hpp"
#include "tvvecm/selection.hpp"
#include "tvvecm/stability.hpp"

namespace tvvecm {

Eigen::Matrix2d dgp_gamma1(double tau) {
  Eigen::Matrix2d g;
  g << 0.5 * std::exp(tau - 0.5), -0.2 * std::exp(tau - 1.0),
      -0.2 * std::cos(M_PI * tau), 0.6 * std::exp(-tau - 0.5);
  return g;
}

Eigen::Matrix2d dgp_omega(double tau) {
  Eigen::Matrix2d w;
  w << 0.8 * std::exp(-0.5 * tau) + 0.5, 0.0,
      0.1 * std::exp(0.5 - tau), 0.5 * (tau - 0.5) * (tau - 0.5) + 1.0;
  return w;
}

Eigen::Vector2d dgp1_alpha(double tau) {
  return {0.2 * std::sin(tau) - 0.5, 0.2 * std::cos(tau) + 0.4};
}

Eigen::Vector2d dgp_beta() { return {1.0, -0.8}; }

Eigen::Vector2d stability_alpha(double tau, double b, double d_t) {
  Eigen::Vector2d base{-0.4, 0.4};
  return base + b * d_t * Eigen::Vector2d{std::sin(tau), std::cos(M_PI * tau)};
}

Panel simulate_path(const DgpSpec& spec, std::uint64_t seed) {
  RngStream rng(seed);
  const Eigen::Index T = spec.T;
  double h_dt = spec.h_for_dt > 0.0
                    ? spec.h_for_dt
                    : std::pow(static_cast<double>(T), -0.2);
  const double d_t = 1.0 / (std::sqrt(static_cast<double>(T)) * std::pow(h_dt, 0.25));

  auto alpha_at = [&](double tau) -> Eigen::Vector2d {
    switch (spec.kind) {
      case DgpKind::Dgp1:
        return dgp1_alpha(tau);
      case DgpKind::Dgp2:
        return Eigen::Vector2d::Zero();
      case DgpKind::Stability:
        return stability_alpha(tau, spec.b, d_t);
    }
    return Eigen::Vector2d::Zero();
  };
  const Eigen::Vector2d beta =
      spec.kind == DgpKind::Dgp2 ? Eigen::Vector2d::Zero() : dgp_beta();

  Eigen::Vector2d y = Eigen::Vector2d::Zero();
  Eigen::Vector2d dy_prev = Eigen::Vector2d::Zero();
  Panel panel;
  panel.values.resize(T, 2);
  panel.columns = {"y1", "y2"};

  auto step = [&](double tau) {
    Eigen::Vector2d eps{rng.next_gaussian(), rng.next_gaussian()};
    Eigen::Vector2d u = spec.omega_identity ? eps : (dgp_omega(tau) * eps).eval();
    Eigen::Vector2d dy = u;
    if (!spec.gamma_zero) dy += dgp_gamma1(tau) * dy_prev;
    if (spec.kind != DgpKind::Dgp2) dy += alpha_at(tau) * (beta.dot(y));
    y += dy;
    dy_prev = dy;
  };

  // Pre-sample with parameters frozen at tau = 0.
  for (int i = 0; i < spec.burn_in; ++i) step(0.0);
  for (Eigen::Index t = 1; t <= T; ++t) {
    step(static_cast<double>(t) / static_cast<double>(T));
    panel.values.row(t - 1) = y.transpose();
  }
  return panel;
}

namespace {

std::uint64_t rep_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep,
                       std::uint64_t lane) {
  return RngStream(master, cell, rep * 4 + lane).next_u64();
}

const char* kind_name(DgpKind k) {
  switch (k) {
    case DgpKind::Dgp1: return "dgp1";
    case DgpKind::Dgp2: return "dgp2";
    case DgpKind::Stability: return "stability";
  }
  return "?";
}

// Runs f(rep) for rep = 0..reps-1, striped across threads; each invocation
// writes only to its own slot so the reduction is order-independent.
void parallel_reps(int reps, int threads, const std::function<void(int)>& f) {
  if (threads <= 1) {
    for (int i = 0; i < reps; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < reps; i += threads) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

McReport run_lag_table(const McConfig& cfg, const std::vector<DgpKind>& kinds,
                       const std::vector<Eigen::Index>& sizes, int max_lag) {
  Timer timer;
  McReport report;
  report.experiment = "lag_table";
  report.reps = cfg.reps;
  report.seed = cfg.seed;

  std::uint64_t cell = 0;
  for (DgpKind kind : kinds) {
    for (Eigen::Index T : sizes) {
      std::vector<int> p_hat(cfg.reps);
      parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
        DgpSpec spec;
        spec.kind = kind;
        spec.T = T;
        Panel panel = simulate_path(spec, rep_seed(cfg.seed, cell, rep, 0));
        p_hat[rep] = select_lag(panel, max_lag).p_hat;
      });
      int lt = 0, eq = 0, gt = 0;
      for (int p : p_hat) (p < 2 ? lt : p == 2 ? eq : gt)++;
      const std::string prefix =
          std::string(kind_name(kind)) + "/T=" + std::to_string(T) + "/";
      report.cells[prefix + "frac_p_lt_2"] = static_cast<double>(lt) / cfg.reps;
      report.cells[prefix + "frac_p_eq_2"] = static_cast<double>(eq) / cfg.reps;
      report.cells[prefix + "frac_p_gt_2"] = static_cast<double>(gt) / cfg.reps;
      ++cell;
    }
  }
  report.wall_seconds = timer.seconds();
  return report;
}

McReport run_rank_table(const McConfig& cfg, const std::vector<DgpKind>& kinds,
                        const std::vector<Eigen::Index>& sizes, int max_lag) {
  Timer timer;
  McReport report;
  report.experiment = "rank_table";
  report.reps = cfg.reps;
  report.seed = cfg.seed;

  std::uint64_t cell = 100;
  for (DgpKind kind : kinds) {
    for (Eigen::Index T : sizes) {
      std::vector<int> r_hat(cfg.reps);
      parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
        DgpSpec spec;
        spec.kind = kind;
        spec.T = T;
        Panel panel = simulate_path(spec, rep_seed(cfg.seed, cell, rep, 0));
        LagSelection lag = select_lag(panel, max_lag);
        KernelConfig kcfg;
        kcfg.h = lag.h_per_candidate[lag.p_hat - 1];
        r_hat[rep] = select_rank(panel, lag.p_hat, kcfg).r_hat;
      });
      const std::string prefix =
          std::string(kind_name(kind)) + "/T=" + std::to_string(T) + "/";
      for (int r = 0; r <= 1; ++r) {
        int count = 0;
        for (int rh : r_hat) count += rh == r;
        report.cells[prefix + "frac_r_" + std::to_string(r)] =
            static_cast<double>(count) / cfg.reps;
      }
      ++cell;
    }
  }
  report.wall_seconds = timer.seconds();
  return report;
}

McReport run_rmse_coverage(const McConfig& cfg,
                           const std::vector<Eigen::Index>& sizes) {
  Timer timer;
  McReport report;
  report.experiment = "rmse_coverage";
  report.reps = cfg.reps;
  report.seed = cfg.seed;

  std::uint64_t cell = 200;
  for (Eigen::Index T : sizes) {
    struct RepStats {
      double sq_alpha = 0.0, sq_gamma = 0.0, sq_beta = 0.0;
      double cov_alpha = 0.0, cov_gamma = 0.0, cov_beta = 0.0;
      Eigen::Index grid_n = 0;
      bool ok = false;
    };
    std::vector<RepStats> stats(cfg.reps);

    parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
      DgpSpec spec;
      spec.kind = DgpKind::Dgp1;
      spec.T = T;
      Panel panel = simulate_path(spec, rep_seed(cfg.seed, cell, rep, 0));
      KernelConfig kcfg;
      kcfg.h = cfg.cv_bandwidth
                   ? cv_bandwidth(panel, 2, default_bandwidth_grid(T))
                   : cfg.bandwidth_alpha * std::pow(static_cast<double>(T), -0.2);
      LocalLinearFit fit = fit_paths(panel, 2, kcfg);
      estimate_omega(fit, kcfg);
      CiBands bands = pointwise_ci(fit, kcfg, 0.95);
      CointegrationFit coin;
      try {
        coin = wls_beta_star(panel, fit, 1, kcfg);
      } catch (const Error&) {
        return;  // leave rep marked not-ok
      }

      RepStats& s = stats[rep];
      const Eigen::Index n = fit.grid.size();
      s.grid_n = n;
      int alpha_cov = 0, gamma_cov = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double tau = fit.grid[k];
        Eigen::Vector2d alpha_true = dgp1_alpha(tau);
        Eigen::Matrix2d gamma_true = dgp_gamma1(tau);
        s.sq_alpha += (fit.Pi[k].col(0) - alpha_true).squaredNorm();
        s.sq_gamma += (fit.Gamma[k] - gamma_true).squaredNorm();
        for (int i = 0; i < 2; ++i) {
          alpha_cov += bands.lo[k](i, 0) <= alpha_true[i] &&
                       alpha_true[i] <= bands.hi[k](i, 0);
          for (int j = 0; j < 2; ++j) {
            gamma_cov += bands.lo[k](i, 2 + j) <= gamma_true(i, j) &&
                         gamma_true(i, j) <= bands.hi[k](i, 2 + j);
          }
        }
      }
      s.cov_alpha = static_cast<double>(alpha_cov) / (2.0 * n);
      s.cov_gamma = static_cast<double>(gamma_cov) / (4.0 * n);
      const double beta_true = -0.8;
      s.sq_beta = (coin.beta_star(0, 0) - beta_true) * (coin.beta_star(0, 0) - beta_true);
      s.cov_beta =
          coin.ci_lo(0, 0) <= beta_true && beta_true <= coin.ci_hi(0, 0) ? 1.0 : 0.0;
      s.ok = true;
    });

    double sq_alpha = 0, sq_gamma = 0, sq_beta = 0;
    double cov_alpha = 0, cov_gamma = 0, cov_beta = 0;
    Eigen::Index total_grid = 0;
    int ok = 0;
    for (const RepStats& s : stats) {
      if (!s.ok) continue;
      ++ok;
      sq_alpha += s.sq_alpha;
      sq_gamma += s.sq_gamma;
      sq_beta += s.sq_beta;
      cov_alpha += s.cov_alpha;
      cov_gamma += s.cov_gamma;
      cov_beta += s.cov_beta;
      total_grid += s.grid_n;
    }
    if (ok == 0) throw SingularInformation("run_rmse_coverage: all reps failed");
    const std::string prefix = "dgp1/T=" + std::to_string(T) + "/";
    report.cells[prefix + "rmse_alpha"] = std::sqrt(sq_alpha / total_grid);
    report.cells[prefix + "rmse_gamma1"] = std::sqrt(sq_gamma / total_grid);
    report.cells[prefix + "rmse_beta"] = std::sqrt(sq_beta / ok);
    report.cells[prefix + "cov_alpha"] = cov_alpha / ok;
    report.cells[prefix + "cov_gamma1"] = cov_gamma / ok;
    report.cells[prefix + "cov_beta"] = cov_beta / ok;
    report.cells[prefix + "ok_reps"] = ok;
    ++cell;
  }
  report.wall_seconds = timer.seconds();
  return report;
}

McReport run_size_power(const McConfig& cfg, const std::vector<double>& b_values,
                        const std::vector<double>& bandwidth_alphas,
                        const std::vector<Eigen::Index>& sizes,
                        const std::vector<double>& levels) {
  Timer timer;
  McReport report;
  report.experiment = "size_power";
  report.reps = cfg.reps;
  report.seed = cfg.seed;

  std::uint64_t cell = 300;
  for (double b : b_values) {
    for (double alpha1 : bandwidth_alphas) {
      for (Eigen::Index T : sizes) {
        const double h = alpha1 * std::pow(static_cast<double>(T), -0.2);
        std::vector<std::vector<int>> rejected(levels.size(),
                                               std::vector<int>(cfg.reps, 0));
        parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
          DgpSpec spec;
          spec.kind = DgpKind::Stability;
          spec.T = T;
          spec.b = b;
          spec.h_for_dt = h;
          Panel panel = simulate_path(spec, rep_seed(cfg.seed, cell, rep, 0));

          KernelConfig kcfg;
          kcfg.h = h;
          LocalLinearFit fit = fit_paths(panel, 2, kcfg);
          estimate_omega(fit, kcfg);
          CointegrationFit coin = wls_beta_star(panel, fit, 1, kcfg);
          Restriction restriction = alpha_block_restriction(2, 1, 2);

          std::vector<Eigen::VectorXd> bp = b_path(fit, 1);
          std::vector<Eigen::MatrixXd> hp =
              h_weight_path(fit, coin.beta_full(), restriction, kcfg);
          double q_hat = q_statistic(bp, restriction, hp).q_hat;

          BootstrapResult boot = bootstrap_stability(
              2, 1, 2, T, restriction, kcfg, cfg.bootstrap_B,
              rep_seed(cfg.seed, cell, rep, 1), levels.front(), 1);
          std::vector<double> sorted = boot.stats;
          std::sort(sorted.begin(), sorted.end());
          for (std::size_t li = 0; li < levels.size(); ++li) {
            Eigen::Index idx = static_cast<Eigen::Index>(
                std::ceil((1.0 - levels[li]) * (cfg.bootstrap_B + 1)));
            idx = std::clamp<Eigen::Index>(idx, 1, cfg.bootstrap_B);
            rejected[li][rep] = q_hat > sorted[idx - 1];
          }
        });
        const std::string prefix = "b=" + std::to_string(b).substr(0, 3) +
                                   "/a=" + std::to_string(alpha1).substr(0, 3) +
                                   "/T=" + std::to_string(T) + "/";
        for (std::size_t li = 0; li < levels.size(); ++li) {
          int count = 0;
          for (int r : rejected[li]) count += r;
          report.cells[prefix + "rej_" +
                       std::to_string(static_cast<int>(levels[li] * 100))] =
              static_cast<double>(count) / cfg.reps;
        }
        ++cell;
      }
    }
  }
  report.wall_seconds = timer.seconds();
  return report;
}

}  // namespace tvvecm
