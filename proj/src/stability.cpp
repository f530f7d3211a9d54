#include "tvvecm/stability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <thread>

#include "tvvecm/errors.hpp"
#include "tvvecm/linalg.hpp"
#include "tvvecm/rng.hpp"
#include "tvvecm/simd.hpp"

namespace tvvecm {

Restriction alpha_block_restriction(int d, int r, int p) {
  const Eigen::Index nb = static_cast<Eigen::Index>(d) * r +
                          static_cast<Eigen::Index>(d) * d * (p - 1);
  Restriction res;
  res.C = Eigen::MatrixXd::Zero(d * r, nb);
  res.C.leftCols(d * r) = Eigen::MatrixXd::Identity(d * r, d * r);
  res.fixed_c = false;
  return res;
}

std::vector<Eigen::VectorXd> b_path(const LocalLinearFit& fit, int r) {
  const Eigen::Index d = fit.d();
  std::vector<Eigen::VectorXd> path;
  path.reserve(fit.Pi.size());
  for (std::size_t k = 0; k < fit.Pi.size(); ++k) {
    const Eigen::Index gcols = fit.Gamma[k].cols();
    Eigen::VectorXd b(d * r + d * gcols);
    for (Eigen::Index j = 0; j < r; ++j) {
      b.segment(j * d, d) = fit.Pi[k].col(j);
    }
    for (Eigen::Index j = 0; j < gcols; ++j) {
      b.segment(d * r + j * d, d) = fit.Gamma[k].col(j);
    }
    path.push_back(std::move(b));
  }
  return path;
}

namespace {

// H path from a regressor matrix w (rows w_t), an Omega path and C.
std::vector<Eigen::MatrixXd> h_path_from_regressors(
    const Eigen::MatrixXd& w, const Eigen::VectorXd& taus,
    const std::vector<Eigen::MatrixXd>& omega, const Restriction& restriction,
    const KernelConfig& cfg) {
  const Eigen::Index n = w.rows();
  const Eigen::Index m = w.cols();
  std::vector<Eigen::MatrixXd> out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd u = (taus.array() - taus[k]) / cfg.h;
    Eigen::VectorXd kv(n);
    simd::epanechnikov_batch(u.data(), kv.data(), static_cast<std::size_t>(n));
    double mass = kv.sum();
    if (!(mass > 0.0)) {
      throw DegenerateWindow("h_weight: empty kernel window");
    }
    Eigen::MatrixXd sigma_w = (w.transpose() * kv.asDiagonal() * w) / mass;
    Eigen::MatrixXd sigma_w_inv = floored_sym_inverse(sigma_w);
    const Eigen::MatrixXd& om = omega[k];
    const Eigen::Index d = om.rows();

    // V_b = Sigma_w^{-1} (x) Omega, then slice through C.
    Eigen::MatrixXd vb(m * d, m * d);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        vb.block(i * d, j * d, d, d) = sigma_w_inv(i, j) * om;
      }
    }
    Eigen::MatrixXd cvc = restriction.C * vb * restriction.C.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (cvc + cvc.transpose()));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw SingularWeight("h_weight: C V_b C^T numerically singular");
    }
    out[k] = ldlt.solve(Eigen::MatrixXd::Identity(cvc.rows(), cvc.rows()));
  }
  return out;
}

}  // namespace

std::vector<Eigen::MatrixXd> h_weight_path(const LocalLinearFit& fit,
                                           const Eigen::MatrixXd& beta_full,
                                           const Restriction& restriction,
                                           const KernelConfig& cfg) {
  if (!fit.has_omega()) {
    throw SingularMoments("h_weight_path: Omega path not computed");
  }
  const Eigen::Index d = fit.d();
  const Eigen::Index r = beta_full.cols();
  const Eigen::Index q = fit.frame.hreg.cols() - d;
  Eigen::MatrixXd w(fit.frame.n(), r + q);
  w.leftCols(r) = fit.frame.hreg.leftCols(d) * beta_full;
  if (q > 0) w.rightCols(q) = fit.frame.lagged_diffs();
  return h_path_from_regressors(w, fit.frame.taus, fit.Omega, restriction, cfg);
}

QStat q_statistic(const std::vector<Eigen::VectorXd>& b,
                  const Restriction& restriction,
                  const std::vector<Eigen::MatrixXd>& h_path) {
  const Eigen::Index n = static_cast<Eigen::Index>(b.size());
  QStat out;
  if (restriction.fixed_c) {
    out.c_used = restriction.c;
  } else {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(restriction.s());
    for (const auto& bk : b) mean += restriction.C * bk;
    out.c_used = mean / static_cast<double>(n);
  }
  double q = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd dev = restriction.C * b[k] - out.c_used;
    q += dev.dot(h_path[k] * dev);
  }
  out.q_hat = q / static_cast<double>(n);
  return out;
}

double normalized_q(double q_hat, int s, Eigen::Index T, double h,
                    const KernelConstants& constants) {
  const double th = static_cast<double>(T) * h;
  return static_cast<double>(T) * std::sqrt(h) *
         (q_hat - s * constants.v0 / th) / std::sqrt(4.0 * s * constants.cb);
}

namespace {

double bootstrap_replicate(int d, int r, int p, Eigen::Index T,
                           const Restriction& restriction, const KernelConfig& cfg,
                           RngStream rng) {
  const Eigen::Index q = static_cast<Eigen::Index>(d) * (p - 1);
  Eigen::MatrixXd dy(T, d);
  Eigen::MatrixXd z(T, std::max(r, 1));
  for (Eigen::Index t = 0; t < T; ++t) {
    for (int j = 0; j < d; ++j) dy(t, j) = rng.next_gaussian();
    for (int j = 0; j < r; ++j) z(t, j) = rng.next_gaussian();
  }

  // Rows t = p+1..T (1-based), matching the real-data effective sample.
  const Eigen::Index n = T - p;
  Eigen::MatrixXd y(n, d);
  Eigen::MatrixXd x(n, r + q);
  Eigen::VectorXd taus(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index t = p + 1 + k;  // 1-based
    taus[k] = static_cast<double>(t) / static_cast<double>(T);
    y.row(k) = dy.row(t - 1);
    if (r > 0) x.row(k).head(r) = z.row(t - 1).head(r);
    for (int j = 1; j < p; ++j) {
      x.row(k).segment(r + (j - 1) * d, d) = dy.row(t - 1 - j);
    }
  }

  // Local-linear fit at each grid point, residuals at own tau.
  std::vector<Eigen::VectorXd> b(n);
  Eigen::MatrixXd resid(n, d);
  for (Eigen::Index k = 0; k < n; ++k) {
    LocalFitResult local = local_linear_regress(y, x, taus, taus[k], cfg);
    Eigen::VectorXd bk(d * (r + q));
    for (Eigen::Index j = 0; j < r + q; ++j) {
      bk.segment(j * d, d) = local.level.col(j);
    }
    b[k] = std::move(bk);
    resid.row(k) = y.row(k) - x.row(k) * local.level.transpose();
  }

  std::vector<Eigen::MatrixXd> omega(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd w = local_linear_weights_at(taus, taus[k], cfg);
    omega[k] = floor_psd((resid.transpose() * w.asDiagonal() * resid) /
                         static_cast<double>(n));
  }
  std::vector<Eigen::MatrixXd> h_path =
      h_path_from_regressors(x, taus, omega, restriction, cfg);

  Restriction boot_restriction = restriction;
  if (restriction.fixed_c) {
    boot_restriction.c = Eigen::VectorXd::Zero(restriction.s());
  }
  return q_statistic(b, boot_restriction, h_path).q_hat;
}

}  // namespace

BootstrapResult bootstrap_stability(int d, int r, int p, Eigen::Index T,
                                    const Restriction& restriction,
                                    const KernelConfig& cfg, int B,
                                    std::uint64_t seed, double alpha_level,
                                    int threads) {
  if (B < 99) throw InvalidPenalty("bootstrap_stability: need B >= 99");
  BootstrapResult out;
  out.stats.resize(B);

  auto worker = [&](int begin, int step) {
    for (int b = begin; b < B; b += step) {
      out.stats[b] = bootstrap_replicate(d, r, p, T, restriction, cfg,
                                         RngStream(seed, static_cast<std::uint64_t>(b) + 1));
    }
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker, i, threads);
    for (auto& th : pool) th.join();
  }

  std::vector<double> sorted = out.stats;
  std::sort(sorted.begin(), sorted.end());
  Eigen::Index idx = static_cast<Eigen::Index>(
      std::ceil((1.0 - alpha_level) * (B + 1)));
  idx = std::clamp<Eigen::Index>(idx, 1, B);
  out.crit = sorted[idx - 1];
  return out;
}

StabilityReport stability_test(const LocalLinearFit& fit,
                               const Eigen::MatrixXd& beta_full, int r,
                               const Restriction& restriction,
                               const KernelConfig& cfg, int B, std::uint64_t seed,
                               double alpha_level, int threads) {
  std::vector<Eigen::VectorXd> b = b_path(fit, r);
  std::vector<Eigen::MatrixXd> h_path =
      h_weight_path(fit, beta_full, restriction, cfg);
  QStat stat = q_statistic(b, restriction, h_path);

  StabilityReport report;
  report.q_hat = stat.q_hat;
  report.c_used = stat.c_used;
  report.q_star = normalized_q(stat.q_hat, static_cast<int>(restriction.s()),
                               fit.T, cfg.h, kernel_constants(cfg));
  report.B = B;
  report.alpha_level = alpha_level;
  report.seed = seed;

  BootstrapResult boot = bootstrap_stability(
      static_cast<int>(fit.d()), r, fit.p, fit.T, restriction, cfg, B, seed,
      alpha_level, threads);
  report.boot_stats = std::move(boot.stats);
  report.crit = boot.crit;
  report.reject = report.q_hat > report.crit;
  return report;
}

Eigen::MatrixXd standardized_residuals(const LocalLinearFit& fit) {
  if (!fit.has_omega()) {
    throw SingularMoments("standardized_residuals: Omega path not computed");
  }
  Eigen::MatrixXd eps(fit.residuals.rows(), fit.residuals.cols());
  for (Eigen::Index k = 0; k < fit.residuals.rows(); ++k) {
    eps.row(k) =
        (floored_sym_inv_sqrt(fit.Omega[k]) * fit.residuals.row(k).transpose())
            .transpose();
  }
  return eps;
}

BgTestResult bg_lm_test(const Eigen::MatrixXd& std_residuals) {
  const Eigen::Index n = std_residuals.rows();
  const Eigen::Index d = std_residuals.cols();
  if (n < d + 2) throw SingularMoments("bg_lm_test: too few residual rows");

  const Eigen::Index m = n - 1;
  Eigen::MatrixXd cur = std_residuals.bottomRows(m);
  Eigen::MatrixXd lag = std_residuals.topRows(m);
  const double scale = 1.0 / static_cast<double>(m);
  Eigen::MatrixXd s00 = scale * cur.transpose() * cur;
  Eigen::MatrixXd s11 = scale * lag.transpose() * lag;
  Eigen::MatrixXd s01 = scale * cur.transpose() * lag;

  Eigen::LLT<Eigen::MatrixXd> llt00(s00), llt11(s11);
  if (llt00.info() != Eigen::Success || llt11.info() != Eigen::Success) {
    throw SingularMoments("bg_lm_test: residual moment matrix singular");
  }
  Eigen::MatrixXd tmp = llt11.solve(s01.transpose());  // S11^{-1} S10
  Eigen::MatrixXd prod = s01 * tmp;                    // S01 S11^{-1} S10
  double stat = static_cast<double>(n) * llt00.solve(prod).trace();

  BgTestResult out;
  out.stat = stat;
  out.df = static_cast<int>(d * d);
  boost::math::chi_squared_distribution<double> dist(out.df);
  out.p_value = stat > 0.0 ? boost::math::cdf(boost::math::complement(dist, stat)) : 1.0;
  return out;
}

}  // namespace tvvecm
