#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "tvvecm/kernel.hpp"
#include "tvvecm/local_linear.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

// Linear restriction C b(.) = c on b(tau) = vec(alpha(tau), Gamma(tau)).
struct Restriction {
  Eigen::MatrixXd C;       // s x (d*r + d^2(p-1)), full row rank
  bool fixed_c = false;    // false: c estimated as the grid average of C b
  Eigen::VectorXd c;       // used when fixed_c

  Eigen::Index s() const { return C.rows(); }
};

// C selecting the whole alpha block (tests constancy of alpha(.)).
Restriction alpha_block_restriction(int d, int r, int p);

// b(tau_t) = vec([alpha(tau_t), Gamma(tau_t)]), column-major.
std::vector<Eigen::VectorXd> b_path(const LocalLinearFit& fit, int r);

// H(tau_t) = (C (Sigma_w^{-1}(tau) (x) Omega(tau)) C^T)^{-1} with Sigma_w the
// Nadaraya-Watson covariance of the plug-in regressor w_{t-1} = [y^T beta, dx^T].
std::vector<Eigen::MatrixXd> h_weight_path(const LocalLinearFit& fit,
                                           const Eigen::MatrixXd& beta_full,
                                           const Restriction& restriction,
                                           const KernelConfig& cfg);

struct QStat {
  double q_hat = 0.0;
  Eigen::VectorXd c_used;
};

QStat q_statistic(const std::vector<Eigen::VectorXd>& b,
                  const Restriction& restriction,
                  const std::vector<Eigen::MatrixXd>& h_path);

// Q* = T sqrt(h) (Q - s v0/(Th)) / sqrt(4 s CB).
double normalized_q(double q_hat, int s, Eigen::Index T, double h,
                    const KernelConstants& constants);

struct BootstrapResult {
  std::vector<double> stats;  // B statistics in replicate order
  double crit = 0.0;          // empirical (1 - alpha) quantile
};

// Simulation-assisted bootstrap: each replicate regresses i.i.d. normal
// responses on i.i.d. normal pseudo-regressors with the data bandwidth and
// recomputes the statistic. Replicates own counter-derived RNG streams keyed
// by (seed, replicate), so results are independent of scheduling.
BootstrapResult bootstrap_stability(int d, int r, int p, Eigen::Index T,
                                    const Restriction& restriction,
                                    const KernelConfig& cfg, int B,
                                    std::uint64_t seed, double alpha_level,
                                    int threads = 1);

struct StabilityReport {
  double q_hat = 0.0;
  double q_star = 0.0;
  Eigen::VectorXd c_used;
  int B = 0;
  std::vector<double> boot_stats;
  double crit = 0.0;
  double alpha_level = 0.05;
  bool reject = false;
  std::uint64_t seed = 0;
};

// Full test: statistic on the fitted model plus bootstrap critical value.
StabilityReport stability_test(const LocalLinearFit& fit,
                               const Eigen::MatrixXd& beta_full, int r,
                               const Restriction& restriction,
                               const KernelConfig& cfg, int B, std::uint64_t seed,
                               double alpha_level = 0.05, int threads = 1);

struct BgTestResult {
  double stat = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// First-order multivariate Breusch-Godfrey LM test on standardized residuals.
BgTestResult bg_lm_test(const Eigen::MatrixXd& std_residuals);

// eps_t = Omega^{-1/2}(tau_t) u_t from a fitted model.
Eigen::MatrixXd standardized_residuals(const LocalLinearFit& fit);

}  // namespace tvvecm
