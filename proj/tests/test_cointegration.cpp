#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "tvvecm/cointegration.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/montecarlo.hpp"

using namespace tvvecm;

namespace {

LocalLinearFit fitted_dgp1(Eigen::Index T, std::uint64_t seed, double h, int p = 2) {
  DgpSpec spec;
  spec.T = T;
  Panel panel = simulate_path(spec, seed);
  KernelConfig cfg;
  cfg.h = h;
  LocalLinearFit fit = fit_paths(panel, p, cfg);
  estimate_omega(fit, cfg);
  return fit;
}

}  // namespace

TEST_CASE("alpha path is the leading column block of Pi") {
  LocalLinearFit fit = fitted_dgp1(200, 5, 0.35);
  std::vector<Eigen::MatrixXd> alpha = alpha_from_pi(fit, 1);
  REQUIRE(alpha.size() == static_cast<std::size_t>(fit.grid.size()));
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    CHECK((alpha[k] - fit.Pi[k].col(0)).norm() == 0.0);
  }
  CHECK_THROWS_AS(alpha_from_pi(fit, 0), RankOutOfRange);
  CHECK_THROWS_AS(alpha_from_pi(fit, 2), RankOutOfRange);
}

TEST_CASE("beta_full stacks the identity over beta_star") {
  CointegrationFit fit;
  fit.r = 1;
  fit.beta_star = Eigen::MatrixXd::Constant(1, 1, -0.8);
  Eigen::MatrixXd beta = fit.beta_full();
  REQUIRE(beta.rows() == 2);
  CHECK(beta(0, 0) == 1.0);
  CHECK(beta(1, 0) == -0.8);
}

TEST_CASE("profile WLS recovers the cointegration vector") {
  DgpSpec spec;
  spec.T = 1500;
  Panel panel = simulate_path(spec, 77);
  KernelConfig cfg;
  cfg.h = 0.3;
  LocalLinearFit fit = fit_paths(panel, 2, cfg);
  estimate_omega(fit, cfg);
  CointegrationFit coin = wls_beta_star(panel, fit, 1, cfg);
  CHECK(coin.beta_star(0, 0) == doctest::Approx(-0.8).epsilon(0.05));
  CHECK(coin.ci_lo(0, 0) < coin.beta_star(0, 0));
  CHECK(coin.ci_hi(0, 0) > coin.beta_star(0, 0));
  CHECK((coin.info - coin.info.transpose()).norm() < 1e-8 * coin.info.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coin.info);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  REQUIRE(coin.alpha_path.size() == static_cast<std::size_t>(fit.grid.size()));
}

TEST_CASE("estimate is invariant to rescaling Omega") {
  DgpSpec spec;
  spec.T = 400;
  Panel panel = simulate_path(spec, 13);
  KernelConfig cfg;
  cfg.h = 0.3;
  LocalLinearFit fit = fit_paths(panel, 2, cfg);
  estimate_omega(fit, cfg);
  CointegrationFit a = wls_beta_star(panel, fit, 1, cfg);
  for (auto& omega : fit.Omega) omega *= 4.0;
  CointegrationFit b = wls_beta_star(panel, fit, 1, cfg);
  // A common scale cancels between the weight and its inverse.
  CHECK(a.beta_star(0, 0) == doctest::Approx(b.beta_star(0, 0)).epsilon(1e-8));
  // The information matrix scales by the inverse factor.
  CHECK(a.info(0, 0) == doctest::Approx(4.0 * b.info(0, 0)).epsilon(1e-8));
}

TEST_CASE("narrower confidence level nests inside a wider one") {
  DgpSpec spec;
  spec.T = 300;
  Panel panel = simulate_path(spec, 21);
  KernelConfig cfg;
  cfg.h = 0.35;
  LocalLinearFit fit = fit_paths(panel, 2, cfg);
  estimate_omega(fit, cfg);
  CointegrationFit c90 = wls_beta_star(panel, fit, 1, cfg, 0.90);
  CointegrationFit c99 = wls_beta_star(panel, fit, 1, cfg, 0.99);
  CHECK(c99.ci_lo(0, 0) < c90.ci_lo(0, 0));
  CHECK(c99.ci_hi(0, 0) > c90.ci_hi(0, 0));
}

TEST_CASE("rank bounds are enforced") {
  DgpSpec spec;
  spec.T = 200;
  Panel panel = simulate_path(spec, 2);
  KernelConfig cfg;
  cfg.h = 0.35;
  LocalLinearFit fit = fit_paths(panel, 2, cfg);
  estimate_omega(fit, cfg);
  CHECK_THROWS_AS(wls_beta_star(panel, fit, 0, cfg), RankOutOfRange);
  CHECK_THROWS_AS(wls_beta_star(panel, fit, 2, cfg), RankOutOfRange);
}

TEST_CASE("constant-parameter VECM baseline recovers a constant design") {
  // Simulate a constant-coefficient error-correction system directly.
  RngStream rng(314);
  const Eigen::Index T = 4000;
  Eigen::Vector2d alpha(-0.4, 0.3);
  Eigen::Vector2d beta(1.0, -0.8);
  Eigen::Matrix2d gamma;
  gamma << 0.2, -0.1, 0.05, 0.3;
  Eigen::Vector2d y = Eigen::Vector2d::Zero();
  Eigen::Vector2d dy_prev = Eigen::Vector2d::Zero();
  Panel panel;
  panel.values.resize(T, 2);
  for (Eigen::Index t = 0; t < T + 200; ++t) {
    Eigen::Vector2d eps(rng.next_gaussian(), rng.next_gaussian());
    Eigen::Vector2d dy = alpha * beta.dot(y) + gamma * dy_prev + 0.5 * eps;
    y += dy;
    dy_prev = dy;
    if (t >= 200) panel.values.row(t - 200) = y.transpose();
  }

  ConstantVecmFit fit = fit_constant_vecm(panel, 2, 1);
  CHECK(fit.beta_star(0, 0) == doctest::Approx(-0.8).epsilon(0.03));
  CHECK((fit.alpha - alpha).norm() < 0.1);
  CHECK((fit.gamma - gamma).norm() < 0.15);
  CHECK((fit.omega - 0.25 * Eigen::Matrix2d::Identity()).norm() < 0.05);
  for (Eigen::Index i = 0; i + 1 < fit.eigenvalues.size(); ++i) {
    CHECK(fit.eigenvalues[i] >= fit.eigenvalues[i + 1]);
  }
}

TEST_CASE("information-matrix standardization tightens with T") {
  KernelConfig cfg;
  cfg.h = 0.3;
  double width_small = 0.0, width_large = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    DgpSpec spec;
    spec.T = pass == 0 ? 300 : 1200;
    Panel panel = simulate_path(spec, 99);
    LocalLinearFit fit = fit_paths(panel, 2, cfg);
    estimate_omega(fit, cfg);
    CointegrationFit coin = wls_beta_star(panel, fit, 1, cfg);
    (pass == 0 ? width_small : width_large) =
        coin.ci_hi(0, 0) - coin.ci_lo(0, 0);
  }
  // Super-consistent rate: quadrupling T should shrink the band a lot.
  CHECK(width_large < 0.5 * width_small);
}
