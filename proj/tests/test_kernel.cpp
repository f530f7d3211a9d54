#include <doctest.h>

#include <Eigen/Core>
#include <cmath>

#include "oracles.hpp"
#include "tvvecm/errors.hpp"
#include "tvvecm/kernel.hpp"
#include "tvvecm/simd.hpp"

using namespace tvvecm;

TEST_CASE("epanechnikov point values") {
  CHECK(kernel_eval(0.0) == doctest::Approx(0.75));
  CHECK(kernel_eval(0.5) == doctest::Approx(0.5625));
  CHECK(kernel_eval(1.0) == doctest::Approx(0.0));
  CHECK(kernel_eval(-1.0) == doctest::Approx(0.0));
  CHECK(kernel_eval(1.2) == 0.0);
  CHECK(kernel_eval(-3.0) == 0.0);
}

TEST_CASE("kernel constants match quadrature oracles and closed forms") {
  KernelConstants c = kernel_constants();
  // Closed forms: int u^2 K = 1/5, int K^2 = 3/5, and the double integral
  // evaluates to 167/770.
  CHECK(std::fabs(c.c2 - 0.2) < 1e-8);
  CHECK(std::fabs(c.v0 - 0.6) < 1e-8);
  CHECK(std::fabs(c.cb - 167.0 / 770.0) < 1e-8);

  double c2_q = oracle::simpson([](double u) { return u * u * oracle::epan(u); },
                                -1.0, 1.0, 14);
  double v0_q = oracle::simpson([](double u) { return oracle::epan(u) * oracle::epan(u); },
                                -1.0, 1.0, 14);
  CHECK(std::fabs(c.c2 - c2_q) < 1e-8);
  CHECK(std::fabs(c.v0 - v0_q) < 1e-8);

  auto cb_at = [](int level) {
    return oracle::simpson(
        [&](double v) {
          double inner = oracle::simpson(
              [&](double u) { return oracle::epan(u) * oracle::epan(u + v); }, -1.0,
              1.0 - v, level);
          return inner * inner;
        },
        0.0, 2.0, level);
  };
  // Stable under quadrature refinement.
  CHECK(std::fabs(cb_at(10) - cb_at(12)) < 1e-8);
  CHECK(std::fabs(c.cb - cb_at(12)) < 1e-8);
}

TEST_CASE("local-linear weights satisfy the reproducing identities") {
  for (double tau : {0.05, 0.3, 0.5, 0.97}) {
    Eigen::VectorXd w = local_linear_weights(tau, 0.25, 200);
    REQUIRE(w.size() == 200);
    double s0 = 0.0, s1 = 0.0;
    for (int t = 1; t <= 200; ++t) {
      double u = ((t / 200.0) - tau) / 0.25;
      s0 += w[t - 1];
      s1 += w[t - 1] * u;
    }
    // mean(w) = 1 and mean(w u) = 0, so a locally linear target is
    // reproduced without bias.
    CHECK(s0 / 200.0 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(s1 / 200.0) < 1e-10);
  }
}

TEST_CASE("degenerate weight window throws") {
  Eigen::VectorXd taus = Eigen::VectorXd::Constant(10, 0.5);
  KernelConfig cfg;
  cfg.h = 0.1;
  CHECK_THROWS_AS(local_linear_weights_at(taus, 0.5, cfg), DegenerateWindow);
}

TEST_CASE("kernel batch backends agree bit for bit") {
  Eigen::VectorXd u(1003);
  RngStream rng(99);
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 3.0 * (rng.next_uniform() - 0.5);
  Eigen::VectorXd w_dispatch(u.size()), w_scalar(u.size());
  simd::epanechnikov_batch(u.data(), w_dispatch.data(), u.size());
  simd::epanechnikov_batch_scalar(u.data(), w_scalar.data(), u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    CHECK(w_dispatch[i] == w_scalar[i]);
    CHECK(w_scalar[i] == kernel_eval(u[i]));
  }
#if defined(__x86_64__)
  if (simd::avx2_available()) {
    Eigen::VectorXd w_avx(u.size());
    simd::epanechnikov_batch_avx2(u.data(), w_avx.data(), u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) CHECK(w_avx[i] == w_scalar[i]);
  }
#endif
  CHECK(simd::active_backend() != nullptr);
}
