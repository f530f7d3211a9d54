#include "tvvecm/cointegration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "tvvecm/errors.hpp"
#include "tvvecm/linalg.hpp"
#include "tvvecm/simd.hpp"

namespace tvvecm {

Eigen::MatrixXd CointegrationFit::beta_full() const {
  const Eigen::Index dm = beta_star.rows() + r;
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(dm, r);
  beta.topRows(r) = Eigen::MatrixXd::Identity(r, r);
  beta.bottomRows(beta_star.rows()) = beta_star;
  return beta;
}

std::vector<Eigen::MatrixXd> alpha_from_pi(const LocalLinearFit& fit, int r) {
  const Eigen::Index d = fit.d();
  if (r < 1 || r > d - 1) {
    throw RankOutOfRange("alpha_from_pi: need 1 <= r <= d-1, got r=" +
                         std::to_string(r));
  }
  std::vector<Eigen::MatrixXd> alpha;
  alpha.reserve(fit.Pi.size());
  for (const auto& pi : fit.Pi) alpha.push_back(pi.leftCols(r));
  return alpha;
}

CointegrationFit wls_beta_star(const Panel& panel, const LocalLinearFit& fit, int r,
                               const KernelConfig& cfg, double ci_level) {
  const Eigen::Index d = fit.d();
  const Eigen::Index n = fit.grid.size();
  const int p = fit.p;
  if (r < 1 || r > d - 1) {
    throw RankOutOfRange("wls_beta_star: need 1 <= r <= d-1");
  }
  if (!fit.has_omega()) {
    throw SingularMoments("wls_beta_star: Omega path not computed");
  }

  const RegressorFrame& frame = fit.frame;
  const Eigen::Index q = d * (p - 1);
  const Eigen::Index nb = (d - r) * r;

  std::vector<Eigen::MatrixXd> alpha = alpha_from_pi(fit, r);
  std::vector<Eigen::MatrixXd> omega_inv(n);
  for (Eigen::Index k = 0; k < n; ++k) omega_inv[k] = floored_sym_inverse(fit.Omega[k]);

  // Raw moment vectors: r_t = dy_t - alpha(tau_t) y1_{t-1},
  // R_t = y2_{t-1} (x) alpha(tau_t)^T.
  Eigen::MatrixXd raw_r(n, d);
  std::vector<Eigen::MatrixXd> raw_R(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd y1 = frame.hreg.row(k).head(r).transpose();
    Eigen::VectorXd y2 = frame.hreg.row(k).segment(r, d - r).transpose();
    raw_r.row(k) = frame.dy.row(k) - (alpha[k] * y1).transpose();
    Eigen::MatrixXd big(nb, d);
    for (Eigen::Index j = 0; j < d - r; ++j) {
      big.middleRows(j * r, r) = y2[j] * alpha[k].transpose();
    }
    raw_R[k] = std::move(big);
  }

  // Partial out the lagged differences via the kernel-weighted local-linear
  // projection when p >= 2; for p = 1 the projections are identities.
  Eigen::MatrixXd tilde_r = raw_r;
  std::vector<Eigen::MatrixXd> tilde_R = raw_R;
  if (p >= 2) {
    auto dx = frame.lagged_diffs();
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::VectorXd u = (frame.taus.array() - frame.taus[k]) / cfg.h;
      Eigen::VectorXd kv(n);
      simd::epanechnikov_batch(u.data(), kv.data(), static_cast<std::size_t>(n));

      // A = sum_s k_s [dx_s; u_s dx_s] [dx_s; u_s dx_s]^T, 2q x 2q.
      Eigen::MatrixXd dxu = dx.array().colwise() * u.array();
      Eigen::MatrixXd design(n, 2 * q);
      design.leftCols(q) = dx;
      design.rightCols(q) = dxu;
      Eigen::MatrixXd a =
          design.transpose() * kv.asDiagonal() * design;

      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * q);
      rhs.head(q) = dx.row(k).transpose();
      Eigen::VectorXd c = floored_sym_inverse(a) * rhs;

      // gamma_s = k_s * [dx_s; u_s dx_s]^T c subtracts the same projection
      // from both moment sequences.
      Eigen::VectorXd gamma = kv.cwiseProduct(design * c);
      tilde_r.row(k) = raw_r.row(k) - gamma.transpose() * raw_r;
      Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(nb, d);
      for (Eigen::Index s = 0; s < n; ++s) {
        if (gamma[s] != 0.0) proj += gamma[s] * raw_R[s];
      }
      tilde_R[k] = raw_R[k] - proj;
    }
  }

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::MatrixXd ro = tilde_R[k] * omega_inv[k];
    lhs.noalias() += ro * tilde_R[k].transpose();
    rhs.noalias() += ro * tilde_r.row(k).transpose();
  }

  Eigen::LDLT<Eigen::MatrixXd> solver(lhs);
  if (solver.info() != Eigen::Success || !solver.isPositive() ||
      solver.vectorD().minCoeff() <=
          1e-12 * std::max(solver.vectorD().maxCoeff(), 1e-300)) {
    throw SingularInformation("wls_beta_star: WLS normal matrix singular");
  }
  Eigen::VectorXd bvec = solver.solve(rhs);

  CointegrationFit out;
  out.r = r;
  out.alpha_path = std::move(alpha);
  out.beta_star.resize(d - r, r);
  for (Eigen::Index j = 0; j < d - r; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) out.beta_star(j, i) = bvec[j * r + i];
  }

  // Information matrix of Theorem-3 standardization:
  // M = sum_t (y2 y2^T) (x) (alpha^T Omega^{-1} alpha).
  out.info = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd y2 = frame.hreg.row(k).segment(r, d - r).transpose();
    Eigen::MatrixXd core =
        out.alpha_path[k].transpose() * omega_inv[k] * out.alpha_path[k];
    for (Eigen::Index i = 0; i < d - r; ++i) {
      for (Eigen::Index j = 0; j < d - r; ++j) {
        out.info.block(i * r, j * r, r, r) += y2[i] * y2[j] * core;
      }
    }
  }

  Eigen::LDLT<Eigen::MatrixXd> info_solver(out.info);
  if (info_solver.info() != Eigen::Success || !info_solver.isPositive()) {
    throw SingularInformation("wls_beta_star: information matrix singular");
  }
  Eigen::MatrixXd info_inv =
      info_solver.solve(Eigen::MatrixXd::Identity(nb, nb));
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(),
                                         0.5 * (1.0 + ci_level));
  out.ci_lo.resize(d - r, r);
  out.ci_hi.resize(d - r, r);
  for (Eigen::Index j = 0; j < d - r; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) {
      double se = std::sqrt(std::max(info_inv(j * r + i, j * r + i), 0.0));
      out.ci_lo(j, i) = out.beta_star(j, i) - z * se;
      out.ci_hi(j, i) = out.beta_star(j, i) + z * se;
    }
  }
  return out;
}

ConstantVecmFit fit_constant_vecm(const Panel& panel, int p, int r) {
  const Eigen::Index d = panel.d();
  if (r < 1 || r > d) throw RankOutOfRange("fit_constant_vecm: need 1 <= r <= d");
  RegressorFrame frame = build_regressors(panel, p);
  const Eigen::Index n = frame.n();
  const Eigen::Index q = d * (p - 1);

  Eigen::MatrixXd z0 = frame.dy;                       // n x d
  Eigen::MatrixXd z1 = frame.hreg.leftCols(d);         // n x d
  Eigen::MatrixXd r0 = z0, r1 = z1;
  if (q > 0) {
    Eigen::MatrixXd z2 = frame.lagged_diffs();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z2);
    r0 -= z2 * qr.solve(z0);
    r1 -= z2 * qr.solve(z1);
  }
  const double scale = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd s00 = scale * r0.transpose() * r0;
  Eigen::MatrixXd s01 = scale * r0.transpose() * r1;
  Eigen::MatrixXd s11 = scale * r1.transpose() * r1;

  Eigen::MatrixXd target = s01.transpose() * moore_penrose_pinv(s00) * s01;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (target + target.transpose()), s11);
  if (es.info() != Eigen::Success) {
    throw SingularMoments("fit_constant_vecm: eigenproblem failed");
  }

  // Eigen returns ascending order; take the r leading pairs.
  ConstantVecmFit out;
  out.eigenvalues.resize(d);
  Eigen::MatrixXd beta(d, r);
  for (Eigen::Index i = 0; i < d; ++i) out.eigenvalues[i] = es.eigenvalues()[d - 1 - i];
  for (int i = 0; i < r; ++i) beta.col(i) = es.eigenvectors().col(d - 1 - i);

  Eigen::MatrixXd top = beta.topRows(r);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(top);
  if (!lu.isInvertible()) {
    throw SingularMoments("fit_constant_vecm: top block of beta not invertible");
  }
  beta = beta * lu.inverse();        // normalize to [I_r; beta_star]
  out.beta_star = beta.bottomRows(d - r);

  // Given beta, [alpha, gamma] by joint OLS of dy on [z1 beta, lagged diffs].
  Eigen::MatrixXd design(n, r + q);
  design.leftCols(r) = z1 * beta;
  if (q > 0) design.rightCols(q) = frame.lagged_diffs();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  Eigen::MatrixXd coef = qr.solve(z0).transpose();  // d x (r + q)
  out.alpha = coef.leftCols(r);
  out.gamma = coef.rightCols(q);
  Eigen::MatrixXd resid = z0 - design * coef.transpose();
  out.omega = scale * resid.transpose() * resid;
  return out;
}

}  // namespace tvvecm
