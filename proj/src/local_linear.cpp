#include "tvvecm/local_linear.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

#include "tvvecm/errors.hpp"
#include "tvvecm/linalg.hpp"
#include "tvvecm/simd.hpp"

namespace tvvecm {

namespace {

struct Window {
  Eigen::Index start = 0;
  Eigen::Index count = 0;
};

Window kernel_window(const Eigen::VectorXd& taus, double tau, double h) {
  const double* begin = taus.data();
  const double* end = begin + taus.size();
  const double* lo = std::lower_bound(begin, end, tau - h);
  const double* hi = std::upper_bound(begin, end, tau + h);
  return Window{lo - begin, hi - lo};
}

}  // namespace

LocalFitResult local_linear_regress(const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& taus, double tau,
                                    const KernelConfig& cfg, Eigen::Index skip_row) {
  const Eigen::Index m = x.cols();
  const Window win = kernel_window(taus, tau, cfg.h);
  if (win.count < 2 * m + 2) {
    throw DegenerateWindow("local_linear_regress: window at tau=" +
                           std::to_string(tau) + " has " + std::to_string(win.count) +
                           " rows, need " + std::to_string(2 * m + 2));
  }

  Eigen::VectorXd u =
      (taus.segment(win.start, win.count).array() - tau) / cfg.h;
  Eigen::VectorXd k(win.count);
  simd::epanechnikov_batch(u.data(), k.data(), static_cast<std::size_t>(win.count));
  if (skip_row >= win.start && skip_row < win.start + win.count) {
    k[skip_row - win.start] = 0.0;
  }
  if ((k.array() > 0.0).count() < 2 * m + 2) {
    throw DegenerateWindow("local_linear_regress: fewer than " +
                           std::to_string(2 * m + 2) +
                           " positive-weight rows at tau=" + std::to_string(tau));
  }

  const auto xw = x.middleRows(win.start, win.count);
  const auto yw = y.middleRows(win.start, win.count);
  Eigen::VectorXd ku = k.cwiseProduct(u);
  Eigen::VectorXd kuu = ku.cwiseProduct(u);

  Eigen::MatrixXd xk = xw.array().colwise() * k.array();
  Eigen::MatrixXd xku = xw.array().colwise() * ku.array();
  Eigen::MatrixXd xkuu = xw.array().colwise() * kuu.array();

  Eigen::MatrixXd moments(2 * m, 2 * m);
  moments.topLeftCorner(m, m).noalias() = xw.transpose() * xk;
  moments.topRightCorner(m, m).noalias() = xw.transpose() * xku;
  moments.bottomLeftCorner(m, m) = moments.topRightCorner(m, m);
  moments.bottomRightCorner(m, m).noalias() = xw.transpose() * xkuu;

  Eigen::MatrixXd v(y.cols(), 2 * m);
  v.leftCols(m).noalias() = yw.transpose() * xk;
  v.rightCols(m).noalias() = yw.transpose() * xku;

  Eigen::MatrixXd coef = v * moore_penrose_pinv(moments);
  return LocalFitResult{coef.leftCols(m), coef.rightCols(m)};
}

Eigen::Index LocalLinearFit::grid_index(double tau) const {
  Eigen::Index best = 0;
  double bestdist = std::abs(grid[0] - tau);
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    double dist = std::abs(grid[i] - tau);
    if (dist < bestdist) {
      bestdist = dist;
      best = i;
    }
  }
  return best;
}

LocalFitResult fit_at(const RegressorFrame& frame, const KernelConfig& cfg, double tau) {
  return local_linear_regress(frame.dy, frame.hreg, frame.taus, tau, cfg);
}

LocalLinearFit fit_paths(const Panel& panel, int p, const KernelConfig& cfg) {
  RegressorFrame frame = build_regressors(panel, p);
  const Eigen::Index n = frame.n();
  const Eigen::Index d = frame.d();

  LocalLinearFit fit;
  fit.p = p;
  fit.h = cfg.h;
  fit.T = panel.T();
  fit.grid = frame.taus;
  fit.Pi.resize(n);
  fit.Gamma.resize(n);
  fit.residuals.resize(n, d);
  fit.ybar_pi = Eigen::MatrixXd::Zero(d, d);

  for (Eigen::Index k = 0; k < n; ++k) {
    LocalFitResult local = fit_at(frame, cfg, frame.taus[k]);
    fit.Pi[k] = local.level.leftCols(d);
    fit.Gamma[k] = local.level.rightCols(d * (p - 1));
    fit.residuals.row(k) =
        frame.dy.row(k) - frame.hreg.row(k) * local.level.transpose();
    fit.ybar_pi += fit.Pi[k];
  }
  fit.ybar_pi /= static_cast<double>(n);
  fit.frame = std::move(frame);
  return fit;
}

void estimate_omega(LocalLinearFit& fit, const KernelConfig& cfg) {
  const Eigen::Index n = fit.grid.size();
  fit.Omega.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd w = local_linear_weights_at(fit.grid, fit.grid[k], cfg);
    Eigen::MatrixXd omega =
        (fit.residuals.transpose() * w.asDiagonal() * fit.residuals) /
        static_cast<double>(n);
    fit.Omega[k] = floor_psd(omega);
  }
}

namespace {

// S_{T,0}(tau) over the frame plus the kernel mass sum_t K((tau_t - tau)/h).
std::pair<Eigen::MatrixXd, double> level_moments(const RegressorFrame& frame,
                                                 const KernelConfig& cfg, double tau) {
  Eigen::VectorXd u = (frame.taus.array() - tau) / cfg.h;
  Eigen::VectorXd k(u.size());
  simd::epanechnikov_batch(u.data(), k.data(), static_cast<std::size_t>(u.size()));
  double mass = k.sum();
  if (!(mass > 0.0)) {
    throw DegenerateWindow("sigma_co: empty kernel window at tau=" + std::to_string(tau));
  }
  Eigen::MatrixXd s0 =
      frame.hreg.transpose() * k.asDiagonal() * frame.hreg;
  return {std::move(s0), mass};
}

}  // namespace

Eigen::MatrixXd sigma_co(const LocalLinearFit& fit, const KernelConfig& cfg, double tau) {
  if (!fit.has_omega()) {
    throw SingularMoments("sigma_co: Omega path not computed");
  }
  auto [s0, mass] = level_moments(fit.frame, cfg, tau);
  Eigen::MatrixXd s0_pinv = moore_penrose_pinv(s0);
  const Eigen::MatrixXd& omega = fit.Omega[fit.grid_index(tau)];

  const Eigen::Index m = s0_pinv.rows();
  const Eigen::Index d = omega.rows();
  Eigen::MatrixXd out(m * d, m * d);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out.block(i * d, j * d, d, d) = mass * s0_pinv(i, j) * omega;
    }
  }
  return out;
}

CiBands pointwise_ci(const LocalLinearFit& fit, const KernelConfig& cfg, double level) {
  const Eigen::Index n = fit.grid.size();
  const Eigen::Index d = fit.d();
  const Eigen::Index m = fit.frame.hreg.cols();
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(),
                                         0.5 * (1.0 + level));

  CiBands bands;
  bands.level = level;
  bands.se.resize(n);
  bands.lo.resize(n);
  bands.hi.resize(n);
  for (Eigen::Index g = 0; g < n; ++g) {
    auto [s0, mass] = level_moments(fit.frame, cfg, fit.grid[g]);
    Eigen::MatrixXd s0_pinv = moore_penrose_pinv(s0);
    const Eigen::MatrixXd& omega = fit.Omega[g];
    // Effective-kernel variance constant at this tau, divided by Th: the
    // squared sum of the normalized local-linear weights. Interior it equals
    // v0/(Th); near the endpoints the truncated window inflates it, which a
    // constant v0 misses and which otherwise wrecks boundary coverage.
    Eigen::VectorXd w = local_linear_weights_at(fit.grid, fit.grid[g], cfg);
    const double v0_over_th = w.squaredNorm() / (static_cast<double>(n) * n);

    Eigen::MatrixXd se(d, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        double var = v0_over_th * mass * s0_pinv(j, j) * omega(i, i);
        se(i, j) = var > 0.0 ? std::sqrt(var) : 0.0;
      }
    }
    Eigen::MatrixXd estimate(d, m);
    estimate.leftCols(d) = fit.Pi[g];
    if (m > d) estimate.rightCols(m - d) = fit.Gamma[g];
    bands.se[g] = se;
    bands.lo[g] = estimate - z * se;
    bands.hi[g] = estimate + z * se;
  }
  return bands;
}

double cv_score(const RegressorFrame& frame, const KernelConfig& cfg) {
  double score = 0.0;
  for (Eigen::Index k = 0; k < frame.n(); ++k) {
    LocalFitResult loo = local_linear_regress(frame.dy, frame.hreg, frame.taus,
                                              frame.taus[k], cfg, k);
    Eigen::RowVectorXd resid =
        frame.dy.row(k) - frame.hreg.row(k) * loo.level.transpose();
    score += resid.squaredNorm();
  }
  return score;
}

std::vector<double> default_bandwidth_grid(Eigen::Index T) {
  std::vector<double> grid;
  const double scale = std::pow(static_cast<double>(T), -0.2);
  for (int i = 6; i <= 20; ++i) {
    grid.push_back(0.1 * i * scale);
  }
  return grid;
}

double cv_bandwidth(const Panel& panel, int p, const std::vector<double>& grid) {
  if (grid.empty()) throw NoValidBandwidth("cv_bandwidth: empty bandwidth grid");
  RegressorFrame frame = build_regressors(panel, p);
  std::vector<double> candidates = grid;
  std::sort(candidates.begin(), candidates.end());
  double best_h = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  bool any = false;
  for (double h : candidates) {
    KernelConfig cfg;
    cfg.h = h;
    double score;
    try {
      score = cv_score(frame, cfg);
    } catch (const DegenerateWindow&) {
      continue;
    }
    if (!any || score < best_score) {
      any = true;
      best_score = score;
      best_h = h;
    }
  }
  if (!any) {
    throw NoValidBandwidth("cv_bandwidth: every candidate bandwidth degenerate");
  }
  return best_h;
}

}  // namespace tvvecm
