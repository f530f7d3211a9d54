#pragma once

#include <Eigen/Core>
#include <vector>

#include "tvvecm/kernel.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

// Level and slope coefficient estimates of a local-linear regression.
// The slope block is the coefficient on (tau_t - tau)/h, i.e. h times the
// derivative of the coefficient path.
struct LocalFitResult {
  Eigen::MatrixXd level;  // d x m
  Eigen::MatrixXd slope;  // d x m
};

// Local-linear regression of the rows of y on the rows of x at the point tau.
// Kernel sums run over rows with |tau_s - tau| <= h; skip_row (if >= 0) is
// removed from every kernel sum, which implements leave-one-out fits.
// Throws DegenerateWindow when fewer than 2m + 2 rows carry positive weight.
LocalFitResult local_linear_regress(const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& taus, double tau,
                                    const KernelConfig& cfg,
                                    Eigen::Index skip_row = -1);

// Time-varying coefficient paths over the observation grid.
struct LocalLinearFit {
  int p = 1;
  double h = 0.0;
  Eigen::Index T = 0;                   // panel length behind the fit
  Eigen::VectorXd grid;                 // tau_t for each frame row
  std::vector<Eigen::MatrixXd> Pi;      // d x d per grid point
  std::vector<Eigen::MatrixXd> Gamma;   // d x d(p-1) per grid point
  std::vector<Eigen::MatrixXd> Omega;   // d x d per grid point (after estimate_omega)
  Eigen::MatrixXd residuals;            // n x d, u_hat_t
  Eigen::MatrixXd ybar_pi;              // grid average of Pi
  RegressorFrame frame;                 // kept for downstream estimators

  bool has_omega() const { return !Omega.empty(); }
  Eigen::Index d() const { return residuals.cols(); }
  // Index of the grid point closest to tau.
  Eigen::Index grid_index(double tau) const;
};

// [Pi(tau), Gamma(tau)] at an arbitrary tau.
LocalFitResult fit_at(const RegressorFrame& frame, const KernelConfig& cfg, double tau);

// Full coefficient paths with residuals evaluated at each observation's own tau.
LocalLinearFit fit_paths(const Panel& panel, int p, const KernelConfig& cfg);

// Omega(tau) path from the fit residuals; symmetrized and eigenvalue-floored.
void estimate_omega(LocalLinearFit& fit, const KernelConfig& cfg);

// Asymptotic covariance SigmaCo(tau) = [sum_t K] * pinv(S_{T,0}(tau)) (x) Omega(tau).
Eigen::MatrixXd sigma_co(const LocalLinearFit& fit, const KernelConfig& cfg, double tau);

// Pointwise confidence bands for the elements of [Pi, Gamma].
struct CiBands {
  double level = 0.95;
  std::vector<Eigen::MatrixXd> se;  // d x dp per grid point
  std::vector<Eigen::MatrixXd> lo;
  std::vector<Eigen::MatrixXd> hi;
};
CiBands pointwise_ci(const LocalLinearFit& fit, const KernelConfig& cfg,
                     double level = 0.95);

// Leave-one-out cross-validation score for one bandwidth.
double cv_score(const RegressorFrame& frame, const KernelConfig& cfg);

// h = alpha * T^{-1/5} for alpha = 0.6, 0.7, ..., 2.0.
std::vector<double> default_bandwidth_grid(Eigen::Index T);

// argmin of cv_score over the candidate bandwidths; ties go to the smaller h.
double cv_bandwidth(const Panel& panel, int p, const std::vector<double>& grid);

}  // namespace tvvecm
