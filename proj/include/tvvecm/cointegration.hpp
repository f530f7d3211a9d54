#pragma once

#include <Eigen/Core>
#include <vector>

#include "tvvecm/kernel.hpp"
#include "tvvecm/local_linear.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

// Profile WLS estimate of the time-invariant cointegration block beta_star,
// under the identification beta = [I_r; beta_star].
struct CointegrationFit {
  int r = 0;
  Eigen::MatrixXd beta_star;               // (d - r) x r
  Eigen::MatrixXd info;                    // (d-r)r x (d-r)r information matrix
  Eigen::MatrixXd ci_lo, ci_hi;            // per-element bands, (d - r) x r
  std::vector<Eigen::MatrixXd> alpha_path; // d x r per grid point

  // Full beta = [I_r; beta_star], d x r.
  Eigen::MatrixXd beta_full() const;
};

// Column slice alpha(tau) = first r columns of Pi(tau).
std::vector<Eigen::MatrixXd> alpha_from_pi(const LocalLinearFit& fit, int r);

CointegrationFit wls_beta_star(const Panel& panel, const LocalLinearFit& fit, int r,
                               const KernelConfig& cfg, double ci_level = 0.95);

// Constant-parameter VECM baseline by reduced-rank regression.
struct ConstantVecmFit {
  Eigen::MatrixXd alpha;       // d x r
  Eigen::MatrixXd beta_star;   // (d - r) x r
  Eigen::MatrixXd gamma;       // d x d(p-1)
  Eigen::MatrixXd omega;       // d x d
  Eigen::VectorXd eigenvalues; // descending
};

ConstantVecmFit fit_constant_vecm(const Panel& panel, int p, int r);

}  // namespace tvvecm
