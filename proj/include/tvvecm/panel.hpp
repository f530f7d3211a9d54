#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace tvvecm {

// Observed level series, rows y_t^T for t = 1..T.
struct Panel {
  Eigen::MatrixXd values;              // T x d
  std::vector<std::string> labels;     // optional per-row timestamps
  std::vector<std::string> columns;    // column names

  Eigen::Index T() const { return values.rows(); }
  Eigen::Index d() const { return values.cols(); }
};

// Differenced response and stacked regressors for a candidate lag count p.
// Row k corresponds to observation t = t0 + k (1-based), with
//   dy row k      = (y_t - y_{t-1})^T
//   hreg row k    = h_{t-1}^T = [y_{t-1}^T, dy_{t-1}^T, ..., dy_{t-p+1}^T]
//   taus[k]       = t / T
struct RegressorFrame {
  int t0 = 0;             // first usable 1-based observation index, = p + 1
  int p = 1;              // lag count (p - 1 lagged differences enter)
  Eigen::MatrixXd dy;     // n x d
  Eigen::MatrixXd hreg;   // n x (d*p)
  Eigen::VectorXd taus;   // n

  Eigen::Index n() const { return dy.rows(); }
  Eigen::Index d() const { return dy.cols(); }

  // Lagged-difference block of hreg (everything past the level block).
  auto lagged_diffs() const { return hreg.rightCols(hreg.cols() - dy.cols()); }
};

RegressorFrame build_regressors(const Panel& panel, int p);

}  // namespace tvvecm
