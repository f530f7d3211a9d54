#pragma once

// Independently coded reference implementations used only by the tests.
// They mirror the definitions directly (dense weighted normal equations,
// composite-Simpson quadrature) rather than sharing code with the library.

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "tvvecm/linalg.hpp"
#include "tvvecm/panel.hpp"
#include "tvvecm/rng.hpp"

namespace oracle {

inline double epan(double u) {
  return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

// Composite Simpson on 2^level + 1 nodes.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int level) {
  const int n = 1 << level;
  const double step = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * step);
  return acc * step / 3.0;
}

// Local-linear fit as one dense weighted least-squares problem: regress
// y_t on [x_t, x_t u_t] with weights K(u_t), solved through the same
// Moore-Penrose pseudoinverse contract as the library.
struct DenseFit {
  Eigen::MatrixXd level;
  Eigen::MatrixXd slope;
};

inline DenseFit dense_local_linear(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& taus, double tau, double h) {
  const Eigen::Index n = y.rows();
  const Eigen::Index m = x.cols();
  Eigen::MatrixXd design(n, 2 * m);
  Eigen::VectorXd k(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double u = (taus[t] - tau) / h;
    k[t] = epan(u);
    design.block(t, 0, 1, m) = x.row(t);
    design.block(t, m, 1, m) = x.row(t) * u;
  }
  Eigen::MatrixXd xtx = design.transpose() * k.asDiagonal() * design;
  Eigen::MatrixXd xty = design.transpose() * k.asDiagonal() * y;
  Eigen::MatrixXd coef = (tvvecm::moore_penrose_pinv(xtx) * xty).transpose();
  return DenseFit{coef.leftCols(m), coef.rightCols(m)};
}

// Random panel whose rows are a driftless random walk plus noise, giving
// nondegenerate level and difference regressors.
inline tvvecm::Panel random_walk_panel(Eigen::Index T, Eigen::Index d,
                                       std::uint64_t seed) {
  tvvecm::RngStream rng(seed);
  tvvecm::Panel p;
  p.values.resize(T, d);
  Eigen::RowVectorXd y = Eigen::RowVectorXd::Zero(d);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) y[j] += rng.next_gaussian();
    p.values.row(t) = y;
  }
  for (Eigen::Index j = 0; j < d; ++j) p.columns.push_back("y" + std::to_string(j + 1));
  return p;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c,
                                     std::uint64_t seed) {
  tvvecm::RngStream rng(seed);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.next_gaussian();
  return m;
}

}  // namespace oracle
