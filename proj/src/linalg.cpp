#include "tvvecm/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace tvvecm {

Eigen::MatrixXd moore_penrose_pinv(const Eigen::MatrixXd& a, double rtol) {
  using Eigen::MatrixXd;
  if (rtol < 0.0) {
    rtol = static_cast<double>(std::max(a.rows(), a.cols())) *
           std::numeric_limits<double>::epsilon();
  }
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? rtol * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

PivotedQrResult pivoted_qr(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.rows();
  Eigen::MatrixXd work = a;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXi perm(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) perm[j] = static_cast<int>(j);

  Eigen::VectorXd colnorm2(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) colnorm2[j] = work.col(j).squaredNorm();

  const Eigen::Index steps = std::min(d, a.cols());
  for (Eigen::Index k = 0; k < steps; ++k) {
    // Pivot: largest residual column norm among the remaining ones.
    Eigen::Index best = k;
    double bestval = work.col(k).tail(d - k).squaredNorm();
    for (Eigen::Index j = k + 1; j < a.cols(); ++j) {
      double val = work.col(j).tail(d - k).squaredNorm();
      if (val > bestval) {
        bestval = val;
        best = j;
      }
    }
    if (best != k) {
      work.col(k).swap(work.col(best));
      std::swap(perm[k], perm[best]);
    }

    // Householder reflector zeroing below the diagonal of column k.
    Eigen::VectorXd x = work.col(k).tail(d - k);
    double alpha = -std::copysign(x.norm(), x[0] == 0.0 ? 1.0 : x[0]);
    if (std::fabs(alpha) <= 0.0) continue;
    Eigen::VectorXd v = x;
    v[0] -= alpha;
    double vnorm2 = v.squaredNorm();
    if (vnorm2 <= 0.0) continue;
    // Apply I - 2 v v^T / (v^T v) to the trailing block and accumulate into q.
    auto trail = work.bottomRightCorner(d - k, a.cols() - k);
    trail -= (2.0 / vnorm2) * v * (v.transpose() * trail);
    auto qtrail = q.rightCols(d - k);
    qtrail -= (2.0 / vnorm2) * (qtrail * v) * v.transpose();
  }

  // Clean numerical noise below the diagonal.
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < d; ++i) work(i, j) = 0.0;
  }
  return PivotedQrResult{q, work, perm};
}

Eigen::VectorXd trailing_row_norms(const Eigen::MatrixXd& r) {
  const Eigen::Index d = r.rows();
  Eigen::VectorXd mu(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    mu[k] = r.row(k).tail(r.cols() - k).norm();
  }
  return mu;
}

namespace {

Eigen::MatrixXd floored_sym_power(const Eigen::MatrixXd& a, double floor_rel,
                                  double power) {
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  double floor = floor_rel * std::max(sym.trace(), 0.0) / static_cast<double>(a.rows());
  if (floor <= 0.0) floor = floor_rel;
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(floor);
  Eigen::VectorXd plam(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) plam[i] = std::pow(lam[i], power);
  return es.eigenvectors() * plam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd floored_sym_inverse(const Eigen::MatrixXd& a, double floor_rel) {
  return floored_sym_power(a, floor_rel, -1.0);
}

Eigen::MatrixXd floored_sym_inv_sqrt(const Eigen::MatrixXd& a, double floor_rel) {
  return floored_sym_power(a, floor_rel, -0.5);
}

Eigen::MatrixXd floor_psd(const Eigen::MatrixXd& a, double floor_rel) {
  return floored_sym_power(a, floor_rel, 1.0);
}

}  // namespace tvvecm
