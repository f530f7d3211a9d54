#pragma once

#include <Eigen/Core>

namespace tvvecm {

struct PivotedQrResult {
  Eigen::MatrixXd S;             // d x d orthonormal
  Eigen::MatrixXd R;             // d x d upper triangular, |diag| nonincreasing
  Eigen::VectorXi perm;          // column permutation: A.col(perm[j]) maps to slot j
};

// Moore-Penrose pseudoinverse via SVD; singular values <= rtol * sigma_max are
// dropped. rtol < 0 selects max(m, n) * machine_epsilon.
Eigen::MatrixXd moore_penrose_pinv(const Eigen::MatrixXd& a, double rtol = -1.0);

// Householder QR with greedy column pivoting: each step pivots the column with
// the largest remaining norm, so A * P = S * R with |diag(R)| nonincreasing.
PivotedQrResult pivoted_qr(const Eigen::MatrixXd& a);

// mu_k = sqrt(sum_{j=k..d} R(k,j)^2) for an upper-triangular R.
Eigen::VectorXd trailing_row_norms(const Eigen::MatrixXd& r);

// Inverse of a symmetric PSD matrix through its eigendecomposition with the
// eigenvalues floored at floor_rel * trace / d. Also usable as a "floored"
// inverse square root.
Eigen::MatrixXd floored_sym_inverse(const Eigen::MatrixXd& a, double floor_rel = 1e-8);
Eigen::MatrixXd floored_sym_inv_sqrt(const Eigen::MatrixXd& a, double floor_rel = 1e-8);

// Symmetrize and floor the eigenvalues at floor_rel * trace / d.
Eigen::MatrixXd floor_psd(const Eigen::MatrixXd& a, double floor_rel = 1e-8);

}  // namespace tvvecm
