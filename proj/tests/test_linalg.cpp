#include <doctest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "tvvecm/linalg.hpp"

using namespace tvvecm;

namespace {

void check_penrose(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ap) {
  const double scale = std::max(1.0, a.norm());
  CHECK((a * ap * a - a).norm() / scale < 1e-8);
  CHECK((ap * a * ap - ap).norm() / std::max(1.0, ap.norm()) < 1e-8);
  CHECK((a * ap - (a * ap).transpose()).norm() / std::max(1.0, (a * ap).norm()) < 1e-8);
  CHECK((ap * a - (ap * a).transpose()).norm() / std::max(1.0, (ap * a).norm()) < 1e-8);
}

}  // namespace

TEST_CASE("pseudoinverse satisfies the four Penrose conditions") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream shape(seed, 7);
    Eigen::Index rows = 1 + shape.next_u64() % 8;
    Eigen::Index cols = 1 + shape.next_u64() % 8;
    Eigen::MatrixXd a = oracle::random_matrix(rows, cols, seed);
    if (seed % 3 == 0) {
      // Force a rank-deficient instance through a thin factorization.
      Eigen::Index k = 1 + shape.next_u64() % std::min(rows, cols);
      a = oracle::random_matrix(rows, k, seed + 1000) *
          oracle::random_matrix(k, cols, seed + 2000);
    }
    check_penrose(a, moore_penrose_pinv(a));
  }
}

TEST_CASE("pseudoinverse of invertible matrix equals the inverse") {
  Eigen::MatrixXd a = oracle::random_matrix(5, 5, 42);
  a += 5.0 * Eigen::MatrixXd::Identity(5, 5);
  CHECK((moore_penrose_pinv(a) - a.inverse()).norm() < 1e-10);
}

TEST_CASE("pseudoinverse of zero matrix is zero") {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 4);
  CHECK(moore_penrose_pinv(z).norm() == 0.0);
  CHECK(moore_penrose_pinv(z).rows() == 4);
}

TEST_CASE("pivoted QR reconstructs with nonincreasing diagonal") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Eigen::MatrixXd a = oracle::random_matrix(4, 4, seed + 500);
    if (seed % 4 == 0) a.col(2) = 0.5 * a.col(0);  // near-dependence case
    PivotedQrResult qr = pivoted_qr(a);

    CHECK((qr.S.transpose() * qr.S - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
    Eigen::MatrixXd sr = qr.S * qr.R;
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK((a.col(qr.perm[j]) - sr.col(j)).norm() < 1e-9);
    }
    for (Eigen::Index i = 0; i + 1 < 4; ++i) {
      CHECK(std::fabs(qr.R(i, i)) + 1e-12 >= std::fabs(qr.R(i + 1, i + 1)));
    }
    for (Eigen::Index i = 1; i < 4; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) CHECK(qr.R(i, j) == 0.0);
    }
  }
}

TEST_CASE("trailing row norms match a direct loop") {
  Eigen::MatrixXd r = oracle::random_matrix(5, 5, 9).triangularView<Eigen::Upper>();
  Eigen::VectorXd mu = trailing_row_norms(r);
  for (Eigen::Index k = 0; k < 5; ++k) {
    double acc = 0.0;
    for (Eigen::Index j = k; j < 5; ++j) acc += r(k, j) * r(k, j);
    CHECK(mu[k] == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
  }
}

TEST_CASE("rank-deficient pivoted QR has tiny trailing rows") {
  Eigen::MatrixXd a = oracle::random_matrix(4, 2, 11) * oracle::random_matrix(2, 4, 12);
  PivotedQrResult qr = pivoted_qr(a);
  Eigen::VectorXd mu = trailing_row_norms(qr.R);
  CHECK(mu[2] < 1e-10);
  CHECK(mu[3] < 1e-10);
  CHECK(mu[0] > 1e-2);
}

TEST_CASE("floored symmetric inverse matches the true inverse when PD") {
  Eigen::MatrixXd m = oracle::random_matrix(4, 4, 77);
  Eigen::MatrixXd a = m * m.transpose() + Eigen::MatrixXd::Identity(4, 4);
  CHECK((floored_sym_inverse(a) - a.inverse()).norm() < 1e-8);
  Eigen::MatrixXd s = floored_sym_inv_sqrt(a);
  CHECK((s * a * s.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("flooring keeps singular matrices invertible and bounded") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 0) = 4.0;  // rank one, trace 4
  Eigen::MatrixXd inv = floored_sym_inverse(a);
  CHECK(inv.allFinite());
  // Floor = 1e-8 * trace / d bounds the blown-up directions.
  CHECK(inv.norm() < 2.0 / (1e-8 * 4.0 / 3.0));
  CHECK(inv(0, 0) == doctest::Approx(0.25).epsilon(1e-6));

  Eigen::MatrixXd floored = floor_psd(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(floored);
  CHECK(es.eigenvalues().minCoeff() >= 1e-8 * 4.0 / 3.0 * (1.0 - 1e-12));
}
