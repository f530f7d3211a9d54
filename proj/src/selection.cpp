#include "tvvecm/selection.hpp"

#include <algorithm>
#include <cmath>

#include "tvvecm/errors.hpp"
#include "tvvecm/linalg.hpp"
#include "tvvecm/local_linear.hpp"

namespace tvvecm {

namespace {

void check_penalty_domain(Eigen::Index T, double h) {
  const double th = static_cast<double>(T) * h;
  if (!(th > std::exp(1.0))) {
    throw InvalidPenalty("penalty needs T*h > e, got T*h=" + std::to_string(th));
  }
}

}  // namespace

double chi_penalty(Eigen::Index T, double h) {
  check_penalty_domain(T, h);
  const double th = static_cast<double>(T) * h;
  const double logt = std::log(static_cast<double>(T));
  return (std::log(std::log(th)) / 3.0) *
         (std::pow(h, 4) + h * h * std::sqrt(logt / th) + logt / th);
}

double rank_threshold(Eigen::Index T, double h) {
  check_penalty_domain(T, h);
  const double th = static_cast<double>(T) * h;
  return (std::log(static_cast<double>(T)) / th) * std::log(std::log(th));
}

LagSelection select_lag(const Panel& panel, int max_lag,
                        const std::vector<double>& bandwidth_grid) {
  if (max_lag < 1) throw RankOutOfRange("select_lag: max_lag must be >= 1");
  const Eigen::Index T = panel.T();
  std::vector<double> grid =
      bandwidth_grid.empty() ? default_bandwidth_grid(T) : bandwidth_grid;

  LagSelection sel;
  sel.max_lag = max_lag;
  // One penalty scale for every candidate, evaluated at the deterministic
  // rule-of-thumb bandwidth. Using each candidate's own CV bandwidth makes
  // the penalty nonmonotone in p (a misspecified small model often picks a
  // small h and a small penalty) and breaks the linear-in-p criterion shape.
  const double chi = chi_penalty(T, std::pow(static_cast<double>(T), -0.2));
  for (int p = 1; p <= max_lag; ++p) {
    double h = cv_bandwidth(panel, p, grid);
    KernelConfig cfg;
    cfg.h = h;
    LocalLinearFit fit = fit_paths(panel, p, cfg);

    // RSS on the common effective sample t = P+2..T so candidates compare
    // like with like.
    const int first_t = max_lag + 2;
    const Eigen::Index first_row = first_t - fit.frame.t0;
    if (first_row < 0 || first_row >= fit.residuals.rows()) {
      throw TooFewObservations("select_lag: common sample empty");
    }
    const Eigen::Index count = fit.residuals.rows() - first_row;
    double rss = fit.residuals.bottomRows(count).squaredNorm() /
                 static_cast<double>(count);

    sel.h_per_candidate.push_back(h);
    sel.rss.push_back(rss);
    sel.chi.push_back(chi);
    sel.ic.push_back(std::log(rss) + p * chi);
  }
  sel.p_hat = 1;
  for (int p = 2; p <= max_lag; ++p) {
    if (sel.ic[p - 1] < sel.ic[sel.p_hat - 1]) sel.p_hat = p;
  }
  return sel;
}

RankSelection rank_decision(const Eigen::MatrixXd& pibar, Eigen::Index T, double h) {
  const Eigen::Index d = pibar.rows();
  PivotedQrResult qr = pivoted_qr(pibar.transpose());
  Eigen::VectorXd mu = trailing_row_norms(qr.R);
  // Greedy pivoting guarantees monotone |diag(R)|, not monotone trailing row
  // norms; the ratio rule presumes a sorted sequence.
  std::sort(mu.data(), mu.data() + mu.size(), std::greater<double>());

  RankSelection sel;
  sel.w_threshold = rank_threshold(T, h);
  sel.mu = mu;
  sel.mu0 = mu[0] + sel.w_threshold;
  sel.ratios.resize(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const double num = r == 0 ? sel.mu0 : mu[r - 1];
    const double den = mu[r];
    sel.ratios[r] =
        num >= sel.w_threshold ? num / std::max(den, 1e-300) : 1.0;
  }
  sel.r_hat = 0;
  for (Eigen::Index r = 1; r < d; ++r) {
    if (sel.ratios[r] > sel.ratios[sel.r_hat]) sel.r_hat = static_cast<int>(r);
  }
  return sel;
}

RankSelection select_rank(const Panel& panel, int p, const KernelConfig& cfg) {
  LocalLinearFit fit = fit_paths(panel, p, cfg);
  return rank_decision(fit.ybar_pi, panel.T(), cfg.h);
}

}  // namespace tvvecm
