#pragma once

#include <Eigen/Core>
#include <vector>

#include "tvvecm/kernel.hpp"
#include "tvvecm/panel.hpp"

namespace tvvecm {

// Penalty chi_T = (log(log(Th))/3)(h^4 + h^2 sqrt(log T/(Th)) + log T/(Th)).
double chi_penalty(Eigen::Index T, double h);

// Threshold w_T = (log T/(Th)) log(log(Th)).
double rank_threshold(Eigen::Index T, double h);

struct LagSelection {
  int max_lag = 0;
  std::vector<double> rss;       // per candidate p = 1..P
  std::vector<double> ic;
  std::vector<double> chi;       // penalty evaluated at that candidate's bandwidth
  std::vector<double> h_per_candidate;
  int p_hat = 1;
};

LagSelection select_lag(const Panel& panel, int max_lag,
                        const std::vector<double>& bandwidth_grid = {});

struct RankSelection {
  Eigen::VectorXd mu;       // trailing row norms, sorted nonincreasing
  double mu0 = 0.0;         // mock value mu_1 + w_T
  double w_threshold = 0.0;
  Eigen::VectorXd ratios;   // criterion value per candidate r = 0..d-1
  int r_hat = 0;
};

// Decision rule applied to the grid-averaged Pi matrix.
RankSelection rank_decision(const Eigen::MatrixXd& pibar, Eigen::Index T, double h);

RankSelection select_rank(const Panel& panel, int p, const KernelConfig& cfg);

}  // namespace tvvecm
