#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tvvecm/panel.hpp"

namespace tvvecm {

enum class DgpKind { Dgp1, Dgp2, Stability };

struct DgpSpec {
  DgpKind kind = DgpKind::Dgp1;
  Eigen::Index T = 400;
  int burn_in = 200;
  double b = 0.0;          // stability DGP local-alternative scale
  double h_for_dt = 0.0;   // bandwidth entering d_T; 0 selects 1.0 * T^{-1/5}
  // Test hooks: force omega = I / Gamma_1 = 0 in the simulated dynamics.
  bool omega_identity = false;
  bool gamma_zero = false;
};

// True parameter paths of the simulated designs (d = 2 throughout).
Eigen::Matrix2d dgp_gamma1(double tau);
Eigen::Matrix2d dgp_omega(double tau);
Eigen::Vector2d dgp1_alpha(double tau);
Eigen::Vector2d dgp_beta();
Eigen::Vector2d stability_alpha(double tau, double b, double d_t);

Panel simulate_path(const DgpSpec& spec, std::uint64_t seed);

struct McConfig {
  int reps = 200;
  std::uint64_t seed = 1;
  bool cv_bandwidth = true;     // false: fixed h = bandwidth_alpha * T^{-1/5}
  double bandwidth_alpha = 1.0;
  int bootstrap_B = 199;
  int threads = 1;
};

struct McReport {
  std::string experiment;
  int reps = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  // cell key -> value, e.g. "dgp1/T=400/p=2" -> fraction.
  std::map<std::string, double> cells;
};

McReport run_lag_table(const McConfig& cfg, const std::vector<DgpKind>& kinds,
                       const std::vector<Eigen::Index>& sizes, int max_lag = 4);

McReport run_rank_table(const McConfig& cfg, const std::vector<DgpKind>& kinds,
                        const std::vector<Eigen::Index>& sizes, int max_lag = 4);

McReport run_rmse_coverage(const McConfig& cfg, const std::vector<Eigen::Index>& sizes);

McReport run_size_power(const McConfig& cfg, const std::vector<double>& b_values,
                        const std::vector<double>& bandwidth_alphas,
                        const std::vector<Eigen::Index>& sizes,
                        const std::vector<double>& levels = {0.05, 0.10});

}  // namespace tvvecm
