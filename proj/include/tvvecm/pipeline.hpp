#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tvvecm/cointegration.hpp"
#include "tvvecm/io.hpp"
#include "tvvecm/local_linear.hpp"
#include "tvvecm/selection.hpp"
#include "tvvecm/stability.hpp"

namespace tvvecm {

struct RunConfig {
  CsvOptions csv;
  int p = 0;                 // 0: choose by the information criterion
  int max_lag = 4;
  int r = -1;                // -1: choose by the ratio rule
  double h = 0.0;            // 0: leave-one-out cross-validation
  double ci_level = 0.95;
  bool run_stability = false;
  int bootstrap_B = 399;
  double stability_level = 0.05;
  std::uint64_t seed = 1;
  int threads = 0;           // 0: TVVECM_THREADS env var, else 1
  std::string paths_csv;     // when nonempty, coefficient paths go here
};

int resolve_threads(int requested);

struct RunResult {
  nlohmann::json report;
  LocalLinearFit fit;
  CiBands bands;
  LagSelection lag;          // populated only when p was selected
  RankSelection rank;        // populated only when r was selected
  std::optional<CointegrationFit> coin;
  std::optional<StabilityReport> stability;
};

RunResult run_pipeline(const Panel& panel, const RunConfig& cfg);

}  // namespace tvvecm
