#include "tvvecm/panel.hpp"

#include "tvvecm/errors.hpp"

namespace tvvecm {

RegressorFrame build_regressors(const Panel& panel, int p) {
  const auto T = panel.T();
  const auto d = panel.d();
  if (p < 1) throw RankOutOfRange("build_regressors: p must be >= 1");
  if (T <= p + 10) {
    throw TooFewObservations("build_regressors: need T > p + 10, got T=" +
                             std::to_string(T) + ", p=" + std::to_string(p));
  }

  const int t0 = p + 1;
  const auto n = T - t0 + 1;
  RegressorFrame frame;
  frame.t0 = t0;
  frame.p = p;
  frame.dy.resize(n, d);
  frame.hreg.resize(n, d * p);
  frame.taus.resize(n);

  // 1-based observation index t = t0 + k; values row t is panel row t - 1.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index t = t0 + k;
    frame.taus[k] = static_cast<double>(t) / static_cast<double>(T);
    frame.dy.row(k) = panel.values.row(t - 1) - panel.values.row(t - 2);
    frame.hreg.row(k).head(d) = panel.values.row(t - 2);
    for (int j = 1; j < p; ++j) {
      frame.hreg.row(k).segment(d * j, d) =
          panel.values.row(t - 1 - j) - panel.values.row(t - 2 - j);
    }
  }
  return frame;
}

}  // namespace tvvecm
