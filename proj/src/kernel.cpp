#include "tvvecm/kernel.hpp"

#include <cmath>
#include <functional>

#include "tvvecm/errors.hpp"
#include "tvvecm/simd.hpp"

namespace tvvecm {

double kernel_eval(double u, const KernelConfig&) {
  return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

namespace {

// Adaptive Simpson with absolute tolerance.
double simpson(const std::function<double(double)>& f, double a, double m, double b,
               double fa, double fm, double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

KernelConstants compute_constants() {
  const double tol = 1e-10;
  auto k = [](double u) { return kernel_eval(u); };
  KernelConstants c;
  c.c2 = integrate([&](double u) { return u * u * k(u); }, -1.0, 1.0, tol);
  c.v0 = integrate([&](double u) { return k(u) * k(u); }, -1.0, 1.0, tol);
  c.cb = integrate(
      [&](double v) {
        double inner = integrate([&](double u) { return k(u) * k(u + v); }, -1.0,
                                 1.0 - v, tol);
        return inner * inner;
      },
      0.0, 2.0, tol);
  return c;
}

}  // namespace

KernelConstants kernel_constants(const KernelConfig&) {
  static const KernelConstants c = compute_constants();
  return c;
}

Eigen::VectorXd local_linear_weights_at(const Eigen::VectorXd& taus, double tau,
                                        const KernelConfig& cfg) {
  const auto n = taus.size();
  const double h = cfg.h;
  Eigen::VectorXd u = (taus.array() - tau) / h;
  Eigen::VectorXd k(n);
  simd::epanechnikov_batch(u.data(), k.data(), static_cast<std::size_t>(n));

  const double nh = static_cast<double>(n) * h;
  double p0 = k.sum() / nh;
  double p1 = k.dot(u) / nh;
  double p2 = k.dot(u.cwiseProduct(u).eval()) / nh;

  double denom = p0 * p2 - p1 * p1;
  if (!(denom > 1e-12)) {
    throw DegenerateWindow("local_linear_weights: P0*P2 - P1^2 <= floor at tau=" +
                           std::to_string(tau) + ", h=" + std::to_string(h));
  }
  return (k.array() * (p2 - u.array() * p1) / (h * denom)).matrix();
}

Eigen::VectorXd local_linear_weights(double tau, double h, int T) {
  Eigen::VectorXd taus(T);
  for (int t = 1; t <= T; ++t) taus[t - 1] = static_cast<double>(t) / T;
  KernelConfig cfg;
  cfg.h = h;
  return local_linear_weights_at(taus, tau, cfg);
}

}  // namespace tvvecm
