#pragma once

#include <Eigen/Core>

namespace tvvecm {

enum class KernelType { Epanechnikov };

struct KernelConfig {
  KernelType kernel = KernelType::Epanechnikov;
  double h = 0.3;  // bandwidth in rescaled time, (0, 1]
};

// Kernel-derived constants: c2 = int u^2 K(u) du, v0 = int K(u)^2 du,
// cb = int_0^2 (int_{-1}^{1-v} K(u)K(u+v) du)^2 dv.
struct KernelConstants {
  double c2 = 0.0;
  double v0 = 0.0;
  double cb = 0.0;
};

double kernel_eval(double u, const KernelConfig& cfg = {});

// Constants computed once by adaptive quadrature (abs tol 1e-10), cached.
KernelConstants kernel_constants(const KernelConfig& cfg = {});

// Local-linear weights w_t(tau) over the supplied grid of time points,
// normalized so that mean(w) = 1 and mean(w * (tau_t - tau)/h) = 0.
// Throws DegenerateWindow when the window cannot identify a slope.
Eigen::VectorXd local_linear_weights_at(const Eigen::VectorXd& taus, double tau,
                                        const KernelConfig& cfg);

// Spec'd convenience over the canonical grid tau_t = t/T, t = 1..T.
Eigen::VectorXd local_linear_weights(double tau, double h, int T);

}  // namespace tvvecm
