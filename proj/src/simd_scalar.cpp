#include "tvvecm/simd.hpp"

#include <cmath>

namespace tvvecm::simd {

void epanechnikov_batch_scalar(const double* u, double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double x = u[i];
    w[i] = std::fabs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
  }
}

namespace {

using BatchFn = void (*)(const double*, double*, std::size_t);

BatchFn resolve() {
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return epanechnikov_batch_avx2;
#endif
  return epanechnikov_batch_scalar;
}

const char* resolve_name() {
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return "avx2";
#endif
  return "scalar";
}

}  // namespace

void epanechnikov_batch(const double* u, double* w, std::size_t n) {
  static const BatchFn fn = resolve();
  fn(u, w, n);
}

const char* active_backend() {
  static const char* name = resolve_name();
  return name;
}

}  // namespace tvvecm::simd
