#pragma once

#include <cstddef>

// Batch kernel-weight evaluation. The local-linear estimators evaluate
// K((tau_t - tau)/h) over every observation window at every grid point,
// which is the one data-parallel hot loop in the library. The scalar
// routine is the reference; the AVX2 variant performs the identical
// multiply/subtract sequence lane-wise so outputs are bit-identical,
// and is selected at runtime from CPU capabilities.

namespace tvvecm::simd {

// w[i] = 0.75 * (1 - u[i]^2) for |u[i]| <= 1, else 0.
void epanechnikov_batch(const double* u, double* w, std::size_t n);

// Reference implementation, always available.
void epanechnikov_batch_scalar(const double* u, double* w, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void epanechnikov_batch_avx2(const double* u, double* w, std::size_t n);
bool avx2_available();
#endif

// Name of the backend the dispatcher resolved to ("avx2" or "scalar").
const char* active_backend();

}  // namespace tvvecm::simd
