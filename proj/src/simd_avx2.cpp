#include "tvvecm/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace tvvecm::simd {

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

// Same operation order as the scalar reference (x*x, 1-x^2, 0.75*., mask),
// no FMA contraction, so results are bit-identical lane by lane.
void epanechnikov_batch_avx2(const double* u, double* w, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d c = _mm256_set1_pd(0.75);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(u + i);
    __m256d sq = _mm256_mul_pd(x, x);
    __m256d val = _mm256_mul_pd(c, _mm256_sub_pd(one, sq));
    __m256d inside = _mm256_cmp_pd(_mm256_and_pd(x, abs_mask), one, _CMP_LE_OQ);
    _mm256_storeu_pd(w + i, _mm256_and_pd(val, inside));
  }
  if (i < n) epanechnikov_batch_scalar(u + i, w + i, n - i);
}

}  // namespace tvvecm::simd

#endif
