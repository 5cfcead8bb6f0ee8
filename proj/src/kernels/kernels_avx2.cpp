#include "capdens/kernels.hpp"

#ifndef CAPDENS_NO_AVX2
#include <immintrin.h>

namespace capdens::kern {
namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  __m256d acc = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s2 = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_avx2(const double* x, double b, double* y, std::size_t n) {
  __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void hadamard_avx2(const double* x, const double* y, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void csr_matvec_avx2(const int32_t* row_ptr, const int32_t* cols, const double* vals,
                     std::size_t rows, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    int32_t k = row_ptr[r];
    const int32_t end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s2 = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
    for (; k < end; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace

namespace detail {
const Kernels avx2_kernels = {dot_avx2, axpy_avx2, xpby_avx2, hadamard_avx2, csr_matvec_avx2};
}

}  // namespace capdens::kern

#else

namespace capdens::kern::detail {
const Kernels avx2_kernels = {nullptr, nullptr, nullptr, nullptr, nullptr};
}

#endif
