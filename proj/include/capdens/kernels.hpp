#pragma once

#include <cstdint>
#include <span>
#include <string>

// Dense inner-loop kernels used by the iterative solvers. Each kernel has a
// scalar reference implementation and a SIMD variant; the active backend is
// chosen once at startup from CPU capabilities and can be overridden for
// equivalence testing. All kernels are pure and deterministic for a fixed
// backend.

namespace capdens::kern {

enum class Backend { scalar, avx2 };

/// Backend selected at process start (best supported by the CPU).
Backend active_backend();

/// Force a backend; throws if unsupported on this machine.
void set_backend(Backend b);

bool avx2_supported();

const char* backend_name(Backend b);

struct Kernels {
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] = x[i] + b*y[i]   (CG direction update)
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // z[i] = x[i]*y[i]
  void (*hadamard)(const double* x, const double* y, double* z, std::size_t n);
  // y = A*x for CSR (diagonal stored in vals like any entry)
  void (*csr_matvec)(const int32_t* row_ptr, const int32_t* cols, const double* vals,
                     std::size_t rows, const double* x, double* y);
};

const Kernels& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void xpby(std::span<const double> x, double b, std::span<double> y) {
  active().xpby(x.data(), b, y.data(), x.size());
}
inline void hadamard(std::span<const double> x, std::span<const double> y, std::span<double> z) {
  active().hadamard(x.data(), y.data(), z.data(), x.size());
}

namespace detail {
extern const Kernels scalar_kernels;
extern const Kernels avx2_kernels;  // entries null when built without AVX2
}  // namespace detail

}  // namespace capdens::kern
