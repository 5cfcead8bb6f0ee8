#include "capdens/kernels.hpp"

namespace capdens::kern {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void hadamard_scalar(const double* x, const double* y, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void csr_matvec_scalar(const int32_t* row_ptr, const int32_t* cols, const double* vals,
                       std::size_t rows, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace

namespace detail {
const Kernels scalar_kernels = {dot_scalar, axpy_scalar, xpby_scalar, hadamard_scalar,
                                csr_matvec_scalar};
}

}  // namespace capdens::kern
