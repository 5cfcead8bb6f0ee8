#include "capdens/kernels.hpp"

#include <stdexcept>

namespace capdens::kern {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend pick_default() {
  if (detail::avx2_kernels.dot != nullptr && cpu_has_avx2()) return Backend::avx2;
  return Backend::scalar;
}

Backend& backend_slot() {
  static Backend b = pick_default();
  return b;
}

}  // namespace

bool avx2_supported() { return detail::avx2_kernels.dot != nullptr && cpu_has_avx2(); }

Backend active_backend() { return backend_slot(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw std::runtime_error("avx2 backend not supported on this machine");
  backend_slot() = b;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

const Kernels& active() {
  return backend_slot() == Backend::avx2 ? detail::avx2_kernels : detail::scalar_kernels;
}

}  // namespace capdens::kern
