#include "dcsim/kernels.hpp"

#include <stdexcept>

namespace dcsim::kernels {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable* g_active = nullptr;

const KernelTable* resolve(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &scalar();
    case Backend::Avx2:
      return avx2();
    case Backend::Auto:
      break;
  }
  const KernelTable* t = avx2();
  return t != nullptr ? t : &scalar();
}

}  // namespace

void set_backend(Backend b) {
  const KernelTable* t = resolve(b);
  if (t == nullptr) throw std::runtime_error("avx2 kernels are not available on this machine");
  g_active = t;
}

const KernelTable& active() {
  if (g_active == nullptr) g_active = resolve(Backend::Auto);
  return *g_active;
}

Backend active_backend() { return &active() == &scalar() ? Backend::Scalar : Backend::Avx2; }

std::string_view backend_name() { return active_backend() == Backend::Scalar ? "scalar" : "avx2"; }

}  // namespace dcsim::kernels
