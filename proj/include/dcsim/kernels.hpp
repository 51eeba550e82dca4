#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference implementation and an AVX2 variant selected at runtime; the two
// are required to produce bit-identical output (enforced by tests), so the
// choice of backend never changes simulation results.

namespace dcsim::kernels {

enum class Backend { Auto, Scalar, Avx2 };

inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

struct KernelTable {
  // out[i] = -ln(U) with U in (0,1) drawn from stream keys[i] at position `slot`.
  // Unit-mean exponential, i.e. a Rayleigh power fading gain.
  void (*exp_gains)(const std::uint64_t* keys, std::uint64_t slot, double* out, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*vec_mul)(const double* a, const double* b, double* out, std::size_t n);
  // acc[i] += x[i]
  void (*vec_acc)(double* acc, const double* x, std::size_t n);
  // out[i] = a[i] + b[i]
  void (*vec_add)(const double* a, const double* b, double* out, std::size_t n);
  // x[i] *= s
  void (*vec_scale)(double* x, double s, std::size_t n);
  // out[i] = ln(x[i]); x must be positive, finite and normal
  void (*vlog)(const double* x, double* out, std::size_t n);
  // out[i] = coeff * ln(1 + p[i] / (noise + tier_sum[i] - p[i]))
  // tier_sum[i] must include p[i] as one of its addends.
  void (*link_rates)(const double* p, const double* tier_sum, double noise, double coeff, double* out, std::size_t n);
  // Index of the first maximum of num[i]/den[i]; kNoIndex when n == 0.
  std::size_t (*ratio_argmax)(const double* num, const double* den, std::size_t n);
};

const KernelTable& scalar();
const KernelTable* avx2();  // nullptr when the build or CPU lacks AVX2
bool cpu_supports_avx2();

void set_backend(Backend b);
Backend active_backend();
std::string_view backend_name();
const KernelTable& active();

}  // namespace dcsim::kernels
