#include <bit>
#include <cstddef>
#include <cstdint>

#include "dcsim/kernels.hpp"
#include "dcsim/rng.hpp"
#include "math_constants.hpp"

// Scalar reference kernels. The AVX2 variants in kernels_avx2.cpp replicate
// these operation trees lane-wise and must stay bit-identical; keep the two
// files in sync when touching any arithmetic.

namespace dcsim::kernels {
namespace {

using namespace detail;

// Natural log for positive, finite, normal x. fdlibm argument reduction:
// x = 2^k * m with m in [sqrt(1/2), sqrt(2)), then a rational-series
// approximation of ln(m). Accurate to about 1 ulp.
inline double log_core(double x) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  std::int64_t k = static_cast<std::int64_t>(bits >> 52) - 1023;
  double m = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);  // [1, 2)
  const double sqrt2 = std::bit_cast<double>(kSqrt2Bits);
  if (m >= sqrt2) {
    m = m * 0.5;
    k += 1;
  }
  const double f = m - 1.0;  // exact: m in [0.5, 2)
  const double s = f / (2.0 + f);
  const double z = s * s;
  const double w = z * z;
  const double t1 = w * (kLg2 + w * (kLg4 + w * kLg6));
  const double t2 = z * (kLg1 + w * (kLg3 + w * (kLg5 + w * kLg7)));
  const double r = t2 + t1;
  const double hfsq = 0.5 * f * f;
  const double dk = static_cast<double>(k);
  return dk * kLn2Hi - ((hfsq - (s * (hfsq + r) + dk * kLn2Lo)) - f);
}

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= kMixMul1;
  z ^= z >> 27;
  z *= kMixMul2;
  z ^= z >> 31;
  return z;
}

// (0,1) uniform from 64 random bits: top 52 bits, centered on the cell.
inline double to_unit(std::uint64_t z) {
  const double v = static_cast<double>(z >> 12);  // exact, v < 2^52
  return (v + 0.5) * 0x1.0p-52;
}

void exp_gains(const std::uint64_t* keys, std::uint64_t slot, double* out, std::size_t n) {
  const std::uint64_t offset = slot * rng::kGolden;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = to_unit(mix64(keys[i] + offset));
    out[i] = -log_core(u);
  }
}

void vec_mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vec_acc(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void vec_add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void vec_scale(double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void vlog(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = log_core(x[i]);
}

void link_rates(const double* p, const double* tier_sum, double noise, double coeff, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double interference = tier_sum[i] - p[i];  // >= 0: tier_sum contains p[i]
    const double sinr = p[i] / (noise + interference);
    out[i] = coeff * log_core(1.0 + sinr);
  }
}

std::size_t ratio_argmax(const double* num, const double* den, std::size_t n) {
  if (n == 0) return kNoIndex;
  std::size_t best = 0;
  double best_metric = num[0] / den[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double metric = num[i] / den[i];
    if (metric > best_metric) {  // strict: ties keep the lowest index
      best_metric = metric;
      best = i;
    }
  }
  return best;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{
      exp_gains, vec_mul, vec_acc, vec_add, vec_scale, vlog, link_rates, ratio_argmax,
  };
  return table;
}

}  // namespace dcsim::kernels
