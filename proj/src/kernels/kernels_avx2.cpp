#include "dcsim/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstring>

#include "dcsim/rng.hpp"
#include "math_constants.hpp"

// AVX2 kernels. Lane arithmetic mirrors kernels_scalar.cpp operation for
// operation; remainders run through a padded vector so both backends share
// one algorithm per kernel. Results are bit-identical to the scalar path.

namespace dcsim::kernels {
namespace {

using namespace detail;

inline __m256i mullo64(__m256i a, __m256i b) {
  // low 64 bits of a*b from 32x32->64 partial products
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i ahi = _mm256_srli_epi64(a, 32);
  const __m256i bhi = _mm256_srli_epi64(b, 32);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(kMixMul1)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(kMixMul2)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

inline __m256d to_unit(__m256i z) {
  const __m256i v = _mm256_srli_epi64(z, 12);
  // exact int->double for v < 2^52
  const __m256d d = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(v, _mm256_set1_epi64x(static_cast<long long>(kExp52Bits)))),
      _mm256_set1_pd(kTwo52));
  return _mm256_mul_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)), _mm256_set1_pd(0x1.0p-52));
}

// exact int64 -> double for |k| < 2^51
inline __m256d i64_to_f64(__m256i k) {
  const __m256i shifted = _mm256_add_epi64(k, _mm256_set1_epi64x(static_cast<long long>(kMagicI64Bits)));
  return _mm256_sub_pd(_mm256_castsi256_pd(shifted), _mm256_set1_pd(kMagicI64));
}

inline __m256d log_core(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i k = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(static_cast<long long>(kMantissaMask))),
                      _mm256_set1_epi64x(static_cast<long long>(kOneBits))));
  const __m256d sqrt2 = _mm256_castsi256_pd(_mm256_set1_epi64x(static_cast<long long>(kSqrt2Bits)));
  const __m256d ge = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), ge);
  k = _mm256_sub_epi64(k, _mm256_castpd_si256(ge));  // mask lane == -1

  const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d z = _mm256_mul_pd(s, s);
  const __m256d w = _mm256_mul_pd(z, z);

  __m256d t1 = _mm256_mul_pd(w, _mm256_set1_pd(kLg6));
  t1 = _mm256_add_pd(_mm256_set1_pd(kLg4), t1);
  t1 = _mm256_mul_pd(w, t1);
  t1 = _mm256_add_pd(_mm256_set1_pd(kLg2), t1);
  t1 = _mm256_mul_pd(w, t1);

  __m256d t2 = _mm256_mul_pd(w, _mm256_set1_pd(kLg7));
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg5), t2);
  t2 = _mm256_mul_pd(w, t2);
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg3), t2);
  t2 = _mm256_mul_pd(w, t2);
  t2 = _mm256_add_pd(_mm256_set1_pd(kLg1), t2);
  t2 = _mm256_mul_pd(z, t2);

  const __m256d r = _mm256_add_pd(t2, t1);
  const __m256d hfsq = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), f), f);
  const __m256d dk = i64_to_f64(k);

  const __m256d inner =
      _mm256_add_pd(_mm256_mul_pd(s, _mm256_add_pd(hfsq, r)), _mm256_mul_pd(dk, _mm256_set1_pd(kLn2Lo)));
  return _mm256_sub_pd(_mm256_mul_pd(dk, _mm256_set1_pd(kLn2Hi)),
                       _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f));
}

inline __m256d exp_gain_lanes(__m256i keys, __m256i offset) {
  const __m256d u = to_unit(mix64(_mm256_add_epi64(keys, offset)));
  return _mm256_xor_pd(log_core(u), _mm256_set1_pd(-0.0));
}

void exp_gains(const std::uint64_t* keys, std::uint64_t slot, double* out, std::size_t n) {
  const __m256i offset = _mm256_set1_epi64x(static_cast<long long>(slot * rng::kGolden));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    _mm256_storeu_pd(out + i, exp_gain_lanes(k, offset));
  }
  if (i < n) {
    alignas(32) std::uint64_t kpad[4] = {1, 1, 1, 1};
    alignas(32) double opad[4];
    std::memcpy(kpad, keys + i, (n - i) * sizeof(std::uint64_t));
    _mm256_store_pd(opad, exp_gain_lanes(_mm256_load_si256(reinterpret_cast<const __m256i*>(kpad)), offset));
    std::memcpy(out + i, opad, (n - i) * sizeof(double));
  }
}

void vec_mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void vec_acc(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void vec_add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void vec_scale(double* x, double s, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), sv));
  for (; i < n; ++i) x[i] *= s;
}

void vlog(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log_core(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double xpad[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double opad[4];
    std::memcpy(xpad, x + i, (n - i) * sizeof(double));
    _mm256_store_pd(opad, log_core(_mm256_load_pd(xpad)));
    std::memcpy(out + i, opad, (n - i) * sizeof(double));
  }
}

inline __m256d rate_lanes(__m256d p, __m256d tier_sum, __m256d noise, __m256d coeff) {
  const __m256d interference = _mm256_sub_pd(tier_sum, p);
  const __m256d sinr = _mm256_div_pd(p, _mm256_add_pd(noise, interference));
  return _mm256_mul_pd(coeff, log_core(_mm256_add_pd(_mm256_set1_pd(1.0), sinr)));
}

void link_rates(const double* p, const double* tier_sum, double noise, double coeff, double* out, std::size_t n) {
  const __m256d nv = _mm256_set1_pd(noise);
  const __m256d cv = _mm256_set1_pd(coeff);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, rate_lanes(_mm256_loadu_pd(p + i), _mm256_loadu_pd(tier_sum + i), nv, cv));
  if (i < n) {
    alignas(32) double ppad[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double tpad[4] = {1.0, 1.0, 1.0, 1.0};
    alignas(32) double opad[4];
    std::memcpy(ppad, p + i, (n - i) * sizeof(double));
    std::memcpy(tpad, tier_sum + i, (n - i) * sizeof(double));
    _mm256_store_pd(opad, rate_lanes(_mm256_load_pd(ppad), _mm256_load_pd(tpad), nv, cv));
    std::memcpy(out + i, opad, (n - i) * sizeof(double));
  }
}

std::size_t ratio_argmax(const double* num, const double* den, std::size_t n) {
  if (n == 0) return kNoIndex;
  std::size_t best;
  double best_metric;
  std::size_t pos;
  if (n >= 4) {
    __m256d bv = _mm256_div_pd(_mm256_loadu_pd(num), _mm256_loadu_pd(den));
    __m256i bi = _mm256_setr_epi64x(0, 1, 2, 3);
    __m256i idx = _mm256_setr_epi64x(4, 5, 6, 7);
    const __m256i four = _mm256_set1_epi64x(4);
    for (pos = 4; pos + 4 <= n; pos += 4) {
      const __m256d m = _mm256_div_pd(_mm256_loadu_pd(num + pos), _mm256_loadu_pd(den + pos));
      const __m256d gt = _mm256_cmp_pd(m, bv, _CMP_GT_OQ);
      bv = _mm256_blendv_pd(bv, m, gt);
      bi = _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(bi), _mm256_castsi256_pd(idx), gt));
      idx = _mm256_add_epi64(idx, four);
    }
    alignas(32) double vals[4];
    alignas(32) std::int64_t idxs[4];
    _mm256_store_pd(vals, bv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), bi);
    best = static_cast<std::size_t>(idxs[0]);
    best_metric = vals[0];
    // lanes hold interleaved subsequences; ties resolve to the lowest index
    for (int lane = 1; lane < 4; ++lane) {
      const auto li = static_cast<std::size_t>(idxs[lane]);
      if (vals[lane] > best_metric || (vals[lane] == best_metric && li < best)) {
        best_metric = vals[lane];
        best = li;
      }
    }
  } else {
    best = 0;
    best_metric = num[0] / den[0];
    pos = 1;
  }
  for (; pos < n; ++pos) {
    const double metric = num[pos] / den[pos];
    if (metric > best_metric) {
      best_metric = metric;
      best = pos;
    }
  }
  return best;
}

}  // namespace

const KernelTable* avx2() {
  if (!cpu_supports_avx2()) return nullptr;
  static const KernelTable table{
      exp_gains, vec_mul, vec_acc, vec_add, vec_scale, vlog, link_rates, ratio_argmax,
  };
  return &table;
}

}  // namespace dcsim::kernels

#else  // !__AVX2__

namespace dcsim::kernels {
const KernelTable* avx2() { return nullptr; }
}  // namespace dcsim::kernels

#endif
