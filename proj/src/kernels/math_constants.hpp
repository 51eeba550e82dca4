#pragma once

#include <cstdint>

// Constants shared by the scalar and SIMD ln() implementations. Both paths
// must evaluate the exact same operation tree over these values; any edit
// here changes both sides at once.

namespace dcsim::kernels::detail {

// Polynomial coefficients for ln() on [sqrt(1/2), sqrt(2)) (fdlibm scheme:
// s = f/(2+f), ln(1+f) = f - hfsq + s*(hfsq + R(z)) with z = s*s).
inline constexpr double kLg1 = 6.666666666666735130e-01;
inline constexpr double kLg2 = 3.999999999940941908e-01;
inline constexpr double kLg3 = 2.857142874366239149e-01;
inline constexpr double kLg4 = 2.222219843214978396e-01;
inline constexpr double kLg5 = 1.818357216161805012e-01;
inline constexpr double kLg6 = 1.531383769920937332e-01;
inline constexpr double kLg7 = 1.479819860511658591e-01;

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

inline constexpr std::uint64_t kMantissaMask = 0x000FFFFFFFFFFFFFull;
inline constexpr std::uint64_t kOneBits = 0x3FF0000000000000ull;  // 1.0
inline constexpr std::uint64_t kSqrt2Bits = 0x3FF6A09E667F3BCDull;

// SplitMix64 output-function multipliers.
inline constexpr std::uint64_t kMixMul1 = 0xBF58476D1CE4E5B9ull;
inline constexpr std::uint64_t kMixMul2 = 0x94D049BB133111EBull;

// 2^52 exponent pattern: OR-ing 52 low bits under it yields 2^52 + v.
inline constexpr std::uint64_t kExp52Bits = 0x4330000000000000ull;
inline constexpr double kTwo52 = 4503599627370496.0;     // 2^52
// 1.5 * 2^52, used to convert small signed int64 lanes to double.
inline constexpr std::uint64_t kMagicI64Bits = 0x4338000000000000ull;
inline constexpr double kMagicI64 = 6755399441055744.0;  // 1.5 * 2^52

}  // namespace dcsim::kernels::detail
