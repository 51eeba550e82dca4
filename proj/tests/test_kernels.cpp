#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "dcsim/kernels.hpp"
#include "dcsim/rng.hpp"
#include "doctest.h"

using namespace dcsim;

namespace {

std::uint64_t ulp_distance(double a, double b) {
  const auto ia = std::bit_cast<std::int64_t>(a);
  const auto ib = std::bit_cast<std::int64_t>(b);
  return static_cast<std::uint64_t>(ia > ib ? ia - ib : ib - ia);
}

std::vector<double> random_positive(std::uint64_t key, std::size_t n, int min_exp, int max_exp) {
  rng::Stream s(key);
  std::vector<double> out(n);
  for (auto& v : out) {
    const double mant = 1.0 + s.next_unit();
    const int e = min_exp + static_cast<int>(s.next_below(static_cast<std::uint64_t>(max_exp - min_exp + 1)));
    v = std::ldexp(mant, e);
  }
  return out;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("vlog matches std::log closely over a wide range") {
  const auto& k = kernels::scalar();
  auto xs = random_positive(42, 20000, -60, 60);
  xs.push_back(1.0);
  xs.push_back(2.0);
  xs.push_back(0.5);
  xs.push_back(std::numbers::sqrt2);
  xs.push_back(std::nextafter(std::numbers::sqrt2, 0.0));
  xs.push_back(1.0 + 1e-14);
  std::vector<double> got(xs.size());
  k.vlog(xs.data(), got.data(), xs.size());
  std::uint64_t worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ref = std::log(xs[i]);
    worst = std::max(worst, ulp_distance(got[i], ref));
  }
  CHECK(worst <= 4);
  // exact at 1: needed so a zero-SINR link yields exactly zero rate
  double one = 1.0, out = -1.0;
  k.vlog(&one, &out, 1);
  CHECK(out == 0.0);
}

TEST_CASE("exp_gains draws unit-mean positive gains, deterministically") {
  const auto& k = kernels::scalar();
  const std::size_t n = 100000;
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = rng::stream_key(7, i);
  std::vector<double> g(n), g2(n);
  k.exp_gains(keys.data(), 3, g.data(), n);
  k.exp_gains(keys.data(), 3, g2.data(), n);
  CHECK(bit_equal(g, g2));

  double sum = 0.0;
  double mn = 1e300;
  for (double v : g) {
    sum += v;
    mn = std::min(mn, v);
  }
  CHECK(mn > 0.0);
  CHECK(sum / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.02));

  // a different slot gives a different draw
  k.exp_gains(keys.data(), 4, g2.data(), n);
  CHECK_FALSE(bit_equal(g, g2));
}

TEST_CASE("ratio_argmax picks the first maximum") {
  const auto& k = kernels::scalar();
  const double num[] = {2.0, 4.0, 4.0, 1.0, 4.0};
  const double den[] = {1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(k.ratio_argmax(num, den, 5) == 1);
  const double den2[] = {1.0, 4.0, 2.0, 0.5, 8.0};
  CHECK(k.ratio_argmax(num, den2, 5) == 0);  // metrics 2,1,2,2,0.5 -> first 2
  CHECK(k.ratio_argmax(num, den, 0) == kernels::kNoIndex);
  CHECK(k.ratio_argmax(num, den, 1) == 0);
}

TEST_CASE("scalar and avx2 backends are bit-identical") {
  const auto* v = kernels::avx2();
  if (v == nullptr) {
    MESSAGE("avx2 unavailable; equivalence not exercised");
    return;
  }
  const auto& s = kernels::scalar();

  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4}, std::size_t{5},
                        std::size_t{7}, std::size_t{8}, std::size_t{9}, std::size_t{64}, std::size_t{1001}}) {
    CAPTURE(n);
    auto a = random_positive(n * 11 + 1, n, -30, 30);
    auto b = random_positive(n * 13 + 2, n, -30, 30);
    std::vector<double> out_s(n), out_v(n);

    s.vec_mul(a.data(), b.data(), out_s.data(), n);
    v->vec_mul(a.data(), b.data(), out_v.data(), n);
    CHECK(bit_equal(out_s, out_v));

    s.vec_add(a.data(), b.data(), out_s.data(), n);
    v->vec_add(a.data(), b.data(), out_v.data(), n);
    CHECK(bit_equal(out_s, out_v));

    auto acc_s = a, acc_v = a;
    s.vec_acc(acc_s.data(), b.data(), n);
    v->vec_acc(acc_v.data(), b.data(), n);
    CHECK(bit_equal(acc_s, acc_v));

    auto sc_s = a, sc_v = a;
    s.vec_scale(sc_s.data(), 0.99, n);
    v->vec_scale(sc_v.data(), 0.99, n);
    CHECK(bit_equal(sc_s, sc_v));

    s.vlog(a.data(), out_s.data(), n);
    v->vlog(a.data(), out_v.data(), n);
    CHECK(bit_equal(out_s, out_v));

    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = rng::stream_key(99, i, n);
    s.exp_gains(keys.data(), 17, out_s.data(), n);
    v->exp_gains(keys.data(), 17, out_v.data(), n);
    CHECK(bit_equal(out_s, out_v));

    // link rates: tier_sum >= p by construction
    auto p = random_positive(n * 17 + 3, n, -90, -60);
    std::vector<double> tier(n);
    for (std::size_t i = 0; i < n; ++i) tier[i] = p[i] + (i % 3 == 0 ? 0.0 : p[(i + 1) % n]);
    s.link_rates(p.data(), tier.data(), 1e-10, 7213.475, out_s.data(), n);
    v->link_rates(p.data(), tier.data(), 1e-10, 7213.475, out_v.data(), n);
    CHECK(bit_equal(out_s, out_v));

    REQUIRE(s.ratio_argmax(a.data(), b.data(), n) == v->ratio_argmax(a.data(), b.data(), n));
  }

  // argmax ties across and within lanes
  std::vector<double> num(37, 1.0), den(37, 2.0);
  num[5] = 3.0;
  num[13] = 3.0;
  num[14] = 3.0;
  CHECK(s.ratio_argmax(num.data(), den.data(), num.size()) == 5);
  CHECK(v->ratio_argmax(num.data(), den.data(), num.size()) == 5);
}

TEST_CASE("backend selection") {
  kernels::set_backend(kernels::Backend::Scalar);
  CHECK(kernels::backend_name() == "scalar");
  kernels::set_backend(kernels::Backend::Auto);
  if (kernels::avx2() != nullptr) CHECK(kernels::backend_name() == "avx2");
}
