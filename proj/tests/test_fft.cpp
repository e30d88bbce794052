#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "kloostat/fft.hpp"
#include "kloostat/prime.hpp"

using namespace kloostat;

namespace {

// O(N^2) oracle, long double accumulation.
std::vector<cplx> dft_direct(const std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::size_t j = 0; j < n; ++j) {
      const long double ang = sign * 2.0L * 3.141592653589793238462643383279502884L *
                              static_cast<long double>(j * k % n) / static_cast<long double>(n);
      acc += std::complex<long double>(x[j].real(), x[j].imag()) *
             std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<cplx> x(n);
  for (auto& v : x) {
    const double re = static_cast<double>(gen()) / static_cast<double>(UINT64_MAX) * 2.0 - 1.0;
    const double im = static_cast<double>(gen()) / static_cast<double>(UINT64_MAX) * 2.0 - 1.0;
    v = {re, im};
  }
  return x;
}

double max_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("pow2 fft matches direct dft") {
  for (std::size_t n : {2, 4, 8, 64, 256}) {
    auto x = random_signal(n, 1000 + n);
    auto want = dft_direct(x, -1);
    auto got = x;
    fft_pow2(got, -1);
    CHECK(max_err(got, want) < 1e-12 * static_cast<double>(n));
  }
}

TEST_CASE("pow2 fft round trip") {
  auto x = random_signal(512, 7);
  auto y = x;
  fft_pow2(y, -1);
  fft_pow2(y, +1);
  for (auto& v : y) v /= 512.0;
  CHECK(max_err(x, y) < 1e-13);
}

TEST_CASE("pow2 fft rejects non-power sizes") {
  std::vector<cplx> x(6);
  CHECK_THROWS_AS(fft_pow2(x, -1), validation_error);
}

TEST_CASE("bluestein matches direct dft on awkward lengths") {
  for (std::size_t n : {2, 3, 5, 7, 12, 31, 97, 101, 360, 1009}) {
    auto x = random_signal(n, 40 + n);
    for (int sign : {-1, +1}) {
      auto want = dft_direct(x, sign);
      auto got = dft_bluestein(x, sign);
      INFO("n = " << n << " sign = " << sign);
      CHECK(max_err(got, want) < 1e-10 * static_cast<double>(n));
    }
  }
}

TEST_CASE("rader matches direct dft on prime lengths") {
  for (std::size_t n : {3, 5, 7, 13, 101, 1009}) {
    auto x = random_signal(n, 90 + n);
    const std::uint64_t g = find_generator(n);
    for (int sign : {-1, +1}) {
      auto want = dft_direct(x, sign);
      auto got = dft_rader(x, sign, g);
      INFO("n = " << n << " sign = " << sign);
      CHECK(max_err(got, want) < 1e-10 * static_cast<double>(n));
    }
  }
}

TEST_CASE("rader rejects composite lengths and non-generators") {
  std::vector<cplx> x(9);
  CHECK_THROWS_AS(dft_rader(x, -1, 2), validation_error);
  std::vector<cplx> y(7);
  CHECK_THROWS_AS(dft_rader(y, -1, 2), validation_error);  // ord_7(2) = 3
}

TEST_CASE("bluestein and rader agree") {
  for (std::size_t n : {11, 127, 10007}) {
    auto x = random_signal(n, n);
    auto a = dft_bluestein(x, +1);
    auto b = dft_rader(x, +1, find_generator(n));
    CHECK(max_err(a, b) < transform_err_bound(n));
  }
}

TEST_CASE("cyclic convolution matches direct computation") {
  std::mt19937_64 gen(3);
  for (std::size_t n : {1, 2, 3, 8, 17, 100}) {
    auto a = random_signal(n, 11 * n + 1);
    auto b = random_signal(n, 13 * n + 2);
    std::vector<cplx> want(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) want[(i + j) % n] += a[i] * b[j];
    auto got = cyclic_convolve(a, b);
    CHECK(max_err(got, want) < 1e-11 * static_cast<double>(n + 1));
  }
}

TEST_CASE("cyclic convolution input validation") {
  std::vector<cplx> a(4), b(5);
  CHECK_THROWS_AS(cyclic_convolve(a, b), validation_error);
  CHECK_THROWS_AS(cyclic_convolve(std::vector<cplx>{}, std::vector<cplx>{}), validation_error);
}
