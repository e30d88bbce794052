#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/prime.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

/// Transforms use the convention X_k = sum_n x_n * exp(sign * 2*pi*i*n*k/N).
/// sign = -1 is the analysis direction, sign = +1 the synthesis direction;
/// no 1/N scaling is applied anywhere unless stated.

namespace detail {

inline constexpr long double pi_l = 3.141592653589793238462643383279502884L;

inline std::vector<cplx> twiddles(std::size_t n, int sign) {
  // One exact sin/cos per entry; cheaper incremental recurrences would leak
  // O(n*eps) into every butterfly.
  std::vector<cplx> w(n / 2);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const long double ang = static_cast<long double>(sign) * 2.0L * pi_l *
                            static_cast<long double>(j) / static_cast<long double>(n);
    w[j] = {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
  }
  return w;
}

}  // namespace detail

/// In-place iterative radix-2 transform; a.size() must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n < 2) return;
  if ((n & (n - 1)) != 0) throw validation_error("fft_pow2: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const std::vector<cplx> w = detail::twiddles(n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n / len;
    for (std::size_t blk = 0; blk < n; blk += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx t = a[blk + k + half] * w[k * step];
        a[blk + k + half] = a[blk + k] - t;
        a[blk + k] += t;
      }
    }
  }
}

/// Cyclic convolution of two equal-length sequences (any length), by
/// power-of-two padding and folding the linear result.
inline std::vector<cplx> cyclic_convolve(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n)
    throw validation_error("cyclic_convolve: sequences must be nonempty and equal-length");
  if (n == 1) return {a[0] * b[0]};

  const std::size_t len = next_pow2(2 * n - 1);
  std::vector<cplx> fa(len), fb(len);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft_pow2(fa, -1);
  fft_pow2(fb, -1);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  fft_pow2(fa, +1);
  const double inv = 1.0 / static_cast<double>(len);

  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx v = fa[j];
    if (j + n <= 2 * n - 2) v += fa[j + n];
    out[j] = v * inv;
  }
  return out;
}

/**
 * Bluestein chirp-z: a length-N transform for arbitrary N, carried by one
 * power-of-two convolution of length >= 2N-1.  The chirp exponents are
 * reduced mod 2N so the sin/cos arguments stay small for any N.
 */
inline std::vector<cplx> dft_bluestein(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0) throw validation_error("dft_bluestein: empty input");
  if (n == 1) return {x[0]};
  const std::size_t len = next_pow2(2 * n - 1);
  if (len > (std::size_t{1} << 30))
    throw validation_error("dft_bluestein: padded transform size " + std::to_string(len) +
                           " overflows the supported range");

  const auto chirp = [&](std::uint64_t m) -> cplx {
    const std::uint64_t sq = (m * m) % (2 * n);  // n < 2^30 keeps m*m exact
    const long double ang = static_cast<long double>(sign) * detail::pi_l *
                            static_cast<long double>(sq) / static_cast<long double>(n);
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
  };

  std::vector<cplx> fa(len), fb(len);
  std::vector<cplx> ch(n);
  for (std::size_t m = 0; m < n; ++m) {
    ch[m] = chirp(m);
    fa[m] = x[m] * ch[m];
    const cplx kernel = std::conj(ch[m]);
    fb[m] = kernel;
    if (m != 0) fb[len - m] = kernel;  // negative lags wrap
  }

  fft_pow2(fa, -1);
  fft_pow2(fb, -1);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  fft_pow2(fa, +1);
  const double inv = 1.0 / static_cast<double>(len);

  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = ch[k] * fa[k] * inv;
  return out;
}

/**
 * Rader: a prime-length transform rewritten as one cyclic convolution of
 * length p-1 over the index permutation of a generator g of F_p^*.
 */
inline std::vector<cplx> dft_rader(std::span<const cplx> x, int sign, std::uint64_t g) {
  const std::uint64_t p = x.size();
  if (p < 2 || !is_prime(p)) throw validation_error("dft_rader: length must be prime");
  if (p == 2) return {x[0] + x[1], x[0] - x[1]};
  const std::uint64_t q = p - 1;

  std::vector<std::uint64_t> pow_g(q);
  std::vector<bool> seen(p, false);
  pow_g[0] = 1;
  seen[1] = true;
  for (std::uint64_t t = 1; t < q; ++t) {
    pow_g[t] = mod_mul(pow_g[t - 1], g, p);
    if (seen[pow_g[t]]) throw validation_error("dft_rader: g is not a generator mod p");
    seen[pow_g[t]] = true;
  }

  // gamma_t = e_p(sign * g^t); one exact trig pair per entry.
  std::vector<cplx> gamma(q), alpha_rev(q);
  for (std::uint64_t t = 0; t < q; ++t) {
    const long double ang = static_cast<long double>(sign) * 2.0L * detail::pi_l *
                            static_cast<long double>(pow_g[t]) / static_cast<long double>(p);
    gamma[t] = {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
  }
  // Correlation against gamma = convolution with the cyclically reversed input.
  for (std::uint64_t m = 0; m < q; ++m) alpha_rev[(q - m) % q] = x[pow_g[m]];

  const std::vector<cplx> corr = cyclic_convolve(alpha_rev, gamma);

  cplx total{0.0, 0.0};
  for (const cplx& v : x) total += v;

  std::vector<cplx> out(p);
  out[0] = total;
  for (std::uint64_t j = 0; j < q; ++j) out[pow_g[j]] = x[0] + corr[j];
  return out;
}

/// Calibrated error model for the batch transforms: c * eps * p * log p.
inline double transform_err_bound(std::uint64_t p) {
  constexpr double c = 8.0;
  return c * std::numeric_limits<double>::epsilon() * static_cast<double>(p) *
         std::log(static_cast<double>(p));
}

}  // namespace kloostat
