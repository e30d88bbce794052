#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/kloosterman.hpp"
#include "kloostat/prime_context.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

/// Truth table of the sign function f on [0, 2^n - 1]:
/// f(a) = 0 if K_p(a) > 0 or a = 0, f(a) = 1 if K_p(a) < 0.
struct SignVector {
  unsigned n = 0;
  std::vector<std::uint8_t> bits;  // size 2^n
};

/// Normalized Walsh coefficients; each entry is an integer multiple of
/// 2^(1-n), so doubles hold them exactly for n <= 26.
struct WalshSpectrum {
  unsigned n = 0;
  std::vector<double> coeffs;  // size 2^n
};

/// Builds the sign vector.  Entries whose table value sits below the
/// ambiguity threshold are re-evaluated by compensated summation; a value
/// still indistinguishable from zero raises sign_ambiguity_error rather
/// than guessing.
inline SignVector sign_vector(const PrimeContext& ctx, const KloostermanTable& table) {
  if (table.p != ctx.p()) throw validation_error("sign_vector: context/table p mismatch");
  const unsigned n = ctx.n();
  const std::uint64_t size = std::uint64_t{1} << n;
  const double sq = ctx.sqrt_p();
  const double suspect = 1e-3 * sq;
  const double ambiguous = 1e-6 * sq;

  SignVector s;
  s.n = n;
  s.bits.assign(size, 0);
  for (std::uint64_t a = 1; a < size; ++a) {
    double k = table.value(a);
    if (std::abs(k) < suspect) k = kloosterman_compensated(ctx, a);
    if (std::abs(k) < ambiguous)
      throw sign_ambiguity_error("sign_vector: |K_p(" + std::to_string(a) + ")| = " +
                                 std::to_string(std::abs(k)) +
                                 " is numerically indistinguishable from zero");
    s.bits[a] = k < 0.0 ? 1 : 0;
  }
  return s;
}

/// In-place integer butterfly over the +-1 sequence; exact for n <= 30.
/// <a,r> is the parity of a & r, bit i carrying weight 2^i.
inline WalshSpectrum wht(const SignVector& signs) {
  const std::uint64_t size = std::uint64_t{1} << signs.n;
  if (signs.bits.size() != size) throw validation_error("wht: bits size is not 2^n");

  std::vector<std::int32_t> w(size);
  for (std::uint64_t a = 0; a < size; ++a) w[a] = signs.bits[a] ? -1 : 1;
  for (std::uint64_t h = 1; h < size; h <<= 1) {
    for (std::uint64_t block = 0; block < size; block += 2 * h) {
      for (std::uint64_t j = block; j < block + h; ++j) {
        const std::int32_t x = w[j];
        const std::int32_t y = w[j + h];
        w[j] = x + y;
        w[j + h] = x - y;
      }
    }
  }

  WalshSpectrum sp;
  sp.n = signs.n;
  sp.coeffs.resize(size);
  const double scale = 1.0 / static_cast<double>(size);
  for (std::uint64_t r = 0; r < size; ++r) sp.coeffs[r] = static_cast<double>(w[r]) * scale;
  return sp;
}

/// N(f) = 2^(n-1) - 2^(n-1) max_r |f^(r)|; the value is an exact integer.
inline std::uint64_t nonlinearity(const WalshSpectrum& spectrum) {
  double max_abs = 0.0;
  for (double c : spectrum.coeffs) max_abs = std::max(max_abs, std::abs(c));
  const double half = static_cast<double>(std::uint64_t{1} << (spectrum.n - 1));
  return static_cast<std::uint64_t>(std::llround(half - half * max_abs));
}

/// sum_{b=0}^{M-1} (-1)^(f(b+c1) + f(b+c2)).  Valid when every accessed
/// index stays below 2^n; c1 = c2 gives the trivial value M.
inline std::int64_t correlation_sum(const SignVector& signs, std::uint64_t m, std::uint64_t c1,
                                    std::uint64_t c2) {
  const std::uint64_t size = std::uint64_t{1} << signs.n;
  if (c1 > c2) throw validation_error("correlation_sum: c1 must not exceed c2");
  if (m == 0) return 0;
  if (m - 1 + c2 > size - 1)
    throw validation_error("correlation_sum: index " + std::to_string(m - 1 + c2) +
                           " overflows past 2^n - 1");
  std::int64_t acc = 0;
  for (std::uint64_t b = 0; b < m; ++b)
    acc += (signs.bits[b + c1] ^ signs.bits[b + c2]) ? -1 : 1;
  return acc;
}

struct Theorem2Report {
  unsigned n = 0;
  std::uint64_t nonlin = 0;
  double max_abs_coeff = 0.0;
  double defect = 0.0;          // 1 - N(f) / 2^(n-1)
  double envelope = 0.0;        // 2^(-n/16) * n^(1/8)
  double scaled_ratio = 0.0;    // defect / envelope
  std::uint64_t corr_samples = 0;
  std::uint64_t corr_seed = 0;
  double max_corr_ratio = 0.0;  // |corr| / (M^(2/3) p^(1/6) (log p)^(1/3))
};

/// Defect of the nonlinearity against the theorem envelope, plus the
/// correlation diagnostic over a seeded sample of (c1, c2, M) triples.
inline Theorem2Report theorem2_report(std::uint64_t p, const SignVector& signs,
                                      const WalshSpectrum& spectrum,
                                      std::uint64_t samples = 100, std::uint64_t seed = 1) {
  if (signs.n != spectrum.n) throw validation_error("theorem2_report: n mismatch");
  Theorem2Report r;
  r.n = spectrum.n;
  r.nonlin = nonlinearity(spectrum);
  for (double c : spectrum.coeffs) r.max_abs_coeff = std::max(r.max_abs_coeff, std::abs(c));
  const double half = static_cast<double>(std::uint64_t{1} << (spectrum.n - 1));
  r.defect = 1.0 - static_cast<double>(r.nonlin) / half;
  const double nd = static_cast<double>(spectrum.n);
  r.envelope = std::pow(2.0, -nd / 16.0) * std::pow(nd, 0.125);
  r.scaled_ratio = r.defect / r.envelope;

  r.corr_samples = samples;
  r.corr_seed = seed;
  const std::uint64_t size = std::uint64_t{1} << signs.n;
  const double pd = static_cast<double>(p);
  std::mt19937_64 gen(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::uint64_t c2 = 1 + uniform_below(gen, size - 1);   // [1, 2^n - 1]
    const std::uint64_t c1 = uniform_below(gen, c2);             // [0, c2 - 1]
    const std::uint64_t m = 1 + uniform_below(gen, size - c2);   // [1, 2^n - c2]
    const double corr = static_cast<double>(correlation_sum(signs, m, c1, c2));
    const double shape = std::pow(static_cast<double>(m), 2.0 / 3.0) *
                         std::pow(pd, 1.0 / 6.0) * std::cbrt(std::log(pd));
    r.max_corr_ratio = std::max(r.max_corr_ratio, std::abs(corr) / shape);
  }
  return r;
}

}  // namespace kloostat
