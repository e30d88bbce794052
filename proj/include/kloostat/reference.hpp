#pragma once

// Slow reference implementations used only to cross-check the fast paths.
// Nothing here may call the code it verifies.

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/nonlinearity.hpp"

namespace kloostat::reference {

/// O(N^2) star discrepancy: evaluates |T(gamma)/N - gamma| just below and
/// at every sample point by direct counting.
inline double star_discrepancy_brute(const std::vector<double>& points) {
  if (points.empty()) throw validation_error("star_discrepancy_brute: empty point set");
  const double n = static_cast<double>(points.size());
  double best = 0.0;
  for (double g : points) {
    std::uint64_t lt = 0, le = 0;
    for (double x : points) {
      if (x < g) ++lt;
      if (x <= g) ++le;
    }
    best = std::max(best, std::abs(static_cast<double>(lt) / n - g));
    best = std::max(best, std::abs(static_cast<double>(le) / n - g));
  }
  return best;
}

/// O(4^n) Walsh coefficients by the double sum, integer accumulation.
inline WalshSpectrum wht_direct(const SignVector& signs) {
  const std::uint64_t size = std::uint64_t{1} << signs.n;
  WalshSpectrum sp;
  sp.n = signs.n;
  sp.coeffs.resize(size);
  for (std::uint64_t r = 0; r < size; ++r) {
    std::int64_t acc = 0;
    for (std::uint64_t a = 0; a < size; ++a) {
      const unsigned parity = std::popcount(a & r) & 1u;
      acc += (signs.bits[a] ^ parity) ? -1 : 1;
    }
    sp.coeffs[r] = static_cast<double>(acc) / static_cast<double>(size);
  }
  return sp;
}

}  // namespace kloostat::reference
