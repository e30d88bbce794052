#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/fft.hpp"
#include "kloostat/prime_context.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

enum class Method : std::uint8_t { naive = 0, batch_dft = 1 };
enum class BatchEngine { bluestein, rader };

inline constexpr std::uint64_t default_naive_cap = std::uint64_t{1} << 17;
inline constexpr double weil_slack = 1e-9;

/// Dense K_p(a) for a = 1..p-1.
struct KloostermanTable {
  std::uint64_t p = 0;
  Method method = Method::naive;
  double err_bound = 0.0;
  std::vector<double> values;  // values[a-1] = K_p(a)

  double value(std::uint64_t a) const {
    if (a == 0 || a >= p) throw validation_error("K_p(a) requested for a outside F_p^*");
    return values[a - 1];
  }
};

/// psi_p(a) in [0, pi] with K_p(a) = 2*sqrt(p)*cos(psi_p(a)).
struct AngleTable {
  std::uint64_t p = 0;
  std::vector<double> psi;  // psi[a-1]

  double psi_of(std::uint64_t a) const {
    if (a == 0 || a >= p) throw validation_error("psi_p(a) requested for a outside F_p^*");
    return psi[a - 1];
  }
};

namespace detail {

// Local fallbacks so table builds work on a bare context without mutating it.
struct NaiveWorkspace {
  std::vector<std::uint32_t> inv_local;
  std::vector<cplx> roots_local;
  const std::uint32_t* inv = nullptr;
  std::vector<cplx> const* roots = nullptr;
};

inline std::vector<std::uint32_t> build_local_inverses(std::uint64_t p) {
  std::vector<std::uint32_t> inv(p, 0);
  inv[1] = 1;
  for (std::uint64_t a = 2; a < p; ++a)
    inv[a] = static_cast<std::uint32_t>(p - ((p / a) * inv[p % a]) % p);
  return inv;
}

inline std::vector<cplx> build_local_roots(std::uint64_t p) {
  std::vector<cplx> roots(p);
  const std::uint64_t half = p / 2;
  parallel_for(0, half + 1, [&](std::uint64_t z) {
    const long double ang =
        2.0L * pi_l * static_cast<long double>(z) / static_cast<long double>(p);
    roots[z] = {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
  });
  for (std::uint64_t z = half + 1; z < p; ++z) roots[z] = std::conj(roots[p - z]);
  return roots;
}

inline cplx kloosterman_complex(std::uint64_t p, std::uint64_t a,
                                std::span<const std::uint32_t> inv,
                                std::span<const cplx> roots, std::vector<cplx>& scratch) {
  scratch.resize(p - 1);
  for (std::uint64_t x = 1; x < p; ++x) {
    std::uint64_t t = x + (a * inv[x]) % p;
    if (t >= p) t -= p;
    scratch[x - 1] = roots[t];
  }
  return pairwise_sum(std::span<const cplx>(scratch));
}

inline void check_weil(const KloostermanTable& t) {
  const double limit = 2.0 * std::sqrt(static_cast<double>(t.p)) * (1.0 + weil_slack) + t.err_bound;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (std::abs(t.values[i]) > limit)
      throw weil_violation_error("|K_p(" + std::to_string(i + 1) + ")| = " +
                                 std::to_string(std::abs(t.values[i])) +
                                 " exceeds 2*sqrt(p) beyond the rounding budget (p = " +
                                 std::to_string(t.p) + ")");
  }
}

}  // namespace detail

/// Direct sum over x in F_p^*.  The imaginary part of the complex
/// accumulation must cancel (K_p(a) is real); asserted, not returned.
inline double kloosterman_naive(const PrimeContext& ctx, std::uint64_t a) {
  const std::uint64_t p = ctx.p();
  a %= p;
  if (a == 0) throw validation_error("kloosterman_naive: a = 0 rejected");

  std::vector<cplx> terms(p - 1);
  for (std::uint64_t x = 1; x < p; ++x) {
    std::uint64_t t = x + (a * ctx.inverse(x)) % p;
    if (t >= p) t -= p;
    terms[x - 1] = ctx.ep(t);
  }
  const cplx s = pairwise_sum(std::span<const cplx>(terms));
  const double tol = static_cast<double>(p) * std::numeric_limits<double>::epsilon();
  if (std::abs(s.imag()) > tol)
    throw computation_error("kloosterman_naive: imaginary residue " + std::to_string(s.imag()) +
                            " exceeds p*eps at a = " + std::to_string(a));
  return s.real();
}

/// Kahan-compensated re-evaluation in extended precision; used to settle
/// signs of entries the table puts too close to zero.
inline double kloosterman_compensated(const PrimeContext& ctx, std::uint64_t a) {
  const std::uint64_t p = ctx.p();
  a %= p;
  if (a == 0) throw validation_error("kloosterman_compensated: a = 0 rejected");
  long double sum = 0.0L, comp = 0.0L;
  for (std::uint64_t x = 1; x < p; ++x) {
    const std::uint64_t inv_x = ctx.inverse(x);
    std::uint64_t t = x + (a * inv_x) % p;
    if (t >= p) t -= p;
    const long double term =
        std::cos(2.0L * detail::pi_l * static_cast<long double>(t) / static_cast<long double>(p));
    const long double y = term - comp;
    const long double u = sum + y;
    comp = (u - sum) - y;
    sum = u;
  }
  return static_cast<double>(sum);
}

/// O(p^2) reference table; the oracle for the batch path.  Refuses large p
/// unless the cap is raised explicitly.
inline KloostermanTable kloosterman_table_naive(const PrimeContext& ctx,
                                                std::uint64_t oracle_cap = default_naive_cap) {
  const std::uint64_t p = ctx.p();
  if (p > oracle_cap)
    throw validation_error("kloosterman_table_naive: p = " + std::to_string(p) +
                           " exceeds the oracle cap " + std::to_string(oracle_cap) +
                           " (O(p^2) path; raise the cap to force)");

  const std::vector<std::uint32_t> inv = detail::build_local_inverses(p);
  const std::vector<cplx> roots = detail::build_local_roots(p);

  KloostermanTable t;
  t.p = p;
  t.method = Method::naive;
  t.err_bound = static_cast<double>(p) * std::numeric_limits<double>::epsilon();
  t.values.resize(p - 1);

  const double imag_tol = static_cast<double>(p) * std::numeric_limits<double>::epsilon();
  std::atomic<bool> imag_bad{false};
  parallel_for(1, p, [&](std::uint64_t a) {
    thread_local std::vector<cplx> scratch;
    const cplx s = detail::kloosterman_complex(p, a, inv, roots, scratch);
    if (std::abs(s.imag()) > imag_tol) imag_bad.store(true, std::memory_order_relaxed);
    t.values[a - 1] = s.real();
  });
  if (imag_bad.load())
    throw computation_error("kloosterman_table_naive: an imaginary residue exceeded p*eps");

  detail::check_weil(t);
  return t;
}

/**
 * O(p log p) table: with u = x^{-1} the sum becomes the length-p transform
 * of h(u) = e_p(u^{-1}), h(0) = 0, evaluated with the synthesis sign.
 * Bluestein by default; Rader available for benchmarking.
 */
inline KloostermanTable kloosterman_table_batch(const PrimeContext& ctx,
                                                BatchEngine engine = BatchEngine::bluestein) {
  const std::uint64_t p = ctx.p();

  std::vector<std::uint32_t> inv_local;
  if (!ctx.has_inverses()) inv_local = detail::build_local_inverses(p);
  const std::vector<cplx> roots_local = detail::build_local_roots(p);

  std::vector<cplx> h(p);
  h[0] = {0.0, 0.0};
  for (std::uint64_t u = 1; u < p; ++u) {
    const std::uint64_t iu = inv_local.empty() ? ctx.inverse(u) : inv_local[u];
    h[u] = roots_local[iu];
  }

  std::vector<cplx> spectrum;
  if (engine == BatchEngine::bluestein) {
    spectrum = dft_bluestein(h, +1);
  } else {
    const std::uint64_t g = ctx.generator() ? *ctx.generator() : find_generator(p);
    spectrum = dft_rader(h, +1, g);
  }

  KloostermanTable t;
  t.p = p;
  t.method = Method::batch_dft;
  t.err_bound = transform_err_bound(p);
  t.values.resize(p - 1);

  double max_im = 0.0;
  for (std::uint64_t a = 1; a < p; ++a) {
    t.values[a - 1] = spectrum[a].real();
    max_im = std::max(max_im, std::abs(spectrum[a].imag()));
  }
  if (max_im > t.err_bound)
    throw computation_error("kloosterman_table_batch: imaginary residue " +
                            std::to_string(max_im) + " exceeds the error bound " +
                            std::to_string(t.err_bound));
  // The a = 0 bin is sum of e_p over F_p^*, exactly -1; cheap self-check.
  if (std::abs(spectrum[0] - cplx{-1.0, 0.0}) > t.err_bound)
    throw computation_error("kloosterman_table_batch: zero-frequency bin drifted from -1");

  detail::check_weil(t);
  return t;
}

/// arccos with the Weil-bound clamp; overshoot past the budget is a hard error.
inline AngleTable angles(const KloostermanTable& table) {
  AngleTable at;
  at.p = table.p;
  at.psi.resize(table.values.size());
  const double two_sqrt_p = 2.0 * std::sqrt(static_cast<double>(table.p));
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const double c = table.values[i] / two_sqrt_p;
    if (std::abs(c) > 1.0 + weil_slack)
      throw weil_violation_error("angles: cos overshoot " + std::to_string(c) +
                                 " at a = " + std::to_string(i + 1));
    at.psi[i] = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return at;
}

/// max_a |K_p(a)| / (2*sqrt(p)); <= 1 + slack for a correct table.
inline double weil_ratio(const KloostermanTable& table) {
  double m = 0.0;
  for (double v : table.values) m = std::max(m, std::abs(v));
  return m / (2.0 * std::sqrt(static_cast<double>(table.p)));
}

struct Moments {
  double first = 0.0;   // sum of K_p(a); identity value 1
  double second = 0.0;  // sum of K_p(a)^2; identity value p^2 - p - 1
};

inline Moments moments(const KloostermanTable& table) {
  std::vector<double> sq(table.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = table.values[i] * table.values[i];
  return {pairwise_sum(std::span<const double>(table.values)),
          pairwise_sum(std::span<const double>(sq))};
}

}  // namespace kloostat
