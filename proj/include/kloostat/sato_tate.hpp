#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/kloosterman.hpp"
#include "kloostat/prime_context.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

/// Closed angle interval [alpha, beta] inside [0, pi]; membership is
/// endpoint-inclusive on both sides.  Ties at the endpoints resolve by the
/// computed double value of psi, no fuzzing.
struct Window {
  double alpha;
  double beta;

  Window(double a, double b) : alpha(a), beta(b) {
    if (!(0.0 <= a && a < b && b <= std::numbers::pi))
      throw validation_error("window [" + std::to_string(a) + ", " + std::to_string(b) +
                             "] is not inside [0, pi] or has alpha >= beta");
  }

  bool contains(double psi) const { return alpha <= psi && psi <= beta; }
};

/// mu_ST(alpha, beta) = (2/pi) * integral of sin^2 over the window,
/// in closed form.
inline double sato_tate_measure(const Window& w) {
  const double v = (w.beta - w.alpha) / std::numbers::pi -
                   (std::sin(2.0 * w.beta) - std::sin(2.0 * w.alpha)) / (2.0 * std::numbers::pi);
  return std::clamp(v, 0.0, 1.0);
}

/// #A_p(alpha, beta)
inline std::uint64_t window_count(const AngleTable& angles, const Window& w) {
  std::uint64_t c = 0;
  for (double psi : angles.psi)
    if (w.contains(psi)) ++c;
  return c;
}

/// Membership bitmap over F_p (index a, entry a=0 always zero).
inline std::vector<std::uint8_t> window_indicator(const AngleTable& angles, const Window& w) {
  std::vector<std::uint8_t> ind(angles.p, 0);
  for (std::uint64_t a = 1; a < angles.p; ++a)
    if (w.contains(angles.psi[a - 1])) ind[a] = 1;
  return ind;
}

/**
 * Exact supremum over one-sided windows [0, beta] of
 * |#A_p(0, beta) - mu_ST(0, beta) * p|, by scanning the sorted angle
 * breakpoints and evaluating the count just below and at each inclusion.
 * The two-sided supremum is bounded by twice this value.
 */
inline double niederreiter_deviation(const AngleTable& angles) {
  std::vector<double> sorted(angles.psi);
  std::sort(sorted.begin(), sorted.end());
  const double p = static_cast<double>(angles.p);

  double best = std::abs(static_cast<double>(sorted.size()) - p);  // beta = pi
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double mu_p = sato_tate_measure(Window(0.0, std::max(sorted[i], 1e-300))) * p;
    best = std::max(best, std::abs(static_cast<double>(i) - mu_p));  // just below
    best = std::max(best, std::abs(static_cast<double>(j) - mu_p));  // at inclusion
    i = j;
  }
  return best;
}

/**
 * Exact supremum over two-sided windows [alpha, beta].  O(k^2) over the
 * distinct breakpoints, so guarded by a size cap; raise it to force.
 */
inline double niederreiter_deviation_two_sided(const AngleTable& angles,
                                               std::uint64_t size_guard = 4096) {
  if (angles.p > size_guard)
    throw validation_error("two-sided deviation scan is quadratic; p = " +
                           std::to_string(angles.p) + " exceeds the guard " +
                           std::to_string(size_guard));

  std::vector<double> sorted(angles.psi);
  std::sort(sorted.begin(), sorted.end());
  const double p = static_cast<double>(angles.p);

  // distinct breakpoints with counts strictly-below and at-inclusion,
  // plus sentinels at 0 and pi
  std::vector<double> v{0.0};
  std::vector<double> c_lt{0.0}, c_le{0.0};
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    v.push_back(sorted[i]);
    c_lt.push_back(static_cast<double>(i));
    c_le.push_back(static_cast<double>(j));
    i = j;
  }
  v.push_back(std::numbers::pi);
  c_lt.push_back(static_cast<double>(sorted.size()));
  c_le.push_back(static_cast<double>(sorted.size()));

  std::vector<double> mu(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    mu[k] = v[k] > 0.0 ? sato_tate_measure(Window(0.0, v[k])) : 0.0;

  // alpha at x (inclusive keeps c_lt; sliding above x drops to c_le),
  // beta at y (inclusive keeps c_le; sliding below y drops to c_lt)
  double best = 0.0;
  for (std::size_t xi = 0; xi < v.size(); ++xi) {
    for (std::size_t yi = xi; yi < v.size(); ++yi) {
      const double mu_p = (mu[yi] - mu[xi]) * p;
      for (const double lo : {c_lt[xi], c_le[xi]}) {
        for (const double hi : {c_lt[yi], c_le[yi]}) {
          if (hi < lo) continue;
          best = std::max(best, std::abs((hi - lo) - mu_p));
        }
      }
    }
  }
  return best;
}

/// #A_p(lambda, M; alpha, beta): members whose canonical lambda*a lies in [1, M].
inline std::uint64_t scaled_subset_count(const PrimeContext& ctx, const AngleTable& angles,
                                         std::uint64_t lambda, std::uint64_t M, const Window& w) {
  const std::uint64_t p = ctx.p();
  lambda %= p;
  if (lambda == 0) throw validation_error("scaled_subset_count: lambda = 0 rejected");
  if (M < 1 || M > p - 1) throw validation_error("scaled_subset_count: M must be in [1, p-1]");
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a < p; ++a) {
    if (!w.contains(angles.psi[a - 1])) continue;
    const std::uint64_t rep = (lambda * a) % p;
    if (rep >= 1 && rep <= M) ++c;
  }
  return c;
}

/// Exact star discrepancy of points in [0,1), via one sort.
inline double star_discrepancy(std::vector<double> points) {
  if (points.empty()) throw validation_error("star_discrepancy: empty point set");
  for (double x : points)
    if (!(x >= 0.0 && x < 1.0))
      throw validation_error("star_discrepancy: point " + std::to_string(x) +
                             " outside [0, 1)");
  std::sort(points.begin(), points.end());
  const double n = static_cast<double>(points.size());
  double best = 0.0;
  for (std::size_t i = 1; i <= points.size(); ++i) {
    const double x = points[i - 1];
    best = std::max(best, x - static_cast<double>(i - 1) / n);
    best = std::max(best, static_cast<double>(i) / n - x);
  }
  return best;
}

/// D_p(lambda; alpha, beta): discrepancy of {lambda*a/p : a in A_p(alpha,beta)}.
inline double discrepancy_of_window(const PrimeContext& ctx, const AngleTable& angles,
                                    std::uint64_t lambda, const Window& w) {
  const std::uint64_t p = ctx.p();
  lambda %= p;
  if (lambda == 0) throw validation_error("discrepancy_of_window: lambda = 0 rejected");
  std::vector<double> pts;
  for (std::uint64_t a = 1; a < p; ++a)
    if (w.contains(angles.psi[a - 1]))
      pts.push_back(static_cast<double>((lambda * a) % p) / static_cast<double>(p));
  if (pts.empty())
    throw empty_window_error("discrepancy_of_window: A_p window is empty");
  return star_discrepancy(std::move(pts));
}

/// S_p(lambda; alpha, beta) = sum of e_p(lambda * a) over the window set.
inline cplx exp_sum(const PrimeContext& ctx, const AngleTable& angles, std::uint64_t lambda,
                    const Window& w) {
  const std::uint64_t p = ctx.p();
  lambda %= p;
  if (lambda == 0) throw validation_error("exp_sum: lambda = 0 rejected (trivial count)");
  std::vector<cplx> terms;
  terms.reserve(angles.psi.size());
  for (std::uint64_t a = 1; a < p; ++a)
    if (w.contains(angles.psi[a - 1])) terms.push_back(ctx.ep((lambda * a) % p));
  if (terms.empty()) return {0.0, 0.0};
  return pairwise_sum(std::span<const cplx>(terms));
}

struct ExpSumScan {
  double max_abs = 0.0;
  std::uint64_t argmax_lambda = 0;
  double argmax_alpha = 0.0;
  double argmax_beta = 0.0;
  double bound_shape = 0.0;  // p^(3/4) * (log p)^(1/2)
  double ratio = 0.0;
};

inline ExpSumScan exp_sum_scan(const PrimeContext& ctx, const AngleTable& angles,
                               std::span<const std::uint64_t> lambdas,
                               std::span<const Window> windows) {
  if (lambdas.empty() || windows.empty())
    throw validation_error("exp_sum_scan: empty sample grid");
  ExpSumScan r;
  for (const Window& w : windows) {
    for (std::uint64_t lam : lambdas) {
      const double s = std::abs(exp_sum(ctx, angles, lam, w));
      if (s > r.max_abs) {
        r.max_abs = s;
        r.argmax_lambda = lam;
        r.argmax_alpha = w.alpha;
        r.argmax_beta = w.beta;
      }
    }
  }
  const double p = static_cast<double>(ctx.p());
  r.bound_shape = std::pow(p, 0.75) * std::sqrt(std::log(p));
  r.ratio = r.max_abs / r.bound_shape;
  return r;
}

/// T_p(chi; alpha, beta) for the character chi(g^j) = e((j*k)/(p-1)).
/// k must be nonprincipal (k not congruent to 0 mod p-1).
inline cplx character_sum(const PrimeContext& ctx, const AngleTable& angles, std::uint64_t k,
                          const Window& w) {
  const std::uint64_t p = ctx.p();
  const std::uint64_t q = p - 1;
  if (k % q == 0)
    throw validation_error("character_sum: principal character (k = 0 mod p-1) rejected");
  if (!ctx.has_dlog())
    throw validation_error("character_sum: context has no dlog table");
  std::vector<cplx> terms;
  for (std::uint64_t a = 1; a < p; ++a) {
    if (!w.contains(angles.psi[a - 1])) continue;
    const std::uint64_t m = (k % q) * ctx.dlog(a) % q;
    const long double ang = 2.0L * detail::pi_l * static_cast<long double>(m) /
                            static_cast<long double>(q);
    terms.push_back({static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))});
  }
  if (terms.empty()) return {0.0, 0.0};
  return pairwise_sum(std::span<const cplx>(terms));
}

/// #Q_p(alpha, beta) = #{a in F_p : a^2 in A_p(alpha, beta)}; a = 0 never
/// qualifies since 0 is outside F_p^*.
inline std::uint64_t quadratic_count(const PrimeContext& ctx, const AngleTable& angles,
                                     const Window& w) {
  const std::vector<std::uint8_t> ind = window_indicator(angles, w);
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a < ctx.p(); ++a) c += ind[ctx.mul(a, a)];
  return c;
}

struct ScaledCountScan {
  double max_abs_dev = 0.0;
  std::uint64_t argmax_m = 0;
  double max_ratio = 0.0;  // deviation / (M^(1/2) p^(1/4) (log p)^(1/2))
};

/// Deviation |#A_p(lambda, M; alpha, beta) - mu_ST * M| over a grid of M.
inline ScaledCountScan scaled_count_scan(const PrimeContext& ctx, const AngleTable& angles,
                                         std::uint64_t lambda, const Window& w,
                                         std::span<const std::uint64_t> ms) {
  if (ms.empty()) throw validation_error("scaled_count_scan: empty M grid");
  const std::uint64_t p = ctx.p();
  lambda %= p;
  if (lambda == 0) throw validation_error("scaled_count_scan: lambda = 0 rejected");

  std::vector<std::uint64_t> mapped;
  for (std::uint64_t a = 1; a < p; ++a)
    if (w.contains(angles.psi[a - 1])) mapped.push_back((lambda * a) % p);
  std::sort(mapped.begin(), mapped.end());

  const double mu = sato_tate_measure(w);
  const double pd = static_cast<double>(p);
  ScaledCountScan r;
  for (std::uint64_t m : ms) {
    if (m < 1 || m > p - 1) throw validation_error("scaled_count_scan: M outside [1, p-1]");
    const auto it = std::upper_bound(mapped.begin(), mapped.end(), m);
    const double count = static_cast<double>(it - mapped.begin());
    const double dev = std::abs(count - mu * static_cast<double>(m));
    if (dev > r.max_abs_dev) {
      r.max_abs_dev = dev;
      r.argmax_m = m;
    }
    const double shape =
        std::sqrt(static_cast<double>(m)) * std::pow(pd, 0.25) * std::sqrt(std::log(pd));
    r.max_ratio = std::max(r.max_ratio, dev / shape);
  }
  return r;
}

}  // namespace kloostat
