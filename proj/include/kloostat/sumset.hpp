#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/fft.hpp"
#include "kloostat/prime_context.hpp"
#include "kloostat/sato_tate.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

/// Declarative description of a subset of F_p^*.
struct SetSpec {
  struct Interval {
    std::uint64_t lo, hi;
  };
  struct Explicit {
    std::vector<std::uint64_t> values;
  };
  struct Random {
    std::uint64_t size, seed;
  };
  struct Beatty {
    double theta, rho;
    std::uint64_t count;
  };
  struct Geometric {
    std::uint64_t start, ratio, length;
  };

  std::variant<Interval, Explicit, Random, Beatty, Geometric> variant;
};

namespace detail {

inline std::uint64_t beatty_term_mod_p(double theta, double rho, std::uint64_t m,
                                       std::uint64_t p) {
  const double t = theta * static_cast<double>(m) + rho;
  if (std::abs(t) >= 9.007199254740992e15)  // 2^53: floor would lose integers
    throw validation_error("beatty: theta*m + rho exceeds exact double range");
  const long long v = static_cast<long long>(std::floor(t));
  const long long pp = static_cast<long long>(p);
  return static_cast<std::uint64_t>(((v % pp) + pp) % pp);
}

}  // namespace detail

/// Deduplicated, sorted subset of F_p^*.  Empty results and elements
/// outside [1, p-1] are rejected.
inline std::vector<std::uint64_t> materialize(const SetSpec& spec, const PrimeContext& ctx) {
  const std::uint64_t p = ctx.p();
  std::set<std::uint64_t> out;

  if (const auto* iv = std::get_if<SetSpec::Interval>(&spec.variant)) {
    if (iv->lo < 1 || iv->hi > p - 1 || iv->lo > iv->hi)
      throw validation_error("interval [" + std::to_string(iv->lo) + ", " +
                             std::to_string(iv->hi) + "] is not inside [1, p-1]");
    for (std::uint64_t a = iv->lo; a <= iv->hi; ++a) out.insert(a);
  } else if (const auto* ex = std::get_if<SetSpec::Explicit>(&spec.variant)) {
    for (std::uint64_t a : ex->values) {
      if (a < 1 || a > p - 1)
        throw validation_error("explicit element " + std::to_string(a) +
                               " is outside [1, p-1]");
      out.insert(a);
    }
  } else if (const auto* rd = std::get_if<SetSpec::Random>(&spec.variant)) {
    if (rd->size < 1 || rd->size > p - 1)
      throw validation_error("random set size must be in [1, p-1]");
    // Floyd's sampling: k draws, no rejection of the growing set's size.
    std::mt19937_64 gen(rd->seed);
    for (std::uint64_t j = p - rd->size; j <= p - 1; ++j) {
      const std::uint64_t t = 1 + uniform_below(gen, j);
      if (!out.insert(t).second) out.insert(j);
    }
  } else if (const auto* bt = std::get_if<SetSpec::Beatty>(&spec.variant)) {
    if (!(bt->theta > 0.0)) throw validation_error("beatty: theta must be positive");
    if (bt->count < 1) throw validation_error("beatty: count must be at least 1");
    for (std::uint64_t m = 1; m <= bt->count; ++m) {
      const std::uint64_t v = detail::beatty_term_mod_p(bt->theta, bt->rho, m, p);
      if (v != 0) out.insert(v);  // zeros dropped
    }
  } else {
    const auto& ge = std::get<SetSpec::Geometric>(spec.variant);
    if (ge.start % p == 0 || ge.ratio % p == 0)
      throw validation_error("geometric: start and ratio must be nonzero mod p");
    if (ge.length < 1) throw validation_error("geometric: length must be at least 1");
    std::uint64_t v = ge.start % p;
    for (std::uint64_t i = 0; i < ge.length; ++i) {
      out.insert(v);
      v = mod_mul(v, ge.ratio % p, p);
    }
  }

  if (out.empty()) throw validation_error("set specification produced an empty set");
  return {out.begin(), out.end()};
}

namespace detail {

inline void check_set(std::span<const std::uint64_t> s, std::uint64_t p, const char* name) {
  for (std::uint64_t a : s)
    if (a == 0 || a >= p)
      throw validation_error(std::string(name) + " contains " + std::to_string(a) +
                             ", outside F_p^*");
}

}  // namespace detail

/// Direct pair loop against the window bitmap.
inline std::uint64_t sumset_count_loop(std::span<const std::uint64_t> u,
                                       std::span<const std::uint64_t> v,
                                       std::span<const std::uint8_t> ind) {
  const std::uint64_t p = ind.size();
  std::atomic<std::uint64_t> total{0};
  parallel_for(0, u.size(), [&](std::uint64_t i) {
    const std::uint64_t ui = u[i];
    std::uint64_t local = 0;
    for (std::uint64_t vj : v) {
      std::uint64_t t = ui + vj;
      if (t >= p) t -= p;
      local += ind[t];
    }
    total.fetch_add(local, std::memory_order_relaxed);
  });
  return total.load();
}

/// Representation counts r(c) = #{(u,v): u+v = c} by one cyclic convolution,
/// then a dot with the bitmap.  Exact: counts are recovered by rounding.
inline std::uint64_t sumset_count_conv(std::span<const std::uint64_t> u,
                                       std::span<const std::uint64_t> v,
                                       std::span<const std::uint8_t> ind) {
  const std::uint64_t p = ind.size();
  std::vector<cplx> iu(p, cplx{0.0, 0.0}), iv(p, cplx{0.0, 0.0});
  for (std::uint64_t a : u) iu[a] = {1.0, 0.0};
  for (std::uint64_t a : v) iv[a] = {1.0, 0.0};
  const std::vector<cplx> reps = cyclic_convolve(iu, iv);

  std::uint64_t total = 0;
  for (std::uint64_t c = 0; c < p; ++c) {
    if (!ind[c]) continue;
    const double r = reps[c].real();
    const double rounded = std::nearbyint(r);
    if (std::abs(r - rounded) > 0.25)
      throw computation_error("sumset_count_conv: convolution output " + std::to_string(r) +
                              " is not close to an integer");
    total += static_cast<std::uint64_t>(rounded);
  }
  return total;
}

inline constexpr std::uint64_t sumset_conv_crossover_factor = 64;

/// Ordered pairs (u,v) with u+v in A_p(alpha,beta).  Pairs summing to 0
/// are never counted (0 is outside F_p^*).  Picks the loop or convolution
/// path by the crossover #U*#V > 64p.
inline std::uint64_t sumset_count(std::span<const std::uint64_t> u,
                                  std::span<const std::uint64_t> v, const AngleTable& angles,
                                  const Window& w) {
  detail::check_set(u, angles.p, "U");
  detail::check_set(v, angles.p, "V");
  const std::vector<std::uint8_t> ind = window_indicator(angles, w);
  const std::uint64_t work = u.size() * v.size();
  if (work > sumset_conv_crossover_factor * angles.p)
    return sumset_count_conv(u, v, ind);
  return sumset_count_loop(u, v, ind);
}

/// Ordered pairs (u,v) with u*v in A_p(alpha,beta).  Compute-only; no
/// closed bound is certified for products.
inline std::uint64_t prodset_count(std::span<const std::uint64_t> u,
                                   std::span<const std::uint64_t> v, const AngleTable& angles,
                                   const Window& w) {
  detail::check_set(u, angles.p, "U");
  detail::check_set(v, angles.p, "V");
  const std::vector<std::uint8_t> ind = window_indicator(angles, w);
  const std::uint64_t p = angles.p;
  std::atomic<std::uint64_t> total{0};
  parallel_for(0, u.size(), [&](std::uint64_t i) {
    const std::uint64_t ui = u[i];
    std::uint64_t local = 0;
    for (std::uint64_t vj : v) local += ind[mod_mul(ui, vj, p)];
    total.fetch_add(local, std::memory_order_relaxed);
  });
  return total.load();
}

struct SumsetReport {
  std::uint64_t p = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t size_u = 0;
  std::uint64_t size_v = 0;
  std::uint64_t observed = 0;
  double main_term = 0.0;   // mu_ST(alpha,beta) * #U * #V
  double abs_error = 0.0;
  double bound = 0.0;       // sqrt(#U #V) p^(3/4) (log p)^(1/2)
  double ratio = 0.0;       // abs_error / bound
  bool threshold_met = false;  // #U #V >= p^(3/2 + eps)
};

/// Verifies the unconditional sum-set inequality on one instance.  A
/// violated inequality is an implementation bug, never data.
inline SumsetReport theorem1_report(std::span<const std::uint64_t> u,
                                    std::span<const std::uint64_t> v, const AngleTable& angles,
                                    const Window& w, double epsilon = 0.05) {
  SumsetReport r;
  r.p = angles.p;
  r.alpha = w.alpha;
  r.beta = w.beta;
  r.size_u = u.size();
  r.size_v = v.size();
  r.observed = sumset_count(u, v, angles, w);

  const double pd = static_cast<double>(angles.p);
  const double uv = static_cast<double>(r.size_u) * static_cast<double>(r.size_v);
  r.main_term = sato_tate_measure(w) * uv;
  r.abs_error = std::abs(static_cast<double>(r.observed) - r.main_term);
  r.bound = std::sqrt(uv) * std::pow(pd, 0.75) * std::sqrt(std::log(pd));
  r.ratio = r.bound > 0.0 ? r.abs_error / r.bound : 0.0;
  r.threshold_met = uv >= std::pow(pd, 1.5 + epsilon);

  if (r.abs_error > r.bound)
    throw computation_error("theorem1_report: |" + std::to_string(r.observed) + " - " +
                            std::to_string(r.main_term) + "| exceeds the unconditional bound " +
                            std::to_string(r.bound));
  return r;
}

/**
 * Parses the CLI notation for set specifications:
 *   interval:lo:hi | explicit:v1,v2,... | random:size:seed |
 *   beatty:theta:rho:count | geometric:start:ratio:length
 */
inline SetSpec parse_set_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(':', pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  const auto need = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw validation_error("set spec '" + text + "': expected " + std::to_string(n) +
                             " parameters after '" + parts[0] + "'");
  };
  const auto as_u64 = [&](const std::string& s) -> std::uint64_t {
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw validation_error("set spec '" + text + "': bad integer '" + s + "'");
    }
  };
  const auto as_f64 = [&](const std::string& s) -> double {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw validation_error("set spec '" + text + "': bad number '" + s + "'");
    }
  };

  if (parts[0] == "interval") {
    need(2);
    return {SetSpec::Interval{as_u64(parts[1]), as_u64(parts[2])}};
  }
  if (parts[0] == "explicit") {
    need(1);
    std::vector<std::uint64_t> vals;
    std::size_t start = 0;
    const std::string& list = parts[1];
    while (start <= list.size()) {
      const std::size_t comma = list.find(',', start);
      const std::string tok =
          comma == std::string::npos ? list.substr(start) : list.substr(start, comma - start);
      if (!tok.empty()) vals.push_back(as_u64(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return {SetSpec::Explicit{std::move(vals)}};
  }
  if (parts[0] == "random") {
    need(2);
    return {SetSpec::Random{as_u64(parts[1]), as_u64(parts[2])}};
  }
  if (parts[0] == "beatty") {
    need(3);
    return {SetSpec::Beatty{as_f64(parts[1]), as_f64(parts[2]), as_u64(parts[3])}};
  }
  if (parts[0] == "geometric") {
    need(3);
    return {SetSpec::Geometric{as_u64(parts[1]), as_u64(parts[2]), as_u64(parts[3])}};
  }
  throw validation_error("set spec '" + text + "': unknown variant '" + parts[0] + "'");
}

/// #B_p(theta, rho, M; alpha, beta): indices m in [1, M] whose Beatty term
/// lands in the window set.  Counts indices, not distinct residues.
inline std::uint64_t beatty_window_count(const PrimeContext& ctx, const AngleTable& angles,
                                         double theta, double rho, std::uint64_t count,
                                         const Window& w) {
  if (!(theta > 0.0)) throw validation_error("beatty: theta must be positive");
  if (count < 1) throw validation_error("beatty: count must be at least 1");
  const std::vector<std::uint8_t> ind = window_indicator(angles, w);
  std::uint64_t hits = 0;
  for (std::uint64_t m = 1; m <= count; ++m)
    hits += ind[detail::beatty_term_mod_p(theta, rho, m, ctx.p())];
  return hits;
}

}  // namespace kloostat
