#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/prime.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

// Default cap keeps a table of p doubles around half a gigabyte.
inline constexpr std::uint64_t default_size_cap = std::uint64_t{1} << 26;

struct PrimeContextOptions {
  bool build_inverses = false;
  bool build_dlog = false;   // implies finding the generator
  bool build_roots = false;  // table of e_p(z) for z = 0..p-1
  std::uint64_t size_cap = default_size_cap;
};

/// The field F_p plus derived constants and optional lookup tables.
/// Immutable after construction; every accessor is const and thread-safe.
class PrimeContext {
public:
  static constexpr std::uint64_t default_cap = default_size_cap;
  static constexpr std::uint64_t hard_cap = std::uint64_t{1} << 31;

  using Options = PrimeContextOptions;

  explicit PrimeContext(std::uint64_t p, const Options& opt = {}) : p_(p) {
    if (p >= hard_cap)
      throw validation_error("p = " + std::to_string(p) + " rejected: >= 2^31");
    if (p > opt.size_cap)
      throw validation_error("p = " + std::to_string(p) +
                             " exceeds the size cap " + std::to_string(opt.size_cap) +
                             " (raise the cap to force)");
    if (p < 3 || !is_prime(p))
      throw validation_error("p = " + std::to_string(p) + " is not an odd prime");
    n_ = static_cast<unsigned>(std::bit_width(p) - 1);  // 2^n <= p < 2^(n+1)
    if (opt.build_inverses) build_inverse_table();
    if (opt.build_dlog) build_dlog_table();
    if (opt.build_roots) build_root_table();
  }

  std::uint64_t p() const { return p_; }
  unsigned n() const { return n_; }
  double sqrt_p() const { return std::sqrt(static_cast<double>(p_)); }

  bool has_inverses() const { return !inv_.empty(); }
  bool has_dlog() const { return !dlog_.empty(); }
  bool has_roots() const { return !roots_.empty(); }
  std::optional<std::uint64_t> generator() const { return g_; }

  /// Inverse of a in F_p^*; table lookup when built, extended Euclid otherwise.
  std::uint64_t inverse(std::uint64_t a) const {
    a %= p_;
    if (a == 0) throw validation_error("inverse of 0 requested");
    if (!inv_.empty()) return inv_[a];
    return mod_inverse(a, p_);
  }

  /// Index j with g^j = a (mod p).  Requires the dlog table.
  std::uint64_t dlog(std::uint64_t a) const {
    a %= p_;
    if (a == 0) throw validation_error("dlog of 0 requested");
    if (dlog_.empty()) throw validation_error("dlog table not built for this context");
    return dlog_[a];
  }

  /// e_p(z) = exp(2*pi*i*z/p).  Callers reduce z mod p first.
  cplx ep(std::uint64_t z) const {
    z %= p_;
    if (!roots_.empty()) return roots_[z];
    return unit_root(z);
  }

  std::uint64_t reduce(std::uint64_t x) const { return x % p_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mod_mul(a, b, p_); }

private:
  cplx unit_root(std::uint64_t z) const {
    // Conjugate symmetry around p/2 keeps the argument of sin/cos below pi
    // and makes roots[p-z] exactly conj(roots[z]).
    if (2 * z > p_) return std::conj(unit_root(p_ - z));
    const long double ang = 2.0L * 3.141592653589793238462643383279502884L *
                            static_cast<long double>(z) / static_cast<long double>(p_);
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
  }

  void build_inverse_table() {
    // inv(a) = -(p/a) * inv(p mod a) mod p, filled in one O(p) pass.
    inv_.assign(p_, 0);
    inv_[1] = 1;
    for (std::uint64_t a = 2; a < p_; ++a) {
      const std::uint64_t q = p_ / a;
      const std::uint64_t r = p_ % a;
      inv_[a] = static_cast<std::uint32_t>(p_ - (q * inv_[r]) % p_);
    }
  }

  void build_dlog_table() {
    g_ = find_generator(p_);
    dlog_.assign(p_, 0);
    std::uint64_t pw = 1;
    for (std::uint64_t j = 0; j + 1 < p_; ++j) {
      dlog_[pw] = static_cast<std::uint32_t>(j);
      pw = mod_mul(pw, *g_, p_);
    }
  }

  void build_root_table() {
    roots_.resize(p_);
    const std::uint64_t half = p_ / 2;
    parallel_for(0, half + 1, [this](std::uint64_t z) { roots_[z] = unit_root(z); });
    for (std::uint64_t z = half + 1; z < p_; ++z) roots_[z] = std::conj(roots_[p_ - z]);
  }

  std::uint64_t p_;
  unsigned n_ = 0;
  std::optional<std::uint64_t> g_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> dlog_;
  std::vector<cplx> roots_;
};

}  // namespace kloostat
