#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "kloostat/errors.hpp"

namespace kloostat {

using cplx = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
  return std::bit_ceil(n);
}

/// Unbiased draw from [0, n) off a named 64-bit generator.  Avoids
/// std::uniform_int_distribution, whose output is implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  if (n == 0) throw validation_error("uniform_below: empty range");
  if ((n & (n - 1)) == 0) return gen() & (n - 1);
  const std::uint64_t cutoff = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = gen();
    if (r >= cutoff) return r % n;
  }
}

/// Identifier of the PRNG used everywhere a seed appears in output.
inline constexpr const char* rng_name = "mt19937_64";

/// Tree summation; error grows with log(count) rather than count.
inline cplx pairwise_sum(std::span<const cplx> v) {
  if (v.size() <= 32) {
    cplx s{0.0, 0.0};
    for (const cplx& x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Worker count: hardware concurrency capped by KLOOSTAT_THREADS.
inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("KLOOSTAT_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap >= 1 && cap < hw) hw = static_cast<unsigned>(cap);
  }
  return hw;
}

/// Runs body(i) for i in [begin, end) over disjoint index chunks.
/// body must not touch shared mutable state outside its own indices.
template <typename Body>
void parallel_for(std::uint64_t begin, std::uint64_t end, Body&& body) {
  const std::uint64_t n = end > begin ? end - begin : 0;
  const unsigned workers = thread_budget();
  if (workers <= 1 || n < 4096) {
    for (std::uint64_t i = begin; i < end; ++i) body(i);
    return;
  }
  const std::uint64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    const std::uint64_t lo = begin + w * chunk;
    if (lo >= end) break;
    const std::uint64_t hi = std::min(end, lo + chunk);
    pool.emplace_back([&body, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) body(i);
    });
  }
  const std::uint64_t hi0 = std::min(end, begin + chunk);
  for (std::uint64_t i = begin; i < hi0; ++i) body(i);
  for (std::thread& t : pool) t.join();
}

// Little-endian scalar encoding for the table file format.
inline void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64le(std::string& out, double v) {
  put_u64le(out, std::bit_cast<std::uint64_t>(v));
}
inline std::uint32_t get_u32le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
inline std::uint64_t get_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
inline double get_f64le(const unsigned char* p) {
  return std::bit_cast<double>(get_u64le(p));
}

}  // namespace kloostat
