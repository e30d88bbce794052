#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "kloostat/errors.hpp"
#include "kloostat/kloosterman.hpp"
#include "kloostat/util.hpp"

namespace kloostat {

// KLST file layout, all little-endian:
//   "KLST" | u32 version | u64 p | u8 method | f64 err_bound | (p-1) x f64 values
inline constexpr std::uint32_t klst_version = 1;

inline void write_table(const KloostermanTable& table, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(4 + 4 + 8 + 1 + 8 + 8 * table.values.size());
  buf.append("KLST");
  put_u32le(buf, klst_version);
  put_u64le(buf, table.p);
  buf.push_back(static_cast<char>(table.method));
  put_f64le(buf, table.err_bound);
  for (double v : table.values) put_f64le(buf, v);

  // Atomic publish: write a sibling temp file, then rename over the target.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("write_table: cannot open " + tmp.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw validation_error("write_table: short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw validation_error("write_table: rename to " + path.string() + " failed: " + ec.message());
  }
}

inline KloostermanTable read_table(const std::filesystem::path& path,
                                   std::optional<std::uint64_t> expect_p = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("read_table: cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* b = reinterpret_cast<const unsigned char*>(buf.data());

  if (buf.size() < 25 || buf.compare(0, 4, "KLST") != 0)
    throw format_error("read_table: bad magic in " + path.string());
  const std::uint32_t version = get_u32le(b + 4);
  if (version != klst_version)
    throw format_error("read_table: unsupported version " + std::to_string(version));
  const std::uint64_t p = get_u64le(b + 8);
  const std::uint8_t method_byte = b[16];
  if (method_byte > 1)
    throw format_error("read_table: unknown method byte " + std::to_string(method_byte));
  if (p < 3 || p >= PrimeContext::hard_cap)
    throw format_error("read_table: implausible p " + std::to_string(p));
  const std::size_t expected_size = 25 + 8 * static_cast<std::size_t>(p - 1);
  if (buf.size() != expected_size)
    throw format_error("read_table: truncated or oversized file (" + std::to_string(buf.size()) +
                       " bytes, expected " + std::to_string(expected_size) + ")");
  if (expect_p && p != *expect_p)
    throw format_error("read_table: file holds p = " + std::to_string(p) +
                       " but p = " + std::to_string(*expect_p) + " was requested");

  KloostermanTable t;
  t.p = p;
  t.method = static_cast<Method>(method_byte);
  t.err_bound = get_f64le(b + 17);
  t.values.resize(p - 1);
  for (std::uint64_t i = 0; i + 1 < p; ++i) t.values[i] = get_f64le(b + 25 + 8 * i);
  return t;
}

}  // namespace kloostat
