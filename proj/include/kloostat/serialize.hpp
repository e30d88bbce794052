#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "kloostat/acceptance.hpp"
#include "kloostat/errors.hpp"
#include "kloostat/nonlinearity.hpp"
#include "kloostat/sumset.hpp"
#include "kloostat/version.hpp"

namespace kloostat {

using json = nlohmann::ordered_json;

/// 17 significant digits: doubles survive the round trip through text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const SumsetReport& r) {
  return json{{"p", r.p},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"size_u", r.size_u},
              {"size_v", r.size_v},
              {"observed", r.observed},
              {"main_term", r.main_term},
              {"abs_error", r.abs_error},
              {"bound", r.bound},
              {"ratio", r.ratio},
              {"threshold_met", r.threshold_met}};
}

inline json nonlinearity_summary_json(std::uint64_t p, const Theorem2Report& r) {
  return json{{"p", p},
              {"n", r.n},
              {"nonlinearity", r.nonlin},
              {"max_abs_coeff", r.max_abs_coeff},
              {"defect", r.defect},
              {"scaled_ratio", r.scaled_ratio}};
}

inline json to_json(const CriterionResult& r) {
  return json{{"id", r.id},
              {"name", r.name},
              {"pass", r.pass},
              {"detail", r.detail},
              {"timing", {{"note", r.timing_note}, {"seconds", r.seconds}}}};
}

/// Atomic text publish: temp file in the same directory, then rename.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw validation_error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw validation_error("rename to " + path.string() + " failed: " + ec.message());
  }
}

}  // namespace kloostat
