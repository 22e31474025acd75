#pragma once

// Run configuration shared by the CLI and the test harnesses: bounds,
// class/twist selection, threading, precision mode, cache and output
// locations. Values come from an optional key=value config file overridden
// by command-line flags; unknown keys are rejected.

#include "qgs/gaussint.hpp"
#include "qgs/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgs {

struct RunConfig {
  int64_t x_max = 100000;
  long long ell = 0;
  BetaClass beta = BetaClass::One;
  int64_t u = 10;
  int64_t n_max = 2000;
  unsigned threads = 0;  // 0 = hardware concurrency
  Precision precision = Precision::Double;
  std::string cache_dir;  // empty = $QGS_CACHE_DIR or ".qgs-cache"
  std::string output;     // empty = stdout only
  enum class Format { Csv, Json } format = Format::Csv;
  uint64_t seed = 1;

  void validate() const;                       // throws on out-of-range values
  std::string cache_file() const;              // cache_dir resolved + file name
  static RunConfig from_file(const std::string& path);
  void apply_kv(const std::string& key, const std::string& value);
};

// "1e3:1e5:geometric8" -> 8 geometric points from 1e3 to 1e5 inclusive;
// a bare number yields a single point
std::vector<double> parse_grid(const std::string& text);

Precision parse_precision(const std::string& text);

}  // namespace qgs
