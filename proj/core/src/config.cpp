#include "qgs/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace qgs {

void RunConfig::validate() const {
  if (x_max < 1) throw std::invalid_argument("config: x_max must be positive");
  if (u < 0) throw std::invalid_argument("config: u must be nonnegative");
  if (n_max < 1) throw std::invalid_argument("config: n_max must be positive");
}

std::string RunConfig::cache_file() const {
  std::string dir = cache_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("QGS_CACHE_DIR")) dir = env;
    else dir = ".qgs-cache";
  }
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / "g4_primes.qgc").string();
}

void RunConfig::apply_kv(const std::string& key, const std::string& value) {
  if (key == "x_max") x_max = std::stoll(value);
  else if (key == "ell") ell = std::stoll(value);
  else if (key == "beta") beta = parse_beta(value);
  else if (key == "u") u = std::stoll(value);
  else if (key == "n_max") n_max = std::stoll(value);
  else if (key == "threads") threads = static_cast<unsigned>(std::stoul(value));
  else if (key == "precision") precision = parse_precision(value);
  else if (key == "cache_dir") cache_dir = value;
  else if (key == "output") output = value;
  else if (key == "format") {
    if (value == "csv") format = Format::Csv;
    else if (value == "json") format = Format::Json;
    else throw std::invalid_argument("config: bad format '" + value + "'");
  } else if (key == "seed") seed = std::stoull(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  RunConfig cfg;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    cfg.apply_kv(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
  size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {std::strtod(text.c_str(), nullptr)};
  size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("grid: expected start:end:geometricN");
  double start = std::strtod(text.substr(0, c1).c_str(), nullptr);
  double end = std::strtod(text.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
  std::string mode = text.substr(c2 + 1);
  if (mode.rfind("geometric", 0) != 0)
    throw std::invalid_argument("grid: only geometricN spacing is supported");
  long n = std::strtol(mode.c_str() + 9, nullptr, 10);
  if (n < 1 || start <= 0 || end < start)
    throw std::invalid_argument("grid: bad geometric range");
  std::vector<double> out;
  if (n == 1) return {start};
  for (long j = 0; j < n; ++j)
    out.push_back(start * std::pow(end / start, static_cast<double>(j) / (n - 1)));
  return out;
}

Precision parse_precision(const std::string& text) {
  if (text == "double") return Precision::Double;
  if (text == "dd" || text == "double-double") return Precision::DoubleDouble;
  throw std::invalid_argument("precision: expected 'double' or 'dd'");
}

}  // namespace qgs
