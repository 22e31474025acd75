#include "qgs/gauss_sums.hpp"

#include <array>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qgs {

uint32_t crc32(const std::string& data) {
  static const std::array<uint32_t, 256> table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  uint32_t c = 0xFFFFFFFFu;
  for (unsigned char ch : data) c = table[(c ^ ch) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

namespace {

std::string hex_double(double d) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, std::bit_cast<uint64_t>(d));
  return buf;
}

std::optional<double> parse_hex_double(const std::string& s) {
  if (s.size() != 16) return std::nullopt;
  uint64_t bits = 0;
  for (char ch : s) {
    int v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    else return std::nullopt;
    bits = (bits << 4) | static_cast<uint64_t>(v);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string GaussSumCache::encode_line(const GaussSumRecord& rec) {
  if (!fits_int64(rec.pi)) throw std::invalid_argument("cache: prime out of range");
  auto [a, b] = to_int64(rec.pi);
  char head[64];
  std::snprintf(head, sizeof head, "%" PRId64 " %" PRId64, a, b);
  std::string body = std::string(head) + " " + hex_double(rec.g4_normalized.re()) + " " +
                     hex_double(rec.g4_normalized.im()) + " " +
                     hex_double(rec.g4_normalized.err);
  char flags[8];
  std::snprintf(flags, sizeof flags, " %02x", rec.checks);
  body += flags;
  char crc[16];
  std::snprintf(crc, sizeof crc, " %08x", crc32(body));
  return body + crc;
}

std::optional<GaussSumRecord> GaussSumCache::decode_line(const std::string& line) {
  // a b re im err flags crc32
  std::array<std::string, 7> tok;
  size_t pos = 0, field = 0;
  while (field < 7 && pos < line.size()) {
    size_t sp = line.find(' ', pos);
    if (sp == std::string::npos) sp = line.size();
    tok[field++] = line.substr(pos, sp - pos);
    pos = sp + 1;
  }
  if (field != 7 || pos < line.size()) return std::nullopt;
  std::string prefix = tok[0];
  for (int j = 1; j < 6; ++j) prefix += " " + tok[j];
  uint32_t want = 0;
  if (tok[6].size() != 8 || std::sscanf(tok[6].c_str(), "%x", &want) != 1) return std::nullopt;
  if (crc32(prefix) != want) return std::nullopt;

  GaussSumRecord rec;
  try {
    rec.pi = GaussInt(Int(tok[0]), Int(tok[1]));
  } catch (...) {
    return std::nullopt;
  }
  auto re = parse_hex_double(tok[2]);
  auto im = parse_hex_double(tok[3]);
  auto err = parse_hex_double(tok[4]);
  unsigned flags = 0;
  if (!re || !im || !err || std::sscanf(tok[5].c_str(), "%x", &flags) != 1)
    return std::nullopt;
  rec.g4_normalized = ComplexVal{{*re, *im}, *err};
  rec.checks = static_cast<uint8_t>(flags);
  if (rec.checks != kCheckAll) return std::nullopt;
  if (!is_primary(rec.pi) || !is_prime(rec.pi)) return std::nullopt;
  rec.minus_one_symbol = quartic_symbol(GaussInt(-1, 0), rec.pi);
  return rec;
}

GaussSumCache::GaussSumCache(std::string path) : path_(std::move(path)) { load(); }

void GaussSumCache::load() {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kHeader) continue;
      // fall through: header missing, treat the line as a record attempt
    }
    if (line[0] == '#') continue;
    auto rec = decode_line(line);
    if (!rec) {
      ++stats_.corrupt;
      std::fprintf(stderr, "qgs: cache %s: skipping corrupt line\n", path_.c_str());
      continue;
    }
    map_[to_int64(rec->pi)] = *rec;
    ++stats_.loaded;
  }
  stats_.records = map_.size();
}

std::optional<GaussSumRecord> GaussSumCache::get(const GaussInt& pi) const {
  if (!fits_int64(pi)) return std::nullopt;
  std::shared_lock lk(mu_);
  auto it = map_.find(to_int64(pi));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

bool GaussSumCache::put(const GaussSumRecord& rec) {
  if (rec.checks != kCheckAll) return false;
  auto key = to_int64(rec.pi);
  {
    std::unique_lock lk(mu_);
    auto [it, inserted] = map_.emplace(key, rec);
    (void)it;
    if (!inserted) return true;  // idempotent
    stats_.records = map_.size();
  }
  if (!path_.empty()) {
    std::scoped_lock lk(file_mu_);
    bool fresh = !std::filesystem::exists(path_);
    std::ofstream out(path_, std::ios::app);
    if (out) {
      if (fresh) out << kHeader << "\n";
      out << encode_line(rec) << "\n";
    }
  }
  return true;
}

GaussSumCache::Stats GaussSumCache::stats() const {
  std::shared_lock lk(mu_);
  return stats_;
}

size_t GaussSumCache::size() const {
  std::shared_lock lk(mu_);
  return map_.size();
}

void GaussSumCache::compact() {
  if (path_.empty()) return;
  std::scoped_lock flk(file_mu_);
  std::shared_lock lk(mu_);
  std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << kHeader << "\n";
    for (const auto& [key, rec] : map_) out << encode_line(rec) << "\n";
  }
  std::filesystem::rename(tmp, path_);
}

size_t GaussSumCache::verify_file() const {
  if (path_.empty()) return 0;
  std::ifstream in(path_);
  if (!in) return 0;
  std::string line;
  size_t corrupt = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!decode_line(line)) ++corrupt;
  }
  return corrupt;
}

}  // namespace qgs
