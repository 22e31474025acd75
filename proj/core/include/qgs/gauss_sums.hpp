#pragma once

// Quartic and quadratic Gauss sums g4(nu,c), g2(nu,c) over Z[i], with
//  * naive definition sums over the canonical fundamental domain,
//  * an O(p) evaluator at degree-1 primes via reduction to a rational
//    character sum,
//  * composition for composite / shifted moduli through twisted
//    multiplicativity and the prime-power table, and
//  * a persistent cache of checked prime values.
//
// Values carry tracked error bounds. Exact zeros are returned with err 0.

#include "qgs/gaussint.hpp"
#include "qgs/numeric.hpp"
#include "qgs/symbols.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace qgs {

// identity-check bits carried by cached prime records
enum : uint8_t {
  kCheckFourthPower = 1,  // g4(pi)^4 = pi^3 * conj(pi)
  kCheckSquarePower = 2,  // g4(pi)^2 = -(-1/pi)_4 sqrt(p) pi
  kCheckSqrtCancel = 4,   // |g4(pi)| = sqrt(N(pi))
  kCheckAll = 7,
};

struct GaussSumRecord {
  GaussInt pi;                  // primary prime
  ComplexVal g4_normalized;     // g4(pi) / sqrt(N(pi))
  SymbolValue minus_one_symbol = SymbolValue::one();  // (-1/pi)_4
  uint8_t checks = 0;
};

// --- naive definition sums ---------------------------------------------------

struct DirectOptions {
  int64_t norm_cap = int64_t(1) << 26;
  Precision precision = Precision::Double;
};

ComplexVal g4_direct(const GaussInt& nu, const GaussInt& c, const DirectOptions& opt = {});
ComplexVal g2_direct(const GaussInt& nu, const GaussInt& c, const DirectOptions& opt = {});

// --- fast prime evaluator ----------------------------------------------------

struct PrimeGaussSums {
  ComplexVal g4;
  ComplexVal g2;
};

// pi primary degree-1 prime (N(pi) = p rational prime, p = 1 mod 4)
PrimeGaussSums prime_gauss_sums_fast(const GaussInt& pi,
                                     Precision precision = Precision::Double);
ComplexVal g4_prime_fast(const GaussInt& pi, Precision precision = Precision::Double);

// build a record for any primary prime (degree-2 values are exact) and run
// the identity checks; throws if a check fails beyond tolerance
GaussSumRecord make_prime_record(const GaussInt& pi,
                                 Precision precision = Precision::Double);

// --- persistent cache ---------------------------------------------------------
//
// Line-oriented text file. First line is the format header; each record line
// is `a b re im err flags crc32` with a,b decimal, re/im/err the hexadecimal
// IEEE-754 bit patterns of the normalized value, flags two hex digits, and
// crc32 over the preceding fields. Corrupt lines are skipped with a warning
// and reported through stats().

class GaussSumCache {
 public:
  static constexpr const char* kHeader = "# qgs-g4-cache v1";

  GaussSumCache() = default;                    // in-memory only
  explicit GaussSumCache(std::string path);     // loads the file if present

  std::optional<GaussSumRecord> get(const GaussInt& pi) const;
  // validates check flags, stores, and appends to the backing file; returns
  // false (and stores nothing) when the flags are incomplete
  bool put(const GaussSumRecord& rec);

  struct Stats {
    size_t records = 0;
    size_t loaded = 0;
    size_t corrupt = 0;
  };
  Stats stats() const;
  size_t size() const;

  // rewrite the backing file with one line per record, dropping duplicates
  void compact();
  // re-scan the backing file; returns the number of corrupt lines
  size_t verify_file() const;

  static std::string encode_line(const GaussSumRecord& rec);
  static std::optional<GaussSumRecord> decode_line(const std::string& line);

 private:
  void load();

  mutable std::shared_mutex mu_;
  std::map<std::pair<int64_t, int64_t>, GaussSumRecord> map_;
  std::string path_;
  mutable std::mutex file_mu_;
  Stats stats_;
};

// --- composition -------------------------------------------------------------

// Evaluates Gauss sums through the factorization of the modulus: coprime-part
// extraction of the shift, twisted multiplicativity across coprime factors,
// and the local prime-power table. Prime values come from the cache when one
// is attached, else they are computed (and cached) on demand.
class G4Evaluator {
 public:
  explicit G4Evaluator(GaussSumCache* cache = nullptr,
                       Precision precision = Precision::Double);

  GaussSumRecord prime_record(const GaussInt& pi);
  ComplexVal g4_tilde_prime(const GaussInt& pi);

  // g4(nu, c) for odd c given its factorization; nu may be 0 or share factors
  ComplexVal g4(const GaussInt& nu, const Factorization& c_fact);
  ComplexVal g4(const GaussInt& nu, const GaussInt& c);
  ComplexVal g4_tilde(const GaussInt& nu, const Factorization& c_fact);
  ComplexVal g4_tilde(const GaussInt& nu, const GaussInt& c);

  Precision precision() const { return precision_; }

 private:
  GaussSumCache* cache_;
  Precision precision_;
  mutable std::shared_mutex memo_mu_;
  std::map<std::pair<int64_t, int64_t>, GaussSumRecord> memo_;
};

// --- moment reduction ---------------------------------------------------------

// g4_tilde(pi)^k via the k mod 4 case reduction (degree-1 primes only);
// g4_tilde is the evaluated normalized sum at pi
ComplexVal moment_reduce(const GaussInt& pi, long long k, const ComplexVal& g4_tilde);

uint32_t crc32(const std::string& data);

}  // namespace qgs
