#pragma once

// Exact arithmetic in Z[i]: norms, units, primary normalization, lambda-adic
// structure, gcd/mod arithmetic, factorization, and the arithmetic functions
// mu and Lambda.
//
// Conventions used throughout the library:
//  * lambda = 1+i is the ramified prime; 2 = -i*lambda^2.
//  * An element is "odd" when lambda does not divide it.
//  * An odd element is "primary" when it is = 1 (mod lambda^3); every odd
//    ideal has exactly one primary generator.
//  * Residues mod m are reduced to the representative of minimal norm,
//    ties broken by lexicographically smallest (re, im).

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgs {

using Int = boost::multiprecision::cpp_int;

struct GaussInt {
  Int re;
  Int im;

  GaussInt() = default;
  GaussInt(Int r, Int i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussInt(long long r) : re(r), im(0) {}
  GaussInt(long long r, long long i) : re(r), im(i) {}

  Int norm() const { return re * re + im * im; }
  GaussInt conj() const { return {re, -im}; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool is_unit() const { return norm() == 1; }
  bool is_one() const { return re == 1 && im == 0; }

  // true when lambda | z, i.e. re+im is even
  bool is_even() const { return ((re + im) & 1) == 0; }

  GaussInt operator-() const { return {-re, -im}; }
  GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
  GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
  GaussInt operator*(const GaussInt& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussInt& operator+=(const GaussInt& o) { re += o.re; im += o.im; return *this; }
  GaussInt& operator-=(const GaussInt& o) { re -= o.re; im -= o.im; return *this; }
  GaussInt& operator*=(const GaussInt& o) { *this = *this * o; return *this; }

  bool operator==(const GaussInt& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussInt& o) const { return !(*this == o); }

  // multiply by i^k, k in 0..3
  GaussInt times_i(int k) const {
    switch (((k % 4) + 4) % 4) {
      case 0: return *this;
      case 1: return {-im, re};
      case 2: return {-re, -im};
      default: return {im, -re};
    }
  }

  std::string str() const;
};

inline GaussInt unit_i_pow(int k) { return GaussInt(1, 0).times_i(k); }
inline GaussInt lambda() { return {1, 1}; }

// lexicographic (re, im); used for deterministic tie-breaking
inline bool lex_less(const GaussInt& a, const GaussInt& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}
// total order by (norm, re, im); the enumeration order used everywhere
bool norm_lex_less(const GaussInt& a, const GaussInt& b);

struct GaussIntKey {
  bool operator()(const GaussInt& a, const GaussInt& b) const { return lex_less(a, b); }
};

// "a+bi" literals, e.g. "-1+2i", "3", "i", "1-1i"
GaussInt parse_gauss_int(const std::string& text);

// ---------------------------------------------------------------------------
// Division and residues
// ---------------------------------------------------------------------------

// quotient/remainder with the canonical (minimal-norm, lex tie-break) remainder
struct DivMod {
  GaussInt quot;
  GaussInt rem;
};
DivMod divmod(const GaussInt& z, const GaussInt& m);
GaussInt canonical_mod(const GaussInt& z, const GaussInt& m);

// exact division; nullopt when d does not divide z
std::optional<GaussInt> div_exact(const GaussInt& z, const GaussInt& d);
bool divides(const GaussInt& d, const GaussInt& z);

// b^e mod m, canonical residue; e >= 0, m != 0
GaussInt mod_pow(const GaussInt& b, const Int& e, const GaussInt& m);

// greatest common divisor, normalized to the first-quadrant associate
// (re > 0, im >= 0); gcd(0,0) = 0
GaussInt gcd(GaussInt a, GaussInt b);
bool coprime(const GaussInt& a, const GaussInt& b);

// ---------------------------------------------------------------------------
// Units, lambda-adic structure, primary form
// ---------------------------------------------------------------------------

int ord_lambda(const GaussInt& z);       // z != 0
bool is_primary(const GaussInt& z);      // z = 1 (mod lambda^3)

struct PrimaryDecomp {
  // unit_exp is the k in 0..3 with i^k * (z / lambda^lambda_exp) primary,
  // so z = i^((4-k)%4) * lambda^lambda_exp * primary_part.
  int unit_exp = 0;
  int lambda_exp = 0;
  GaussInt primary_part;
};
PrimaryDecomp primary_associate(const GaussInt& z);

// lambda-adic digits a_3..a_count of a primary element:
// gamma = 1 + a_3 l^3 + a_4 l^4 + ... (mod l^(count+1)), digits in {0,1}
std::vector<int> lambda_digits(const GaussInt& gamma, int count);

// Residue class mod 4 of a primary element. The two classes are represented
// by 1 and 1+lambda^3 = -1+2i; they form a group of order two.
enum class BetaClass : uint8_t { One = 0, OnePlusLambda3 = 1 };

BetaClass beta_class(const GaussInt& primary);
inline BetaClass beta_mul(BetaClass a, BetaClass b) {
  return static_cast<BetaClass>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
GaussInt beta_rep(BetaClass b);          // 1 or -1+2i
// parity of (N(c)-1)/4, constant on the class
int beta_norm_quarter_parity(BetaClass b);
std::string beta_str(BetaClass b);
BetaClass parse_beta(const std::string& text);

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

bool is_rational_prime(const Int& n);
bool is_prime(const GaussInt& z);

struct FactorOptions {
  // bound on Pollard-Brent iterations per split attempt before giving up
  uint64_t rho_effort = 1u << 26;
};

struct Factorization {
  // z = i^unit_exp * lambda^lambda_exp * prod primes[j].first^primes[j].second,
  // primes primary, pairwise non-associate, sorted by (norm, re, im)
  int unit_exp = 0;
  int lambda_exp = 0;
  std::vector<std::pair<GaussInt, int>> primes;

  GaussInt reconstruct() const;
  bool squarefree_odd() const;           // all exponents 1 and lambda_exp == 0
};

Factorization factor(const GaussInt& z, const FactorOptions& opt = {});

// Moebius function of a primary element: 0 unless squarefree, else (-1)^k
int moebius(const GaussInt& c, const FactorOptions& opt = {});
// von Mangoldt: log N(pi) when c = pi^k for a primary prime pi, else 0
double von_mangoldt(const GaussInt& c, const FactorOptions& opt = {});

// valuation of pi in z (z != 0)
int ord_at(const GaussInt& z, const GaussInt& pi);

// divisors of a factored element, as primary elements, sorted by (norm,re,im)
std::vector<GaussInt> primary_divisors(const Factorization& f);

// ---------------------------------------------------------------------------
// Rational 64-bit helpers (shared by factorization and sieving)
// ---------------------------------------------------------------------------

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m);
bool is_prime_u64(uint64_t n);           // deterministic Miller-Rabin
std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n, uint64_t rho_effort = 1u << 26);
// square root of -1 mod p for a rational prime p = 1 (mod 4)
uint64_t sqrt_minus_one_mod(uint64_t p);
// the degree-1 primary prime above p = 1 (mod 4) with positive imaginary part
// picked deterministically; the other one is its conjugate
GaussInt split_prime(uint64_t p);

bool fits_int64(const GaussInt& z);
std::pair<int64_t, int64_t> to_int64(const GaussInt& z);
double to_double(const Int& n);

}  // namespace qgs
