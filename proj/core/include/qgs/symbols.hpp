#pragma once

// Quadratic and quartic residue symbols over Z[i].
//
// Three evaluation routes are provided:
//  * quartic_symbol_euler: the defining Euler criterion at a prime modulus
//    (slow reference).
//  * quartic_symbol_factored: multiplicative extension of the Euler criterion
//    over a factored denominator (slow oracle, used by tests).
//  * quartic_symbol: the production evaluator, which never factors. It strips
//    units and lambda powers from the numerator with the supplementary laws,
//    reduces, and flips numerator and denominator with the reciprocity sign
//    (-1)^C until the denominator is a unit.
//
// Symbols with a non-primary odd denominator are evaluated on its primary
// associate; at prime modulus the Euler criterion makes the symbol depend
// only on the ideal, and the multiplicative extension preserves that.

#include "qgs/gaussint.hpp"

#include <complex>

namespace qgs {

// An element of {0, 1, i, -1, -i}: either zero or an exponent k meaning i^k.
class SymbolValue {
 public:
  static SymbolValue zero() { return SymbolValue(-1); }
  static SymbolValue one() { return SymbolValue(0); }
  static SymbolValue i_pow(int k) { return SymbolValue(((k % 4) + 4) % 4); }

  bool is_zero() const { return e_ < 0; }
  int exponent() const {
    if (is_zero()) throw std::logic_error("SymbolValue: exponent of zero");
    return e_;
  }

  SymbolValue operator*(SymbolValue o) const {
    if (is_zero() || o.is_zero()) return zero();
    return SymbolValue((e_ + o.e_) & 3);
  }
  SymbolValue& operator*=(SymbolValue o) { return *this = *this * o; }
  SymbolValue squared() const { return *this * *this; }
  SymbolValue conj() const { return is_zero() ? zero() : i_pow(-e_); }
  SymbolValue pow(long long k) const {
    if (is_zero()) return k == 0 ? one() : zero();
    return i_pow(static_cast<int>(((e_ * (k % 4)) % 4 + 4) % 4));
  }

  std::complex<double> value() const {
    if (is_zero()) return {0.0, 0.0};
    switch (e_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  GaussInt unit() const {
    if (is_zero()) throw std::logic_error("SymbolValue: unit of zero");
    return unit_i_pow(e_);
  }
  std::string str() const;

  bool operator==(SymbolValue o) const { return e_ == o.e_; }
  bool operator!=(SymbolValue o) const { return e_ != o.e_; }

 private:
  explicit SymbolValue(int e) : e_(e) {}
  int e_;
};

// Euler criterion at a prime modulus pi, (pi) != (lambda):
// the unique unit u with alpha^((N(pi)-1)/4) = u (mod pi), or zero if pi | alpha
SymbolValue quartic_symbol_euler(const GaussInt& alpha, const GaussInt& pi);
SymbolValue quadratic_symbol_euler(const GaussInt& alpha, const GaussInt& pi);

// factor-then-Euler oracle for odd gamma != 0
SymbolValue quartic_symbol_factored(const GaussInt& alpha, const GaussInt& gamma,
                                    const FactorOptions& opt = {});

// fast reciprocity-based evaluator; gamma odd, gamma != 0, alpha arbitrary
SymbolValue quartic_symbol(const GaussInt& alpha, const GaussInt& gamma);
SymbolValue quadratic_symbol(const GaussInt& alpha, const GaussInt& gamma);

// supplementary laws for a primary denominator with lambda digits a3..a6
SymbolValue symbol_of_lambda(const std::vector<int>& digits);
SymbolValue symbol_of_i(const std::vector<int>& digits);

// reciprocity exponent C(alpha,gamma) = (N(alpha)-1)/4 * (N(gamma)-1)/4 mod 2,
// both arguments primary
int c_parity(const GaussInt& alpha, const GaussInt& gamma);
int c_parity(const GaussInt& alpha, BetaClass gamma_class);
int c_parity(BetaClass a, BetaClass b);

// unit-modulus angular character (conj(c)/|c|)^ell
std::complex<double> grossencharakter(const GaussInt& c, long long ell);

namespace detail {
// fixed-width fast path used by the Gauss-sum inner loops; gamma must be a
// primary non-unit with norm < 2^31 and alpha coordinates below 2^31;
// returns the i-exponent of the symbol, or -1 for zero
int sym4_i64(int64_t are, int64_t aim, int64_t gre, int64_t gim);
}  // namespace detail

}  // namespace qgs
