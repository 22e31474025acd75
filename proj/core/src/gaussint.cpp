#include "qgs/gaussint.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace qgs {

std::string GaussInt::str() const {
  std::ostringstream os;
  if (im == 0) {
    os << re;
  } else if (re == 0) {
    if (im == 1) os << "i";
    else if (im == -1) os << "-i";
    else os << im << "i";
  } else {
    os << re;
    if (im > 0) os << "+";
    if (im == 1) os << "i";
    else if (im == -1) os << "-i";
    else os << im << "i";
  }
  return os.str();
}

bool norm_lex_less(const GaussInt& a, const GaussInt& b) {
  Int na = a.norm(), nb = b.norm();
  if (na != nb) return na < nb;
  return lex_less(a, b);
}

GaussInt parse_gauss_int(const std::string& text) {
  // accepted: "a", "bi", "a+bi", "a-bi", with b optionally omitted when 1
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty Gaussian integer literal");

  auto parse_int = [](const std::string& t) -> Int {
    if (t.empty() || t == "+") return 1;
    if (t == "-") return -1;
    return t[0] == '+' ? Int(t.substr(1)) : Int(t);
  };

  // find the split point: a +/- that is not the leading sign
  size_t split = std::string::npos;
  for (size_t j = 1; j < s.size(); ++j)
    if (s[j] == '+' || s[j] == '-') split = j;

  try {
    if (s.back() == 'i') {
      std::string body = s.substr(0, s.size() - 1);
      if (split == std::string::npos) return {Int(0), parse_int(body)};
      return {Int(body.substr(0, split)), parse_int(body.substr(split))};
    }
    if (split != std::string::npos) throw std::invalid_argument("bad literal");
    return {Int(s), Int(0)};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad Gaussian integer literal: '" + text + "'");
  }
}

// ---------------------------------------------------------------------------
// Division / residues
// ---------------------------------------------------------------------------

namespace {

// round(a/n) for n > 0, half rounded up (deterministic)
Int round_div(const Int& a, const Int& n) {
  Int num = 2 * a + n;
  Int den = 2 * n;
  Int q = num / den;            // truncates toward zero
  if (num < 0 && q * den != num) --q;  // floor
  return q;
}

}  // namespace

DivMod divmod(const GaussInt& z, const GaussInt& m) {
  if (m.is_zero()) throw std::invalid_argument("division by zero modulus");
  Int n = m.norm();
  GaussInt t = z * m.conj();
  GaussInt q{round_div(t.re, n), round_div(t.im, n)};
  GaussInt r = z - q * m;
  // nearest rounding leaves |r| <= |m|, so the minimal-norm representative
  // differs from r by u*m with u in {0, +-1, +-i, +-1+-i}
  static const std::array<GaussInt, 9> kShifts = {
      GaussInt(0, 0), GaussInt(1, 0),  GaussInt(-1, 0), GaussInt(0, 1),
      GaussInt(0, -1), GaussInt(1, 1), GaussInt(1, -1), GaussInt(-1, 1),
      GaussInt(-1, -1)};
  GaussInt best = r;
  GaussInt best_q = q;
  Int best_norm = r.norm();
  for (size_t j = 1; j < kShifts.size(); ++j) {
    GaussInt cand = r - kShifts[j] * m;
    Int cn = cand.norm();
    if (cn < best_norm || (cn == best_norm && lex_less(cand, best))) {
      best = cand;
      best_norm = cn;
      best_q = q + kShifts[j];
    }
  }
  return {best_q, best};
}

GaussInt canonical_mod(const GaussInt& z, const GaussInt& m) { return divmod(z, m).rem; }

std::optional<GaussInt> div_exact(const GaussInt& z, const GaussInt& d) {
  if (d.is_zero()) return std::nullopt;
  Int n = d.norm();
  GaussInt t = z * d.conj();
  if (t.re % n != 0 || t.im % n != 0) return std::nullopt;
  return GaussInt{t.re / n, t.im / n};
}

bool divides(const GaussInt& d, const GaussInt& z) { return div_exact(z, d).has_value(); }

GaussInt mod_pow(const GaussInt& b, const Int& e, const GaussInt& m) {
  if (m.is_zero()) throw std::invalid_argument("mod_pow: zero modulus");
  if (e < 0) throw std::invalid_argument("mod_pow: negative exponent");
  GaussInt base = canonical_mod(b, m);
  GaussInt acc = canonical_mod(GaussInt(1), m);
  Int k = e;
  while (k > 0) {
    if ((k & 1) != 0) acc = canonical_mod(acc * base, m);
    base = canonical_mod(base * base, m);
    k >>= 1;
  }
  return acc;
}

GaussInt gcd(GaussInt a, GaussInt b) {
  while (!b.is_zero()) {
    GaussInt r = canonical_mod(a, b);
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  // first-quadrant associate: re > 0, im >= 0
  for (int k = 0; k < 4; ++k) {
    GaussInt c = a.times_i(k);
    if (c.re > 0 && c.im >= 0) return c;
  }
  return a;  // unreachable
}

bool coprime(const GaussInt& a, const GaussInt& b) { return gcd(a, b).is_unit(); }

// ---------------------------------------------------------------------------
// lambda-adic structure
// ---------------------------------------------------------------------------

int ord_lambda(const GaussInt& z) {
  if (z.is_zero()) throw std::invalid_argument("ord_lambda(0)");
  GaussInt w = z;
  int k = 0;
  while (w.is_even()) {
    // w / lambda = w * (1-i) / 2
    Int r = (w.re + w.im) / 2;
    Int i = (w.im - w.re) / 2;
    w = {r, i};
    ++k;
  }
  return k;
}

bool is_primary(const GaussInt& z) {
  // (z - 1) / lambda^3 integral; lambda^3 = -2+2i
  GaussInt d = z - GaussInt(1);
  if (d.is_zero()) return true;
  return divides(GaussInt(-2, 2), d);
}

PrimaryDecomp primary_associate(const GaussInt& z) {
  if (z.is_zero()) throw std::invalid_argument("primary_associate(0)");
  PrimaryDecomp out;
  GaussInt w = z;
  while (w.is_even()) {
    Int r = (w.re + w.im) / 2;
    Int i = (w.im - w.re) / 2;
    w = {r, i};
    ++out.lambda_exp;
  }
  for (int k = 0; k < 4; ++k) {
    GaussInt c = w.times_i(k);
    if (is_primary(c)) {
      out.unit_exp = k;
      out.primary_part = c;
      return out;
    }
  }
  throw std::logic_error("no primary associate found");  // cannot happen for odd w
}

std::vector<int> lambda_digits(const GaussInt& gamma, int count) {
  if (!is_primary(gamma)) throw std::invalid_argument("lambda_digits: input not primary");
  std::vector<int> digits;
  GaussInt t = *div_exact(gamma - GaussInt(1), GaussInt(-2, 2));  // (gamma-1)/lambda^3
  for (int j = 3; j <= count; ++j) {
    int bit = static_cast<int>((t.re + t.im) & 1);
    digits.push_back(bit);
    if (bit) t -= GaussInt(1);
    Int r = (t.re + t.im) / 2;
    Int i = (t.im - t.re) / 2;
    t = {r, i};
  }
  return digits;
}

BetaClass beta_class(const GaussInt& primary) {
  if (!is_primary(primary)) throw std::invalid_argument("beta_class: input not primary");
  GaussInt d = primary - GaussInt(1);
  if (d.is_zero()) return BetaClass::One;
  GaussInt t = *div_exact(d, GaussInt(-2, 2));
  return ((t.re + t.im) & 1) == 0 ? BetaClass::One : BetaClass::OnePlusLambda3;
}

GaussInt beta_rep(BetaClass b) {
  return b == BetaClass::One ? GaussInt(1) : GaussInt(-1, 2);
}

int beta_norm_quarter_parity(BetaClass b) { return b == BetaClass::One ? 0 : 1; }

std::string beta_str(BetaClass b) { return b == BetaClass::One ? "1" : "1+l3"; }

BetaClass parse_beta(const std::string& text) {
  if (text == "1") return BetaClass::One;
  if (text == "1+l3" || text == "1+L3") return BetaClass::OnePlusLambda3;
  throw std::invalid_argument("bad beta class '" + text + "' (expected '1' or '1+l3')");
}

// ---------------------------------------------------------------------------
// int64 interop
// ---------------------------------------------------------------------------

bool fits_int64(const GaussInt& z) {
  static const Int lo = std::numeric_limits<int64_t>::min();
  static const Int hi = std::numeric_limits<int64_t>::max();
  return z.re >= lo && z.re <= hi && z.im >= lo && z.im <= hi;
}

std::pair<int64_t, int64_t> to_int64(const GaussInt& z) {
  return {static_cast<int64_t>(z.re), static_cast<int64_t>(z.im)};
}

double to_double(const Int& n) { return static_cast<double>(n); }

}  // namespace qgs
