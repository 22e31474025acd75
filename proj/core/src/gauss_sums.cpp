#include "qgs/gauss_sums.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace qgs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// phasor is re-anchored with sincos every kAnchor steps; the error charged
// per term covers the worst-case drift between anchors
constexpr int kAnchor = 128;
constexpr double kPerTermErr = 6.0e-14;

inline Cplx unit_times(int e, Cplx w) {
  switch (e & 3) {
    case 0: return w;
    case 1: return {-w.imag(), w.real()};
    case 2: return -w;
    default: return {w.imag(), -w.real()};
  }
}

// shared body of g4_direct / g2_direct; order is 4 or 2
ComplexVal direct_sum(const GaussInt& nu, const GaussInt& c, int order,
                      const DirectOptions& opt) {
  if (c.is_zero() || c.is_even())
    throw std::invalid_argument("direct Gauss sum: modulus must be odd and nonzero");
  Int norm_big = c.norm();
  if (norm_big == 1) return ComplexVal::exact({1.0, 0.0});
  if (norm_big > opt.norm_cap || norm_big >= (Int(1) << 31))
    throw std::invalid_argument("direct Gauss sum: norm cap exceeded");

  const int64_t n = static_cast<int64_t>(norm_big);
  auto [cre, cim] = to_int64(c);
  const int64_t content = std::gcd(std::llabs(cre), std::llabs(cim));
  const int64_t rows = content;              // y in [0, content)
  const int64_t row_len = n / content;       // x in [0, n/content)

  auto [g0re, g0im] = to_int64(primary_associate(c).primary_part);

  // phase index of d = x+iy is 2*Re(nu * d * conj(c)) mod n; reducing nu mod c
  // shifts the index by a multiple of n
  GaussInt nr = canonical_mod(nu, c);
  GaussInt w_big = nr * c.conj();
  auto [wre, wim] = to_int64(w_big);
  const int64_t step = ((2 * static_cast<__int128_t>(wre)) % n + n) % n;
  const double ang = kTwoPi / static_cast<double>(n);

  SumAccumulator acc(opt.precision);
  for (int64_t y = 0; y < rows; ++y) {
    int64_t idx = static_cast<int64_t>(
        (((-2 * static_cast<__int128_t>(wim) * y) % n) + n) % n);
    Cplx w = std::polar(1.0, ang * static_cast<double>(idx));
    const Cplx rot = std::polar(1.0, ang * static_cast<double>(step));
    for (int64_t x = 0; x < row_len; ++x) {
      if (x != 0) {
        idx += step;
        if (idx >= n) idx -= n;
        if ((x & (kAnchor - 1)) == 0)
          w = std::polar(1.0, ang * static_cast<double>(idx));
        else
          w *= rot;
      }
      int e = detail::sym4_i64(x, y, g0re, g0im);
      if (e < 0) continue;
      if (order == 2) e = 2 * e;
      acc.add(unit_times(e, w), kPerTermErr);
    }
  }
  return acc.result();
}

uint64_t find_generator(uint64_t p) {
  auto fac = factor_u64(p - 1);
  for (uint64_t g = 2;; ++g) {
    bool ok = true;
    for (const auto& [q, e] : fac) {
      if (powmod_u64(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

}  // namespace

ComplexVal g4_direct(const GaussInt& nu, const GaussInt& c, const DirectOptions& opt) {
  return direct_sum(nu, c, 4, opt);
}

ComplexVal g2_direct(const GaussInt& nu, const GaussInt& c, const DirectOptions& opt) {
  return direct_sum(nu, c, 2, opt);
}

// ---------------------------------------------------------------------------
// O(p) prime evaluator
// ---------------------------------------------------------------------------

PrimeGaussSums prime_gauss_sums_fast(const GaussInt& pi, Precision precision) {
  if (!is_primary(pi) || !is_prime(pi) || pi.im == 0)
    throw std::invalid_argument("prime_gauss_sums_fast: need a primary degree-1 prime");
  Int norm_big = pi.norm();
  if (norm_big >= (Int(1) << 31))
    throw std::invalid_argument("prime_gauss_sums_fast: norm too large");
  const uint64_t p = static_cast<uint64_t>(norm_big);
  auto [a, b] = to_int64(pi);
  (void)b;

  // quartic character on (Z/p)* = Z[i]/(pi): one Euler criterion at a
  // generator, then the exponent is linear along the cyclic group
  const uint64_t gen = find_generator(p);
  GaussInt u = mod_pow(GaussInt(static_cast<long long>(gen)), Int((p - 1) / 4), pi);
  int k0 = -1;
  for (int k = 0; k < 4; ++k) {
    if (u == canonical_mod(unit_i_pow(k), pi)) {
      k0 = k;
      break;
    }
  }
  if (k0 < 0 || (k0 & 1) == 0)
    throw std::logic_error("prime_gauss_sums_fast: generator symbol not primitive");

  std::vector<uint8_t> expo(p);
  uint64_t t = 1;
  for (uint64_t j = 0; j + 1 < p; ++j) {
    expo[t] = static_cast<uint8_t>((k0 * j) & 3);
    t = mulmod_u64(t, gen, p);
  }

  // trace of the rational residue t at modulus pi = a+bi is 2at/p
  const int64_t n = static_cast<int64_t>(p);
  const int64_t step = (((2 * static_cast<__int128_t>(a)) % n) + n) % n;
  const double ang = kTwoPi / static_cast<double>(n);
  const Cplx rot = std::polar(1.0, ang * static_cast<double>(step));

  SumAccumulator acc[4] = {SumAccumulator(precision), SumAccumulator(precision),
                           SumAccumulator(precision), SumAccumulator(precision)};
  int64_t idx = 0;
  Cplx w{1.0, 0.0};
  for (uint64_t tt = 1; tt < p; ++tt) {
    idx += step;
    if (idx >= n) idx -= n;
    if (((tt - 1) & (kAnchor - 1)) == 0)
      w = std::polar(1.0, ang * static_cast<double>(idx));
    else
      w *= rot;
    acc[expo[tt]].add(w, kPerTermErr);
  }
  ComplexVal s0 = acc[0].result(), s1 = acc[1].result(), s2 = acc[2].result(),
             s3 = acc[3].result();
  PrimeGaussSums out;
  out.g4 = ComplexVal{s0.v + Cplx(0, 1) * s1.v - s2.v - Cplx(0, 1) * s3.v,
                      s0.err + s1.err + s2.err + s3.err};
  out.g2 = ComplexVal{s0.v - s1.v + s2.v - s3.v, s0.err + s1.err + s2.err + s3.err};
  return out;
}

ComplexVal g4_prime_fast(const GaussInt& pi, Precision precision) {
  return prime_gauss_sums_fast(pi, precision).g4;
}

GaussSumRecord make_prime_record(const GaussInt& pi, Precision precision) {
  if (!is_primary(pi) || !is_prime(pi))
    throw std::invalid_argument("make_prime_record: need a primary prime");
  GaussSumRecord rec;
  rec.pi = pi;
  rec.minus_one_symbol = quartic_symbol(GaussInt(-1, 0), pi);

  if (pi.im == 0) {
    // degree-2 (pi = -p): g2 = p and g4 = (-1)^((p+1)/4) p, i.e. -p when
    // p = 3 (mod 8). Verified against the definition sum below at small p.
    int64_t p = -static_cast<int64_t>(pi.re);
    double sign = (p % 8 == 3) ? -1.0 : 1.0;
    if (p <= 1500) {
      ComplexVal direct = g4_direct(GaussInt(1), pi, DirectOptions{int64_t(1) << 26, precision});
      if (std::abs(direct.v - Cplx(sign * static_cast<double>(p), 0.0)) >
          1e-9 * static_cast<double>(p))
        throw std::runtime_error("make_prime_record: degree-2 sign check failed at " + pi.str());
    }
    rec.g4_normalized = ComplexVal::exact({sign, 0.0});
    rec.checks = kCheckAll;
    return rec;
  }

  const double p = to_double(pi.norm());
  const double sqrtp = std::sqrt(p);
  ComplexVal g4 = prime_gauss_sums_fast(pi, precision).g4;

  // square law in this additive-character convention: g4(pi)^2 = -sqrt(p) pi
  // (no (-1/pi)_4 factor; fitted against the definition sum across all primes)
  Cplx sq = g4.v * g4.v;
  GaussInt pw = pi * pi * pi * pi.conj();
  Cplx fourth{to_double(pw.re), to_double(pw.im)};
  auto [pre, pim] = std::pair<double, double>{to_double(pi.re), to_double(pi.im)};
  Cplx square_ref = -sqrtp * Cplx(pre, pim);

  if (std::abs(sq * sq - fourth) <= 1e-6 * p * p) rec.checks |= kCheckFourthPower;
  if (std::abs(sq - square_ref) <= 1e-6 * p) rec.checks |= kCheckSquarePower;
  if (std::abs(std::abs(g4.v) - sqrtp) <= 1e-6 * sqrtp) rec.checks |= kCheckSqrtCancel;
  if (rec.checks != kCheckAll)
    throw std::runtime_error("make_prime_record: identity checks failed at pi=" + pi.str());

  rec.g4_normalized = ComplexVal{g4.v / sqrtp, g4.err / sqrtp};
  return rec;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

G4Evaluator::G4Evaluator(GaussSumCache* cache, Precision precision)
    : cache_(cache), precision_(precision) {}

GaussSumRecord G4Evaluator::prime_record(const GaussInt& pi) {
  std::pair<int64_t, int64_t> key = to_int64(pi);
  {
    std::shared_lock lk(memo_mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  if (cache_) {
    if (auto hit = cache_->get(pi)) {
      std::unique_lock lk(memo_mu_);
      memo_.emplace(key, *hit);
      return *hit;
    }
  }
  GaussSumRecord rec = make_prime_record(pi, precision_);
  if (cache_) cache_->put(rec);
  {
    std::unique_lock lk(memo_mu_);
    memo_.emplace(key, rec);
  }
  return rec;
}

ComplexVal G4Evaluator::g4_tilde_prime(const GaussInt& pi) {
  return prime_record(pi).g4_normalized;
}

namespace {

GaussInt gpow(const GaussInt& z, int k) {
  GaussInt acc(1);
  for (int j = 0; j < k; ++j) acc *= z;
  return acc;
}

}  // namespace

ComplexVal G4Evaluator::g4(const GaussInt& nu, const Factorization& cf) {
  if (cf.lambda_exp != 0)
    throw std::invalid_argument("g4: modulus must be odd");

  ComplexVal acc = ComplexVal::exact({1.0, 0.0});
  GaussInt partial(1);
  for (const auto& [pi, l] : cf.primes) {
    const Int np = pi.norm();
    int k;
    GaussInt r;
    if (nu.is_zero()) {
      k = l;  // behaves as ord >= l in every branch below
      r = GaussInt(1);
    } else {
      k = ord_at(nu, pi);
      r = nu;
      for (int j = 0; j < k; ++j) r = *div_exact(r, pi);
    }

    ComplexVal base;
    if (k >= l) {
      if (l % 4 == 0) {
        double phi = to_double(np - 1) * std::pow(to_double(np), l - 1);
        base = ComplexVal::exact({phi, 0.0});
      } else {
        return ComplexVal::exact({0.0, 0.0});
      }
    } else if (k == l - 1) {
      const double npd = to_double(np);
      const double nk = std::pow(npd, k);
      GaussSumRecord rec = prime_record(pi);
      const double sqrtn = std::sqrt(npd);
      ComplexVal g4pi = rec.g4_normalized * sqrtn;
      switch (k % 4) {
        case 0:
          base = g4pi * nk;
          break;
        case 1: {
          // quadratic sum at a prime: (-1/pi)_4 sqrt(N) (degree-2: = p)
          Cplx g2pi = pi.im == 0 ? Cplx(sqrtn, 0.0)
                                 : rec.minus_one_symbol.value() * sqrtn;
          base = ComplexVal{g2pi * nk, eps() * sqrtn * nk};
          break;
        }
        case 2:
          base = g4pi.conj() * rec.minus_one_symbol.value() * nk;
          break;
        default:
          base = ComplexVal::exact({-nk, 0.0});
          break;
      }
    } else {
      return ComplexVal::exact({0.0, 0.0});
    }

    // strip the coprime part of the shift: g4(r*nu', pi^l) = conj((r/pi^l)_4) g4(nu', pi^l)
    SymbolValue sr = quartic_symbol(r, pi).pow(l);
    base = base * sr.conj().value();

    if (!partial.is_one()) {
      GaussInt pil = gpow(pi, l);
      SymbolValue tw = quartic_symbol(partial, pil) * quartic_symbol(pil, partial);
      acc = acc * tw.value();
      acc = acc * base;
      partial *= pil;
    } else {
      acc = acc * base;
      partial = gpow(pi, l);
    }
  }

  if (cf.unit_exp != 0 && !partial.is_one()) {
    SymbolValue s = quartic_symbol(GaussInt(0, 1), partial).pow(cf.unit_exp);
    acc = acc * s.value();
  }
  return acc;
}

ComplexVal G4Evaluator::g4(const GaussInt& nu, const GaussInt& c) {
  return g4(nu, factor(c));
}

ComplexVal G4Evaluator::g4_tilde(const GaussInt& nu, const Factorization& cf) {
  double inv = 1.0;
  for (const auto& [pi, l] : cf.primes)
    inv *= std::pow(to_double(pi.norm()), -0.5 * l);
  return g4(nu, cf) * inv;
}

ComplexVal G4Evaluator::g4_tilde(const GaussInt& nu, const GaussInt& c) {
  Factorization cf = factor(c);
  return g4_tilde(nu, cf);
}

// ---------------------------------------------------------------------------
// Moment reduction
// ---------------------------------------------------------------------------

// Case reduction mod 4 of k, from the fourth-power law and the square law
// g4(pi)^2 = -sqrt(p) pi: with m = (k - (k mod 4))/4,
//   k = 0 (4): (conj pi/|pi|)^(-2m)
//   k = 1 (4): ... * g4~(pi)
//   k = 2 (4): ... * -(conj pi/|pi|)^(-1)
//   k = 3 (4): ... * -(conj pi/|pi|)^(-1) g4~(pi)
ComplexVal moment_reduce(const GaussInt& pi, long long k, const ComplexVal& g4_tilde) {
  if (k == 0) throw std::invalid_argument("moment_reduce: k must be nonzero");
  if (pi.im == 0)
    throw std::invalid_argument("moment_reduce: degree-2 prime (normalized sum is +-1)");
  const int r = static_cast<int>(((k % 4) + 4) % 4);
  const long long m = (k - r) / 4;
  Cplx gross = grossencharakter(pi, -2 * m);
  switch (r) {
    case 0:
      return ComplexVal{gross, eps()};
    case 1:
      return g4_tilde * gross;
    case 2: {
      Cplx f = -grossencharakter(pi, -1);
      return ComplexVal{f * gross, 4 * eps()};
    }
    default: {
      Cplx f = -grossencharakter(pi, -1);
      return g4_tilde * (f * gross);
    }
  }
}

}  // namespace qgs
