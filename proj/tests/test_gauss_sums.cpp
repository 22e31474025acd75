#include <doctest.h>

#include "qgs/gauss_sums.hpp"
#include "qgs/sieve.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace qgs;

namespace {

bool close(Cplx a, Cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("direct sums: known values") {
  CHECK(g4_direct(GaussInt(1), GaussInt(1)).v == Cplx{1.0, 0.0});
  CHECK(g4_direct(GaussInt(1), GaussInt(0, 1)).v == Cplx{1.0, 0.0});

  // degree-2 prime: g4(-3) = -3 (p = 3 mod 8), g2(-3) = 3
  ComplexVal g4m3 = g4_direct(GaussInt(1), GaussInt(-3, 0));
  CHECK(close(g4m3.v, {-3.0, 0.0}, 1e-10));
  CHECK(close(g2_direct(GaussInt(1), GaussInt(-3, 0)).v, {3.0, 0.0}, 1e-10));
  // and g4(-7) = +7 (p = 7 mod 8)
  CHECK(close(g4_direct(GaussInt(1), GaussInt(-7, 0)).v, {7.0, 0.0}, 1e-9));

  // Gauss' evaluation at a degree-1 prime: g2 = (-1/pi)_4 sqrt(5) = -sqrt(5)
  ComplexVal g2pi = g2_direct(GaussInt(1), GaussInt(-1, 2));
  CHECK(close(g2pi.v, {-std::sqrt(5.0), 0.0}, 1e-12));

  CHECK_THROWS_AS(g4_direct(GaussInt(1), GaussInt(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(g4_direct(GaussInt(1), GaussInt(0)), std::invalid_argument);
  DirectOptions tiny;
  tiny.norm_cap = 10;
  CHECK_THROWS_AS(g4_direct(GaussInt(1), GaussInt(-5, 2), tiny), std::invalid_argument);
}

TEST_CASE("fast prime evaluator: known values at -1+2i") {
  GaussInt pi(-1, 2);
  ComplexVal fast = g4_prime_fast(pi);
  ComplexVal direct = g4_direct(GaussInt(1), pi);
  CHECK(std::abs(fast.v - direct.v) <= fast.err + direct.err);

  // square law in this convention: g4^2 = -sqrt(5) pi
  Cplx sq = fast.v * fast.v;
  CHECK(close(sq, Cplx(std::sqrt(5.0), -2.0 * std::sqrt(5.0)), 1e-10));
  // fourth power: pi^3 conj(pi) = -15 - 20i
  CHECK(close(sq * sq, {-15.0, -20.0}, 1e-9));
  // modulus sqrt(p)
  CHECK(std::abs(fast.v) == doctest::Approx(std::sqrt(5.0)));

  CHECK_THROWS_AS(g4_prime_fast(GaussInt(-3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(g4_prime_fast(GaussInt(2, 1)), std::invalid_argument);
}

TEST_CASE("fast equals naive over all degree-1 primes to norm 3000") {
  for (const GaussInt& pi : primary_primes_upto(3000)) {
    if (pi.im == 0) continue;
    PrimeGaussSums s = prime_gauss_sums_fast(pi);
    ComplexVal d4 = g4_direct(GaussInt(1), pi);
    ComplexVal d2 = g2_direct(GaussInt(1), pi);
    REQUIRE(std::abs(s.g4.v - d4.v) <= s.g4.err + d4.err + 1e-12);
    REQUIRE(std::abs(s.g2.v - d2.v) <= s.g2.err + d2.err + 1e-12);
  }
}

TEST_CASE("identity battery per record") {
  GaussSumRecord rec = make_prime_record(GaussInt(3, 2));
  CHECK(rec.checks == kCheckAll);
  CHECK(std::abs(rec.g4_normalized.abs() - 1.0) < 1e-12);
  CHECK(rec.minus_one_symbol == SymbolValue::i_pow(2));  // (13-1)/4 = 3 odd

  GaussSumRecord d2 = make_prime_record(GaussInt(-3, 0));
  CHECK(d2.g4_normalized.v == Cplx{-1.0, 0.0});
  GaussSumRecord d7 = make_prime_record(GaussInt(-7, 0));
  CHECK(d7.g4_normalized.v == Cplx{1.0, 0.0});
}

TEST_CASE("composition against direct sums") {
  GaussSumCache cache;
  G4Evaluator eval(&cache);

  // c = (-1+2i)(-3), norm 45, nu = 1 (twisted multiplicativity route)
  GaussInt c = GaussInt(-1, 2) * GaussInt(-3, 0);
  ComplexVal direct = g4_direct(GaussInt(1), c);
  ComplexVal composed = eval.g4(GaussInt(1), c);
  CHECK(std::abs(direct.v - composed.v) <= direct.err + composed.err + 1e-10);

  // zero branch: gcd(nu, c) != 1 with squarefree c beyond the table support
  ComplexVal z = eval.g4(GaussInt(-1, 2), c);
  ComplexVal zd = g4_direct(GaussInt(-1, 2), c);
  CHECK(z.v == Cplx{0.0, 0.0});
  CHECK(z.err == 0.0);
  CHECK(std::abs(zd.v) <= zd.err);

  // k = 0 branch of the prime-power table: g4(1, pi) = g4(pi)
  GaussInt pi(-1, 2);
  CHECK(std::abs(eval.g4(GaussInt(1), pi).v - g4_direct(GaussInt(1), pi).v) < 1e-10);

  // prime powers and shifted shifts, all against the definition sum
  std::mt19937_64 rng(211);
  auto elems = primary_elements_upto(40);
  for (int t = 0; t < 60; ++t) {
    const GaussInt& a = elems[rng() % elems.size()];
    const GaussInt& b = elems[rng() % elems.size()];
    GaussInt mod = a * b;
    if (mod.norm() > 2000 || mod.is_unit()) continue;
    GaussInt nu(static_cast<long long>(rng() % 13) - 6, static_cast<long long>(rng() % 13) - 6);
    if (nu.is_zero()) nu = GaussInt(1);
    ComplexVal lhs = g4_direct(nu, mod);
    ComplexVal rhs = eval.g4(nu, mod);
    REQUIRE(std::abs(lhs.v - rhs.v) <= lhs.err + rhs.err + 1e-9 * std::sqrt(to_double(mod.norm())));
  }

  // nu = 0: character sum, phi(pi^l) when l = 0 mod 4 else 0
  GaussInt p2 = pi * pi;
  CHECK(eval.g4(GaussInt(0), p2).v == Cplx{0.0, 0.0});
  GaussInt p4 = p2 * p2;
  ComplexVal phi = eval.g4(GaussInt(0), p4);
  CHECK(phi.v == Cplx{500.0, 0.0});  // 5^3 * 4

  CHECK_THROWS_AS(eval.g4(GaussInt(1), GaussInt(2, 0)), std::invalid_argument);
}

TEST_CASE("sqrootcancel: |g4(c)| = mu^2(c) sqrt(N) for primary c to norm 1e4") {
  GaussSumCache cache;
  G4Evaluator eval(&cache);
  for (const GaussInt& c : primary_elements_upto(10000)) {
    Factorization f = factor(c);
    ComplexVal g = eval.g4(GaussInt(1), f);
    double n = to_double(c.norm());
    if (f.squarefree_odd()) {
      REQUIRE(std::abs(std::abs(g.v) - std::sqrt(n)) <= 1e-9 * std::sqrt(n) + g.err);
    } else {
      REQUIRE(std::abs(g.v) <= g.err);
    }
  }
}

TEST_CASE("moment reduction equals direct powers") {
  GaussSumCache cache;
  G4Evaluator eval(&cache);
  for (const GaussInt& pi : primary_primes_upto(500)) {
    if (pi.im == 0) continue;
    ComplexVal gt = eval.g4_tilde_prime(pi);
    Cplx direct = gt.v;
    for (int k = 1; k <= 8; ++k) {
      ComplexVal red = moment_reduce(pi, k, gt);
      REQUIRE(std::abs(red.v - direct) < 1e-10);
      direct *= gt.v;
    }
    Cplx inv = std::conj(gt.v) / std::norm(gt.v);
    Cplx directn = inv;
    for (int k = -1; k >= -8; --k) {
      ComplexVal red = moment_reduce(pi, k, gt);
      REQUIRE(std::abs(red.v - directn) < 1e-10);
      directn *= inv;
    }
  }
  CHECK_THROWS_AS(moment_reduce(GaussInt(-3, 0), 2, ComplexVal::exact({1, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(moment_reduce(GaussInt(-1, 2), 0, ComplexVal::exact({1, 0})),
                  std::invalid_argument);
}

TEST_CASE("cache round trip, corruption, and miss") {
  std::string dir = (std::filesystem::temp_directory_path() / "qgs_cache_test").string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::string file = dir + "/g4.qgc";

  GaussSumRecord rec = make_prime_record(GaussInt(3, 2));
  {
    GaussSumCache cache(file);
    CHECK(!cache.get(GaussInt(3, 2)).has_value());  // cold miss
    CHECK(cache.put(rec));
    CHECK(cache.put(rec));  // idempotent
    GaussSumRecord bad = rec;
    bad.checks = 0;
    CHECK(!cache.put(bad));  // flags must be complete
    CHECK(cache.size() == 1);
  }
  {
    GaussSumCache cache(file);
    auto hit = cache.get(GaussInt(3, 2));
    REQUIRE(hit.has_value());
    // bit-exact round trip through the hex encoding
    CHECK(hit->g4_normalized.v == rec.g4_normalized.v);
    CHECK(hit->g4_normalized.err == rec.g4_normalized.err);
    CHECK(hit->checks == kCheckAll);
  }
  // corrupt one line: flips a hex digit inside the payload
  {
    std::ifstream in(file);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    in.close();
    line[10] = line[10] == '0' ? '1' : '0';
    std::ofstream out(file, std::ios::trunc);
    out << header << "\n" << line << "\n";
  }
  {
    GaussSumCache cache(file);
    CHECK(cache.stats().corrupt == 1);
    CHECK(!cache.get(GaussInt(3, 2)).has_value());  // miss, will recompute
    CHECK(cache.verify_file() == 1);
    CHECK(cache.put(rec));
    cache.compact();
    CHECK(cache.verify_file() == 0);
  }
  // encode/decode property: a few records round trip bit-exactly
  for (uint64_t p : {13ull, 17ull, 29ull}) {
    GaussSumRecord r = make_prime_record(split_prime(p));
    auto back = GaussSumCache::decode_line(GaussSumCache::encode_line(r));
    REQUIRE(back.has_value());
    CHECK(back->pi == r.pi);
    CHECK(back->g4_normalized.v == r.g4_normalized.v);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("evaluator uses the cache") {
  std::string dir = (std::filesystem::temp_directory_path() / "qgs_cache_test2").string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    GaussSumCache cache(dir + "/g4.qgc");
    G4Evaluator eval(&cache);
    eval.prime_record(GaussInt(-1, 2));
    CHECK(cache.size() == 1);
  }
  {
    GaussSumCache cache(dir + "/g4.qgc");
    CHECK(cache.stats().loaded == 1);
    G4Evaluator eval(&cache);
    ComplexVal v = eval.g4_tilde_prime(GaussInt(-1, 2));
    CHECK(std::abs(v.v - Cplx(1.9021130325903071, -1.1755705045849463) / std::sqrt(5.0)) < 1e-12);
  }
  std::filesystem::remove_all(dir);
}
