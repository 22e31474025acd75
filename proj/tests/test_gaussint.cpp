#include <doctest.h>

#include "qgs/gaussint.hpp"

#include <random>
#include <set>

using namespace qgs;

namespace {

// brute-force oracle: scan the four unit multiples of z, testing divisibility
// of w-1 by lambda^3 directly
std::pair<int, GaussInt> primary_by_brute_force(const GaussInt& z) {
  for (int k = 0; k < 4; ++k) {
    GaussInt w = z.times_i(k);
    GaussInt d = w - GaussInt(1);
    GaussInt l3(-2, 2);
    GaussInt t = d * l3.conj();
    if (t.re % 8 == 0 && t.im % 8 == 0) return {k, w};
  }
  FAIL("no primary associate");
  return {};
}

GaussInt rnd_nonzero(std::mt19937_64& rng, int64_t half_range) {
  while (true) {
    int64_t a = static_cast<int64_t>(rng() % (2 * half_range + 1)) - half_range;
    int64_t b = static_cast<int64_t>(rng() % (2 * half_range + 1)) - half_range;
    if (a || b) return GaussInt(a, b);
  }
}

}  // namespace

TEST_CASE("gauss int basics and parsing") {
  GaussInt z(3, -4);
  CHECK(z.norm() == 25);
  CHECK(z.conj() == GaussInt(3, 4));
  CHECK((z * z.conj()).re == 25);
  CHECK(parse_gauss_int("-1+2i") == GaussInt(-1, 2));
  CHECK(parse_gauss_int("1+1i") == GaussInt(1, 1));
  CHECK(parse_gauss_int("i") == GaussInt(0, 1));
  CHECK(parse_gauss_int("-i") == GaussInt(0, -1));
  CHECK(parse_gauss_int("7") == GaussInt(7, 0));
  CHECK(parse_gauss_int("3-2i") == GaussInt(3, -2));
  CHECK_THROWS_AS(parse_gauss_int("2+"), std::invalid_argument);
  CHECK(GaussInt(-1, 2).str() == "-1+2i");
  CHECK(GaussInt(0, -1).str() == "-i");
  CHECK(parse_gauss_int(GaussInt(-17, 42).str()) == GaussInt(-17, 42));
}

TEST_CASE("norm multiplicativity on random pairs") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10000; ++t) {
    GaussInt a = rnd_nonzero(rng, 1000), b = rnd_nonzero(rng, 1000);
    CHECK((a * b).norm() == a.norm() * b.norm());
  }
}

TEST_CASE("primary_associate matches the brute-force oracle") {
  // known small values
  auto p1 = primary_associate(GaussInt(1));
  CHECK(p1.unit_exp == 0);
  CHECK(p1.lambda_exp == 0);
  CHECK(p1.primary_part == GaussInt(1));

  auto p2 = primary_associate(GaussInt(2, 1));
  CHECK(p2.unit_exp == 1);
  CHECK(p2.lambda_exp == 0);
  CHECK(p2.primary_part == GaussInt(-1, 2));

  auto p3 = primary_associate(GaussInt(3));
  CHECK(p3.unit_exp == 2);
  CHECK(p3.primary_part == GaussInt(-3, 0));

  CHECK_THROWS_AS(primary_associate(GaussInt(0)), std::invalid_argument);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    GaussInt z = rnd_nonzero(rng, 500);
    auto pd = primary_associate(z);
    GaussInt odd = z;
    for (int j = 0; j < pd.lambda_exp; ++j) odd = *div_exact(odd, lambda());
    auto [k, w] = primary_by_brute_force(odd);
    CHECK(pd.unit_exp == k);
    CHECK(pd.primary_part == w);
    CHECK(is_primary(pd.primary_part));
    // reconstruction with the inverse rotation
    GaussInt back = pd.primary_part.times_i((4 - pd.unit_exp) % 4);
    for (int j = 0; j < pd.lambda_exp; ++j) back *= lambda();
    CHECK(back == z);
    // idempotence on primary input
    CHECK(primary_associate(pd.primary_part).unit_exp == 0);
  }
}

TEST_CASE("lambda_digits known values and reconstruction") {
  auto d1 = lambda_digits(GaussInt(1), 6);
  CHECK(d1 == std::vector<int>{0, 0, 0, 0});

  auto d2 = lambda_digits(GaussInt(-1, 2), 6);  // 1 + lambda^3
  CHECK(d2 == std::vector<int>{1, 0, 0, 0});

  // gamma = 5: a3 = 0, then digits of (5-1)/lambda^3 = -1-i
  auto d3 = lambda_digits(GaussInt(5), 6);
  CHECK(d3[0] == 0);
  CHECK(*div_exact(GaussInt(4), GaussInt(-2, 2)) == GaussInt(-1, -1));

  CHECK_THROWS_AS(lambda_digits(GaussInt(2, 1), 6), std::invalid_argument);

  // reconstruction: gamma = 1 + sum a_j lambda^j (mod lambda^(count+1))
  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    GaussInt z = primary_associate(rnd_nonzero(rng, 300)).primary_part;
    auto d = lambda_digits(z, 8);
    GaussInt acc(1);
    GaussInt lp = lambda() * lambda() * lambda();
    for (size_t j = 0; j < d.size(); ++j) {
      if (d[j]) acc += lp;
      lp *= lambda();
    }
    GaussInt diff = z - acc;
    if (!diff.is_zero()) CHECK(ord_lambda(diff) >= 9);
  }
}

TEST_CASE("beta classes form the group of order two") {
  CHECK(beta_class(GaussInt(1)) == BetaClass::One);
  CHECK(beta_class(GaussInt(-1, 2)) == BetaClass::OnePlusLambda3);
  CHECK(beta_class(GaussInt(-1, -2)) == BetaClass::OnePlusLambda3);
  CHECK(beta_mul(BetaClass::OnePlusLambda3, BetaClass::OnePlusLambda3) == BetaClass::One);
  CHECK(beta_rep(BetaClass::OnePlusLambda3) == GaussInt(-1, 2));
  CHECK(parse_beta("1+l3") == BetaClass::OnePlusLambda3);
  CHECK_THROWS_AS(parse_beta("2"), std::invalid_argument);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 2000; ++t) {
    GaussInt x = primary_associate(rnd_nonzero(rng, 200)).primary_part;
    GaussInt y = primary_associate(rnd_nonzero(rng, 200)).primary_part;
    CHECK(beta_class(x * y) == beta_mul(beta_class(x), beta_class(y)));
    // the class tag is the residue mod 4
    GaussInt r = x - beta_rep(beta_class(x));
    CHECK(divides(GaussInt(4, 0), r));
  }
}

TEST_CASE("canonical residues minimize norm deterministically") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 2000; ++t) {
    GaussInt z = rnd_nonzero(rng, 400);
    GaussInt m = rnd_nonzero(rng, 40);
    GaussInt r = canonical_mod(z, m);
    CHECK(divides(m, z - r));
    Int best = r.norm();
    for (int u = -3; u <= 3; ++u)
      for (int v = -3; v <= 3; ++v) {
        if (!u && !v) continue;
        GaussInt cand = r - GaussInt(u, v) * m;
        Int n = cand.norm();
        CHECK(n >= best);
        if (n == best) CHECK(!lex_less(cand, r));  // lex tie-break
      }
  }
}

TEST_CASE("mod_pow and gcd") {
  GaussInt pi(-1, 2);
  CHECK(mod_pow(GaussInt(7, 3), Int(0), pi) == canonical_mod(GaussInt(1), pi));
  CHECK(mod_pow(GaussInt(0, 1), Int(1), pi) == canonical_mod(GaussInt(0, 1), pi));
  // (1+i)^1 = -1 (mod -1+2i) since 2+i = -i(-1+2i)
  CHECK(mod_pow(lambda(), Int(1), pi) == canonical_mod(GaussInt(-1, 0), pi));
  CHECK(div_exact(GaussInt(3, 1), pi).has_value() == false);
  CHECK(*div_exact(GaussInt(2, 1), pi) == GaussInt(0, -1));  // associate
  CHECK(*div_exact(GaussInt(2, 1), GaussInt(0, -1)) == GaussInt(-1, 2));
  CHECK_THROWS_AS(mod_pow(GaussInt(1), Int(2), GaussInt(0)), std::invalid_argument);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    GaussInt a = rnd_nonzero(rng, 100), b = rnd_nonzero(rng, 100);
    GaussInt g = gcd(a, b);
    CHECK(divides(g, a));
    CHECK(divides(g, b));
    CHECK(g.re > 0);
    CHECK(g.im >= 0);
    GaussInt m = rnd_nonzero(rng, 5);
    CHECK(gcd(a * m, b * m).norm() == (g * m).norm());
  }
}

TEST_CASE("factor: known factorizations") {
  Factorization f5 = factor(GaussInt(5));
  CHECK(f5.unit_exp == 0);
  CHECK(f5.lambda_exp == 0);
  REQUIRE(f5.primes.size() == 2);
  CHECK(f5.primes[0].first == GaussInt(-1, -2));
  CHECK(f5.primes[1].first == GaussInt(-1, 2));
  CHECK(f5.primes[0].second == 1);

  Factorization f3 = factor(GaussInt(-3, 0));
  REQUIRE(f3.primes.size() == 1);
  CHECK(f3.primes[0] == std::pair<GaussInt, int>(GaussInt(-3, 0), 1));
  CHECK(f3.unit_exp == 0);

  // 2 = i^3 * lambda^2
  Factorization f2 = factor(GaussInt(2));
  CHECK(f2.unit_exp == 3);
  CHECK(f2.lambda_exp == 2);
  CHECK(f2.primes.empty());

  CHECK_THROWS_AS(factor(GaussInt(0)), std::invalid_argument);
}

TEST_CASE("factor round trip on random elements up to norm 1e6") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 1500; ++t) {
    GaussInt z = rnd_nonzero(rng, 1000);
    Factorization f = factor(z);
    CHECK(f.reconstruct() == z);
    for (const auto& [pi, e] : f.primes) {
      CHECK(is_prime(pi));
      CHECK(is_primary(pi));
      CHECK(e >= 1);
    }
    std::set<std::pair<int64_t, int64_t>> seen;
    for (const auto& [pi, e] : f.primes) CHECK(seen.insert(to_int64(pi)).second);
  }
}

TEST_CASE("is_prime agrees with norm-based classification") {
  CHECK(is_prime(GaussInt(-1, 2)));
  CHECK(is_prime(GaussInt(1, 1)));  // lambda
  CHECK(is_prime(GaussInt(-3, 0)));
  CHECK(is_prime(GaussInt(0, 3)));  // associate of inert 3
  CHECK(!is_prime(GaussInt(5, 0)));
  CHECK(!is_prime(GaussInt(1, 0)));
  CHECK(!is_prime(GaussInt(0, 0)));
  CHECK(!is_prime(GaussInt(-9, 0)));
  CHECK(is_prime_u64(999999937ull));
  CHECK(!is_prime_u64(999999937ull * 3));
}

TEST_CASE("moebius and von mangoldt") {
  CHECK(moebius(GaussInt(-1, 2)) == -1);
  CHECK(von_mangoldt(GaussInt(-1, 2)) == doctest::Approx(std::log(5.0)));
  CHECK(moebius(GaussInt(5)) == 1);  // two distinct primes
  CHECK(von_mangoldt(GaussInt(-3, 0)) == doctest::Approx(std::log(9.0)));
  CHECK(von_mangoldt(GaussInt(5)) == 0.0);
  CHECK(moebius(GaussInt(1)) == 1);
  CHECK(von_mangoldt(GaussInt(1)) == 0.0);
  CHECK_THROWS_AS(moebius(GaussInt(2, 1)), std::invalid_argument);

  // mu^2(c) = 1 iff all exponents are 1 and lambda_exp = 0
  std::mt19937_64 rng(31);
  for (int t = 0; t < 400; ++t) {
    GaussInt z = primary_associate(rnd_nonzero(rng, 120)).primary_part;
    Factorization f = factor(z);
    int mu = moebius(z);
    CHECK((mu != 0) == f.squarefree_odd());
    if (mu != 0) CHECK(mu == (f.primes.size() % 2 == 0 ? 1 : -1));
  }
}

TEST_CASE("split primes and 64-bit factorization") {
  CHECK(split_prime(5).norm() == 5);
  CHECK(is_primary(split_prime(13)));
  CHECK_THROWS_AS(split_prime(7), std::invalid_argument);
  uint64_t x = sqrt_minus_one_mod(1000249);  // prime, 1 mod 4
  CHECK(mulmod_u64(x, x, 1000249) == 1000248);

  auto f = factor_u64(2ull * 2 * 3 * 3 * 3 * 1000003);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<uint64_t, int>(2, 2));
  CHECK(f[1] == std::pair<uint64_t, int>(3, 3));
  CHECK(f[2] == std::pair<uint64_t, int>(1000003, 1));
}
