#include "qgs/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qgs {

std::vector<uint64_t> rational_primes_upto(uint64_t n) {
  std::vector<uint64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (composite[p]) continue;
    for (uint64_t q = p * p; q <= n; q += p) composite[q] = true;
  }
  for (uint64_t p = 2; p <= n; ++p)
    if (!composite[p]) primes.push_back(p);
  return primes;
}

std::vector<GaussInt> primary_primes_upto(int64_t x, std::optional<BetaClass> klass,
                                          const Exec& exec) {
  if (x < 2) throw std::invalid_argument("primary_primes_upto: x >= 2 required");
  std::vector<uint64_t> ps = rational_primes_upto(static_cast<uint64_t>(x));

  std::vector<std::vector<GaussInt>> shards;
  constexpr size_t kShard = 4096;
  size_t n_shards = (ps.size() + kShard - 1) / kShard;
  shards.resize(n_shards);
  parallel_blocks(n_shards, exec, [&](size_t s) {
    std::vector<GaussInt>& out = shards[s];
    for (size_t j = s * kShard; j < std::min(ps.size(), (s + 1) * kShard); ++j) {
      uint64_t p = ps[j];
      if (p == 2) continue;  // lambda is excluded
      if (p % 4 == 1) {
        GaussInt pi = split_prime(p);
        out.push_back(pi);
        out.push_back(primary_associate(pi.conj()).primary_part);
      } else if (static_cast<__int128_t>(p) * p <= x) {
        out.push_back(GaussInt(-static_cast<long long>(p), 0));
      }
    }
  });
  std::vector<GaussInt> all;
  for (auto& s : shards) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end(), norm_lex_less);
  if (klass) {
    std::erase_if(all, [&](const GaussInt& pi) { return beta_class(pi) != *klass; });
  }
  return all;
}

std::vector<GaussInt> primary_elements_upto(int64_t bound) {
  if (bound < 1) throw std::invalid_argument("primary_elements_upto: bound >= 1 required");
  std::vector<GaussInt> out;
  int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(bound))) + 2;
  for (int64_t a = -r; a <= r; ++a) {
    for (int64_t b = -r; b <= r; ++b) {
      if (a * a + b * b > bound || (a == 0 && b == 0)) continue;
      // primary test: (a-1+bi)/lambda^3 integral
      int64_t dr = a - 1, di = b;
      if (((dr + di) & 3) == 0 && ((di - dr) & 3) == 0) out.push_back(GaussInt(a, b));
    }
  }
  std::sort(out.begin(), out.end(), norm_lex_less);
  return out;
}

std::vector<LambdaSupportEntry> lambda_support_upto(int64_t x,
                                                    std::optional<BetaClass> klass,
                                                    const Exec& exec) {
  std::vector<LambdaSupportEntry> out;
  for (const GaussInt& pi : primary_primes_upto(x, std::nullopt, exec)) {
    double lg = std::log(to_double(pi.norm()));
    GaussInt c = pi;
    int k = 1;
    while (c.norm() <= x) {
      if (!klass || beta_class(c) == *klass) out.push_back({c, lg, k});
      c *= pi;
      ++k;
    }
  }
  std::sort(out.begin(), out.end(), [](const LambdaSupportEntry& a, const LambdaSupportEntry& b) {
    return norm_lex_less(a.c, b.c);
  });
  return out;
}

}  // namespace qgs
