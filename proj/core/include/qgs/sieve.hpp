#pragma once

// Enumeration of primary elements, primary primes, and the support of the
// von Mangoldt function in Z[i], ordered by norm with (re, im) tie-break.
//
// Split primes come from a rational sieve plus root-of-minus-one splitting;
// production can be sharded by rational prime range and merged
// deterministically.

#include "qgs/gaussint.hpp"
#include "qgs/parallel.hpp"

#include <optional>
#include <vector>

namespace qgs {

// all primary primes with N(pi) <= x: both conjugate primaries above split
// rational p = 1 (mod 4), and -p for inert p = 3 (mod 4) with p^2 <= x
std::vector<GaussInt> primary_primes_upto(int64_t x,
                                          std::optional<BetaClass> klass = std::nullopt,
                                          const Exec& exec = Exec::serial());

// all primary c with N(c) <= bound
std::vector<GaussInt> primary_elements_upto(int64_t bound);

struct LambdaSupportEntry {
  GaussInt c;        // primary prime power pi^k
  double lambda;     // log N(pi)
  int power;         // k
};

// support of Lambda up to norm x (the normalized quartic Gauss sum vanishes
// for k >= 2, so sums weighted by it only see the k = 1 entries)
std::vector<LambdaSupportEntry> lambda_support_upto(
    int64_t x, std::optional<BetaClass> klass = std::nullopt,
    const Exec& exec = Exec::serial());

// rational primes <= n in increasing order
std::vector<uint64_t> rational_primes_upto(uint64_t n);

}  // namespace qgs
