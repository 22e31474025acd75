#pragma once

// Truncated formal Dirichlet series over Z[i] built from Gauss-sum
// coefficients grouped by norm, the finite Euler-type correction polynomial,
// coefficientwise verification of the three level identities, symbolic
// residue combinations with opaque residue labels, ramified Gauss sums over
// lambda-power moduli, Hecke zeta partial sums, and the empirical quadratic
// large-sieve ratio.

#include "qgs/analytic.hpp"
#include "qgs/gauss_sums.hpp"

#include <map>
#include <string>
#include <vector>

namespace qgs {

struct DirichletSeriesTrunc {
  int64_t n_max = 0;
  std::vector<ComplexVal> coeff;  // indexed by norm, 0..n_max (index 0 unused)

  DirichletSeriesTrunc() = default;
  explicit DirichletSeriesTrunc(int64_t n) : n_max(n), coeff(static_cast<size_t>(n) + 1) {}

  void add(int64_t n, const ComplexVal& v) {
    coeff[static_cast<size_t>(n)] = coeff[static_cast<size_t>(n)] + v;
  }
  // this += scalar * other dilated by d (index n picks up other[n/d] when d | n)
  void add_dilated(const DirichletSeriesTrunc& other, int64_t d, const ComplexVal& scalar);
};

enum class LevelFilter { None, Divisible, Coprime };

// coefficient stream of the level series: coeff[n] = sum over primary c with
// N(c) = n, c in class beta, passing the alpha filter, of g4(nu,c)(conj c/|c|)^ell
DirichletSeriesTrunc psi_series(BetaClass beta, const GaussInt& nu, long long ell,
                                const GaussInt& alpha, LevelFilter filter,
                                int64_t n_max, SumContext& ctx);

// One term of the correction polynomial: the coefficient at the N(m)^(-4s)
// dilation is q(m,ell) * N(m)^3 with
//   q(m,ell) = mu(m) (-1)^{sum_{pi|m} C(pi,beta)+C(pi,pi beta)} (-1/m)_4 (conj m/|m|)^{4 ell}.
// sign and sym are exact; the angular factor is evaluated on demand.
struct DeltaTerm {
  GaussInt m;
  int sign = 1;
  SymbolValue sym = SymbolValue::one();

  Cplx q_value(long long ell) const {
    return static_cast<double>(sign) * sym.value() * grossencharakter(m, 4 * ell);
  }
  bool operator==(const DeltaTerm& o) const {
    return m == o.m && sign == o.sign && sym == o.sym;
  }
};

// sum form (one term per divisor m | alpha), sorted by (norm, re, im) of m
std::vector<DeltaTerm> delta_poly(BetaClass beta, const GaussInt& alpha, SumContext& ctx);
// the same polynomial by expanding the product over primes dividing alpha
std::vector<DeltaTerm> delta_poly_expanded(BetaClass beta, const GaussInt& alpha,
                                           SumContext& ctx);
// numeric value of the polynomial at real s
Cplx delta_value(const std::vector<DeltaTerm>& terms, double s, long long ell);

enum class LevelIdentity { Id1, Id2, Id3 };

struct IdentityReport {
  LevelIdentity identity = LevelIdentity::Id1;
  GaussInt alpha;
  GaussInt nu;
  long long ell = 0;
  BetaClass beta = BetaClass::One;
  int64_t n_max = 0;
  double max_discrepancy = 0.0;
  double err_budget = 0.0;
  double coeff_scale = 0.0;
  bool pass = false;

  std::string to_json() const;
};

// build both sides of the chosen identity as truncated series and compare
// coefficientwise; requires alpha primary squarefree, (alpha, nu) = 1
IdentityReport check_identity(LevelIdentity which, BetaClass beta, const GaussInt& nu,
                              long long ell, const GaussInt& alpha, int64_t n_max,
                              SumContext& ctx);

// linear combination of the two opaque residue symbols; labels are classes
struct ResidueCombo {
  std::map<BetaClass, ComplexVal> coeff;
  double l1() const {
    double s = 0;
    for (const auto& [k, v] : coeff) s += v.abs();
    return s;
  }
};
ResidueCombo residue_combo(BetaClass beta, const GaussInt& alpha, SumContext& ctx);

// ramified Gauss sum over residues mod lambda^(b+4) in class beta, with
// numerator i^a lambda^b and shift nu
ComplexVal gamma_ramified(BetaClass beta, const GaussInt& nu, int a, int b,
                          Precision precision = Precision::Double);

// partial sum of the Hecke zeta with the lambda factor removed:
// sum over primary m, N(m) <= n_max, of (conj m/|m|)^{4 ell} N(m)^(-s)
ComplexVal hecke_zeta_partial(Cplx s, long long ell, int64_t n_max,
                              const Exec& exec = Exec::serial());

// empirical quadratic large-sieve ratio over squarefree primary moduli
struct LargeSieveReport {
  struct Row {
    int64_t m_bound = 0;
    int64_t n_bound = 0;
    std::string family;
    int trial = 0;
    double ratio = 0.0;
  };
  std::vector<Row> rows;
  double max_ratio = 0.0;
  // max over families of log2(ratio(2M)/ratio(M)) along the M doublings
  double max_slope_per_doubling = 0.0;
};
LargeSieveReport large_sieve_ratio(int64_t m_max, int64_t n_bound, int trials,
                                   uint64_t seed);

}  // namespace qgs
