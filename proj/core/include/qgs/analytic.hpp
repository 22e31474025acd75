#pragma once

// The experiment layer: smoothed prime sums H and level sums F, sharp-cutoff
// scans with X^(3/4) normalization, Weyl moments with two-route evaluation,
// the six Vaughan sums with their exact identity, the Type-II bilinear
// rewrites, and quadrature checks of the Type-I bounding inequalities.
//
// Every sum is reduced with the deterministic blocked pairwise scheme, so
// results are bit-identical across thread counts and re-sharding.

#include "qgs/gauss_sums.hpp"
#include "qgs/parallel.hpp"
#include "qgs/sieve.hpp"

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace qgs {

struct SmoothWeight {
  enum class Kind { BumpDefault, Sharp, Tabulated };
  Kind kind = Kind::BumpDefault;
  std::vector<double> samples;  // Tabulated: uniform samples on [1,2]

  // BumpDefault: exp(-1/(t-1) - 1/(2-t)) on (1,2), zero elsewhere.
  // Sharp: indicator of t <= 1 (used by the sharp-cutoff scans).
  double operator()(double t) const;
  double support_hi() const { return kind == Kind::Sharp ? 1.0 : 2.0; }

  static SmoothWeight bump() { return {Kind::BumpDefault, {}}; }
  static SmoothWeight sharp() { return {Kind::Sharp, {}}; }
  static SmoothWeight tabulated(std::vector<double> s) {
    return {Kind::Tabulated, std::move(s)};
  }
};

struct ExperimentRow {
  double x = 0;
  long long ell = 0;
  BetaClass beta = BetaClass::One;
  std::optional<int64_t> u;
  ComplexVal value;
  Cplx normalized{0.0, 0.0};  // value / x^(3/4) for scan rows
};

inline constexpr const char* kRowSchemaHeader = "# qgs-rows v1";
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> rows_from_csv(const std::string& text);
std::string rows_to_json(const std::vector<ExperimentRow>& rows);

// Shared evaluation context: the Gauss-sum evaluator plus memoized
// factorizations, Moebius/von Mangoldt values and normalized sums for
// composite arguments, and the execution policy.
class SumContext {
 public:
  SumContext(G4Evaluator& eval, Exec exec = Exec::serial());

  G4Evaluator& evaluator() { return eval_; }
  const Exec& exec() const { return exec_; }

  ComplexVal gtilde(const GaussInt& primary_c);  // normalized g4(1, c)
  const Factorization& factored(const GaussInt& c);
  int mu_of(const GaussInt& c);
  double lambda_of(const GaussInt& c);

 private:
  G4Evaluator& eval_;
  Exec exec_;
  std::shared_mutex mu_;
  std::map<std::pair<int64_t, int64_t>, Factorization> fact_;
  std::map<std::pair<int64_t, int64_t>, ComplexVal> gt_;
};

// smoothed von Mangoldt sum over the class beta
ComplexVal h_sum(double x, long long ell, BetaClass beta, const SmoothWeight& r,
                 SumContext& ctx);

// smoothed sum over multiples of alpha (alpha primary; terms vanish unless
// the full modulus is squarefree)
ComplexVal f_sum(double x, long long ell, BetaClass beta, const GaussInt& alpha,
                 const SmoothWeight& r, SumContext& ctx);

// sharp-cutoff scan rows S(X) and S(X)/X^(3/4) over a grid of cutoffs
std::vector<ExperimentRow> conjecture_scan(const std::vector<double>& x_grid,
                                           long long ell, BetaClass beta,
                                           SumContext& ctx);

struct WeylMoment {
  ComplexVal direct;   // k-th powers of the evaluated normalized sums
  ComplexVal reduced;  // k mod 4 case reduction
};
WeylMoment weyl_moment(double x, long long k, SumContext& ctx);

enum class VaughanJ { S0, S1, S2Prime, S2DoublePrime, S3, S4 };

struct SigmaResult {
  ComplexVal value;
  double abs_sum = 0.0;  // sum of |term|, the natural residual scale
};

SigmaResult vaughan_sigma(double x, long long ell, BetaClass beta, int64_t u,
                          VaughanJ j, const SmoothWeight& r, SumContext& ctx);

// all six pieces and the identity residual S0+S2'+S2''+S3-S1-S4
struct VaughanReport {
  SigmaResult sigma[6];
  ComplexVal residual;
  double scale = 0.0;
  bool u_in_range = true;  // u < sqrt(x), the regime with S4 = 0
};
VaughanReport vaughan_check(double x, long long ell, BetaClass beta, int64_t u,
                            const SmoothWeight& r, SumContext& ctx);

// bilinear rewrite of S2'' (which = S2DoublePrime) or S3
ComplexVal type2_bilinear(double x, long long ell, BetaClass beta, int64_t u,
                          VaughanJ which, const SmoothWeight& r, SumContext& ctx);

struct Lemma61Report {
  double lhs_sigma1 = 0, rhs_sigma1 = 0;
  double lhs_sigma2p = 0, rhs_sigma2p = 0;
  double quadrature_rel_tol = 0;
  bool sigma1_ok = false;
  bool sigma2p_ok = false;
};
Lemma61Report lemma61_bound_check(double x, long long ell, BetaClass beta,
                                  int64_t u, const SmoothWeight& r, SumContext& ctx);

// adaptive Simpson quadrature to a relative tolerance (used by the bound
// check; exposed for tests)
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol);

}  // namespace qgs
