#include "qgs/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace qgs {

namespace {

constexpr size_t kSumBlock = 2048;

// deterministic blocked pairwise map-reduce over [0, n)
template <typename TermFn>
ComplexVal blocked_sum(size_t n, const Exec& exec, Precision prec, TermFn&& fn,
                       double* abs_sum_out = nullptr) {
  size_t nb = (n + kSumBlock - 1) / kSumBlock;
  std::vector<ComplexVal> partial(nb);
  std::vector<double> abs_part(nb, 0.0);
  parallel_blocks(nb, exec, [&](size_t bidx) {
    SumAccumulator acc(prec);
    size_t lo = bidx * kSumBlock, hi = std::min(n, lo + kSumBlock);
    for (size_t i = lo; i < hi; ++i) fn(i, acc);
    partial[bidx] = acc.result();
    abs_part[bidx] = acc.abs_sum();
  });
  if (abs_sum_out) {
    double s = 0;
    for (double v : abs_part) s += v;
    *abs_sum_out = s;
  }
  return combine_blocks(partial);
}

ComplexVal cpow_int(ComplexVal base, long long k) {
  if (k == 0) return ComplexVal::exact({1.0, 0.0});
  if (k < 0) {
    double n2 = std::norm(base.v);
    base = ComplexVal{std::conj(base.v) / n2, base.err / n2};
    k = -k;
  }
  ComplexVal acc = ComplexVal::exact({1.0, 0.0});
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

std::string fmt_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Smooth weights
// ---------------------------------------------------------------------------

double SmoothWeight::operator()(double t) const {
  switch (kind) {
    case Kind::Sharp:
      return t <= 1.0 ? 1.0 : 0.0;
    case Kind::BumpDefault:
      if (t <= 1.0 || t >= 2.0) return 0.0;
      return std::exp(-1.0 / (t - 1.0) - 1.0 / (2.0 - t));
    case Kind::Tabulated: {
      if (samples.size() < 2 || t < 1.0 || t > 2.0) return 0.0;
      double pos = (t - 1.0) * static_cast<double>(samples.size() - 1);
      size_t j = std::min(static_cast<size_t>(pos), samples.size() - 2);
      double frac = pos - static_cast<double>(j);
      return samples[j] * (1.0 - frac) + samples[j + 1] * frac;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Row schema
// ---------------------------------------------------------------------------

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << kRowSchemaHeader << "\n";
  os << "X,ell,beta,u,re,im,err,normalized_re,normalized_im\n";
  for (const auto& r : rows) {
    os << fmt_double(r.x) << "," << r.ell << "," << beta_str(r.beta) << ",";
    if (r.u) os << *r.u;
    os << "," << fmt_double(r.value.re()) << "," << fmt_double(r.value.im()) << ","
       << fmt_double(r.value.err) << "," << fmt_double(r.normalized.real()) << ","
       << fmt_double(r.normalized.imag()) << "\n";
  }
  return os.str();
}

std::vector<ExperimentRow> rows_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kRowSchemaHeader)
    throw std::invalid_argument("rows_from_csv: missing schema header");
  if (!std::getline(is, line) || line != "X,ell,beta,u,re,im,err,normalized_re,normalized_im")
    throw std::invalid_argument("rows_from_csv: bad column header");
  std::vector<ExperimentRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    size_t pos = 0;
    while (true) {
      size_t c = line.find(',', pos);
      if (c == std::string::npos) {
        f.push_back(line.substr(pos));
        break;
      }
      f.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    if (f.size() != 9) throw std::invalid_argument("rows_from_csv: bad row");
    ExperimentRow r;
    r.x = std::strtod(f[0].c_str(), nullptr);
    r.ell = std::stoll(f[1]);
    r.beta = parse_beta(f[2]);
    if (!f[3].empty()) r.u = std::stoll(f[3]);
    r.value = ComplexVal{{std::strtod(f[4].c_str(), nullptr), std::strtod(f[5].c_str(), nullptr)},
                         std::strtod(f[6].c_str(), nullptr)};
    r.normalized = Cplx{std::strtod(f[7].c_str(), nullptr), std::strtod(f[8].c_str(), nullptr)};
    rows.push_back(r);
  }
  return rows;
}

std::string rows_to_json(const std::vector<ExperimentRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o{{"X", r.x},
                     {"ell", r.ell},
                     {"beta", beta_str(r.beta)},
                     {"re", r.value.re()},
                     {"im", r.value.im()},
                     {"err", r.value.err},
                     {"normalized_re", r.normalized.real()},
                     {"normalized_im", r.normalized.imag()}};
    if (r.u) o["u"] = *r.u;
    else o["u"] = nullptr;
    arr.push_back(o);
  }
  nlohmann::json doc{{"schema", "qgs-rows v1"}, {"rows", arr}};
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// SumContext
// ---------------------------------------------------------------------------

SumContext::SumContext(G4Evaluator& eval, Exec exec) : eval_(eval), exec_(exec) {}

ComplexVal SumContext::gtilde(const GaussInt& c) {
  auto key = to_int64(c);
  {
    std::shared_lock lk(mu_);
    auto it = gt_.find(key);
    if (it != gt_.end()) return it->second;
  }
  ComplexVal v = eval_.g4_tilde(GaussInt(1), factored(c));
  std::unique_lock lk(mu_);
  return gt_.emplace(key, v).first->second;
}

const Factorization& SumContext::factored(const GaussInt& c) {
  auto key = to_int64(c);
  {
    std::shared_lock lk(mu_);
    auto it = fact_.find(key);
    if (it != fact_.end()) return it->second;
  }
  Factorization f = factor(c);
  std::unique_lock lk(mu_);
  return fact_.emplace(key, std::move(f)).first->second;
}

int SumContext::mu_of(const GaussInt& c) {
  const Factorization& f = factored(c);
  if (f.lambda_exp != 0) return 0;
  for (const auto& [pi, e] : f.primes)
    if (e > 1) return 0;
  return f.primes.size() % 2 == 0 ? 1 : -1;
}

double SumContext::lambda_of(const GaussInt& c) {
  const Factorization& f = factored(c);
  if (f.primes.size() != 1 || f.lambda_exp != 0) return 0.0;
  return std::log(to_double(f.primes[0].first.norm()));
}

// ---------------------------------------------------------------------------
// H and F sums
// ---------------------------------------------------------------------------

ComplexVal h_sum(double x, long long ell, BetaClass beta, const SmoothWeight& r,
                 SumContext& ctx) {
  int64_t bound = static_cast<int64_t>(std::floor(r.support_hi() * x));
  if (bound < 2) return ComplexVal::zero();
  auto support = lambda_support_upto(bound, beta, ctx.exec());
  return blocked_sum(support.size(), ctx.exec(), ctx.evaluator().precision(),
                     [&](size_t i, SumAccumulator& acc) {
                       const auto& e = support[i];
                       double w = r(to_double(e.c.norm()) / x);
                       if (w == 0.0) return;
                       // higher prime powers contribute exact zeros
                       ComplexVal gt = e.power == 1
                                           ? ctx.evaluator().g4_tilde_prime(e.c)
                                           : ctx.gtilde(e.c);
                       if (gt.v == Cplx{0.0, 0.0} && gt.err == 0.0) return;
                       Cplx gr = grossencharakter(e.c, ell);
                       double scale = e.lambda * w;
                       acc.add(gt.v * gr * scale, gt.err * scale + eps());
                     });
}

ComplexVal f_sum(double x, long long ell, BetaClass beta, const GaussInt& alpha,
                 const SmoothWeight& r, SumContext& ctx) {
  if (!is_primary(alpha)) throw std::invalid_argument("f_sum: alpha must be primary");
  int64_t bound = static_cast<int64_t>(std::floor(r.support_hi() * x));
  Int na = alpha.norm();
  if (na > bound) return ComplexVal::zero();
  int64_t inner = bound / static_cast<int64_t>(na);
  auto mult = primary_elements_upto(inner);
  return blocked_sum(mult.size(), ctx.exec(), ctx.evaluator().precision(),
                     [&](size_t i, SumAccumulator& acc) {
                       GaussInt c = alpha * mult[i];
                       if (beta_class(c) != beta) return;
                       double w = r(to_double(c.norm()) / x);
                       if (w == 0.0) return;
                       ComplexVal gt = ctx.gtilde(c);
                       if (gt.v == Cplx{0.0, 0.0} && gt.err == 0.0) return;
                       Cplx gr = grossencharakter(c, ell);
                       acc.add(gt.v * gr * w, gt.err * w + eps());
                     });
}

// ---------------------------------------------------------------------------
// Scans and moments
// ---------------------------------------------------------------------------

std::vector<ExperimentRow> conjecture_scan(const std::vector<double>& x_grid,
                                           long long ell, BetaClass beta,
                                           SumContext& ctx) {
  if (x_grid.empty()) return {};
  double x_max = *std::max_element(x_grid.begin(), x_grid.end());
  auto support = lambda_support_upto(static_cast<int64_t>(std::floor(x_max)), beta,
                                     ctx.exec());
  // warm the prime values in parallel, in deterministic slots
  parallel_blocks((support.size() + 255) / 256, ctx.exec(), [&](size_t b) {
    for (size_t i = b * 256; i < std::min(support.size(), (b + 1) * 256); ++i)
      if (support[i].power == 1) ctx.evaluator().g4_tilde_prime(support[i].c);
  });

  std::vector<ExperimentRow> rows;
  for (double x : x_grid) {
    size_t n = 0;
    while (n < support.size() && to_double(support[n].c.norm()) <= x) ++n;
    ComplexVal s = blocked_sum(n, ctx.exec(), ctx.evaluator().precision(),
                               [&](size_t i, SumAccumulator& acc) {
                                 const auto& e = support[i];
                                 if (e.power != 1) return;  // normalized sum vanishes
                                 ComplexVal gt = ctx.evaluator().g4_tilde_prime(e.c);
                                 Cplx gr = grossencharakter(e.c, ell);
                                 acc.add(gt.v * gr * e.lambda, gt.err * e.lambda + eps());
                               });
    ExperimentRow row;
    row.x = x;
    row.ell = ell;
    row.beta = beta;
    row.value = s;
    row.normalized = s.v / std::pow(x, 0.75);
    rows.push_back(row);
  }
  return rows;
}

WeylMoment weyl_moment(double x, long long k, SumContext& ctx) {
  if (k == 0) throw std::invalid_argument("weyl_moment: k must be nonzero");
  auto primes = primary_primes_upto(static_cast<int64_t>(std::floor(x)), std::nullopt,
                                    ctx.exec());
  WeylMoment out;
  out.direct = blocked_sum(primes.size(), ctx.exec(), ctx.evaluator().precision(),
                           [&](size_t i, SumAccumulator& acc) {
                             const GaussInt& pi = primes[i];
                             ComplexVal gt = ctx.evaluator().g4_tilde_prime(pi);
                             ComplexVal p = cpow_int(gt, k);
                             acc.add(p.v, p.err);
                           });
  out.reduced = blocked_sum(primes.size(), ctx.exec(), ctx.evaluator().precision(),
                            [&](size_t i, SumAccumulator& acc) {
                              const GaussInt& pi = primes[i];
                              ComplexVal gt = ctx.evaluator().g4_tilde_prime(pi);
                              // degree-2: the normalized value is +-1 exactly,
                              // the mod-4 reduction applies to degree-1 only
                              ComplexVal p = pi.im == 0 ? cpow_int(gt, k)
                                                        : moment_reduce(pi, k, gt);
                              acc.add(p.v, p.err);
                            });
  return out;
}

// ---------------------------------------------------------------------------
// Vaughan sums
// ---------------------------------------------------------------------------

namespace {

struct VaughanLists {
  std::vector<LambdaSupportEntry> a_list;
  std::vector<std::pair<GaussInt, int>> b_list;  // squarefree, with mu
  std::vector<GaussInt> c_list;
};

VaughanLists vaughan_lists(int64_t bound, SumContext& ctx) {
  VaughanLists ls;
  ls.a_list = lambda_support_upto(bound, std::nullopt, ctx.exec());
  ls.c_list = primary_elements_upto(bound);
  for (const GaussInt& b : ls.c_list) {
    int m = ctx.mu_of(b);
    if (m != 0) ls.b_list.emplace_back(b, m);
  }
  return ls;
}

}  // namespace

SigmaResult vaughan_sigma(double x, long long ell, BetaClass beta, int64_t u,
                          VaughanJ j, const SmoothWeight& r, SumContext& ctx) {
  int64_t bound = static_cast<int64_t>(std::floor(r.support_hi() * x));
  SigmaResult out;
  if (bound < 1) return out;
  VaughanLists ls = vaughan_lists(bound, ctx);

  SumAccumulator acc(ctx.evaluator().precision());
  for (const auto& ae : ls.a_list) {
    int64_t na = static_cast<int64_t>(ae.c.norm());
    if (j == VaughanJ::S2DoublePrime || j == VaughanJ::S4) {
      if (na > u) continue;
    }
    if (j == VaughanJ::S3 && na <= u) continue;
    for (const auto& [b, mu_b] : ls.b_list) {
      int64_t nb = static_cast<int64_t>(b.norm());
      __int128_t nab = static_cast<__int128_t>(na) * nb;
      if (nab > bound) break;  // b_list is norm-sorted
      if ((j == VaughanJ::S1 || j == VaughanJ::S2DoublePrime || j == VaughanJ::S3) &&
          nb > u)
        break;
      if (j == VaughanJ::S2Prime && nab > u) continue;
      if (j == VaughanJ::S2DoublePrime && nab <= u) continue;
      GaussInt ab = ae.c * b;
      for (const GaussInt& c : ls.c_list) {
        int64_t nc = static_cast<int64_t>(c.norm());
        __int128_t nabc = nab * nc;
        if (nabc > bound) break;
        int64_t nbc = nb * nc;
        if (j == VaughanJ::S0 && nbc > u) continue;
        if (j == VaughanJ::S3 && nbc <= u) continue;
        if (j == VaughanJ::S4 && nbc > u) continue;
        GaussInt abc = ab * c;
        if (beta_class(abc) != beta) continue;
        double w = r(static_cast<double>(static_cast<int64_t>(nabc)) / x);
        if (w == 0.0) continue;
        ComplexVal gt = ctx.gtilde(abc);
        if (gt.v == Cplx{0.0, 0.0} && gt.err == 0.0) continue;
        Cplx gr = grossencharakter(abc, ell);
        double scale = ae.lambda * mu_b * w;
        acc.add(gt.v * gr * scale, gt.err * std::abs(scale) + eps());
      }
    }
  }
  out.value = acc.result();
  out.abs_sum = acc.abs_sum();
  return out;
}

VaughanReport vaughan_check(double x, long long ell, BetaClass beta, int64_t u,
                            const SmoothWeight& r, SumContext& ctx) {
  VaughanReport rep;
  const VaughanJ all[6] = {VaughanJ::S0, VaughanJ::S1, VaughanJ::S2Prime,
                           VaughanJ::S2DoublePrime, VaughanJ::S3, VaughanJ::S4};
  for (int j = 0; j < 6; ++j) rep.sigma[j] = vaughan_sigma(x, ell, beta, u, all[j], r, ctx);
  rep.residual = rep.sigma[0].value + rep.sigma[2].value + rep.sigma[3].value +
                 rep.sigma[4].value - rep.sigma[1].value - rep.sigma[5].value;
  for (const auto& s : rep.sigma) rep.scale += s.abs_sum;
  rep.u_in_range = static_cast<double>(u) < std::sqrt(x);
  return rep;
}

// ---------------------------------------------------------------------------
// Type-II bilinear forms
// ---------------------------------------------------------------------------

ComplexVal type2_bilinear(double x, long long ell, BetaClass beta, int64_t u,
                          VaughanJ which, const SmoothWeight& r, SumContext& ctx) {
  if (which != VaughanJ::S2DoublePrime && which != VaughanJ::S3)
    throw std::invalid_argument("type2_bilinear: which must be S2'' or S3");
  int64_t bound = static_cast<int64_t>(std::floor(r.support_hi() * x));
  if (bound < 1 || u < 1) return ComplexVal::zero();

  struct Weighted {
    GaussInt z;
    Cplx w;
    double err;
    BetaClass cls;
  };
  std::vector<Weighted> vs, ws;

  auto push = [&](std::vector<Weighted>& dst, const GaussInt& z, ComplexVal coeff) {
    if (coeff.v == Cplx{0.0, 0.0} && coeff.err == 0.0) return;
    dst.push_back({z, coeff.v, coeff.err, beta_class(z)});
  };

  if (which == VaughanJ::S2DoublePrime) {
    // A(v) = gtilde(v) gross(v) sum_{ab=v, N(a),N(b)<=u} Lambda(a) mu(b),
    // supported on u < N(v) <= u^2;  B(w) on N(w) <= 2X/u
    for (const GaussInt& v : primary_elements_upto(u * u)) {
      int64_t nv = static_cast<int64_t>(v.norm());
      if (nv <= u) continue;
      const Factorization& f = ctx.factored(v);
      double inner = 0.0;
      for (const GaussInt& d : primary_divisors(f)) {
        if (d.norm() > u) continue;
        GaussInt q = *div_exact(v, d);
        if (q.norm() > u) continue;
        double la = ctx.lambda_of(d);
        if (la == 0.0) continue;
        inner += la * ctx.mu_of(q);
      }
      if (inner == 0.0) continue;
      ComplexVal gt = ctx.gtilde(v);
      push(vs, v, gt * (grossencharakter(v, ell) * inner));
    }
    for (const GaussInt& w : primary_elements_upto(bound / u)) {
      ComplexVal gt = ctx.gtilde(w);
      push(ws, w, gt * grossencharakter(w, ell));
    }
  } else {
    // G(v) = Lambda(v) gtilde(v) gross(v), H(w) = gtilde(w) gross(w) *
    // sum_{bc=w, N(b)<=u} mu(b); both ranges (u, 2X/u]
    for (const auto& ae : lambda_support_upto(bound / u, std::nullopt, ctx.exec())) {
      if (static_cast<int64_t>(ae.c.norm()) <= u) continue;
      ComplexVal gt = ae.power == 1 ? ctx.evaluator().g4_tilde_prime(ae.c)
                                    : ctx.gtilde(ae.c);
      push(vs, ae.c, gt * (grossencharakter(ae.c, ell) * ae.lambda));
    }
    for (const GaussInt& w : primary_elements_upto(bound / u)) {
      if (static_cast<int64_t>(w.norm()) <= u) continue;
      const Factorization& f = ctx.factored(w);
      double inner = 0.0;
      for (const GaussInt& d : primary_divisors(f))
        if (d.norm() <= u) inner += ctx.mu_of(d);
      if (inner == 0.0) continue;
      ComplexVal gt = ctx.gtilde(w);
      push(ws, w, gt * (grossencharakter(w, ell) * inner));
    }
  }

  return blocked_sum(vs.size() * std::max<size_t>(ws.size(), 1), ctx.exec(),
                     ctx.evaluator().precision(), [&](size_t idx, SumAccumulator& acc) {
                       if (ws.empty()) return;
                       const Weighted& v = vs[idx / ws.size()];
                       const Weighted& w = ws[idx % ws.size()];
                       if (beta_mul(v.cls, w.cls) != beta) return;
                       double nv = to_double(v.z.norm()), nw = to_double(w.z.norm());
                       double wt = r(nv * nw / x);
                       if (wt == 0.0) return;
                       SymbolValue s = quadratic_symbol(w.z, v.z);
                       if (s.is_zero()) return;
                       double sign = c_parity(v.z, w.z) ? -1.0 : 1.0;
                       Cplx term = v.w * w.w * s.value() * (sign * wt);
                       double terr = (v.err * std::abs(w.w) + w.err * std::abs(v.w)) * wt;
                       acc.add(term, terr + eps());
                     });
}

// ---------------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------------

namespace {

double simpson_rec(const std::function<double(double)>& fn, double a, double m,
                   double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = fn(lm), frm = fn(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol * (std::abs(left + right) + 1e-300))
    return left + right + delta / 15.0;
  return simpson_rec(fn, a, lm, m, fa, flm, fm, left, tol, depth - 1) +
         simpson_rec(fn, m, rm, b, fm, frm, fb, right, tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol) {
  double m = 0.5 * (a + b);
  double fa = fn(a), fm = fn(m), fb = fn(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(fn, a, m, b, fa, fm, fb, whole, rel_tol, 24);
}

Lemma61Report lemma61_bound_check(double x, long long ell, BetaClass beta,
                                  int64_t u, const SmoothWeight& r, SumContext& ctx) {
  Lemma61Report rep;
  rep.quadrature_rel_tol = 1e-6;
  SigmaResult s1 = vaughan_sigma(x, ell, beta, u, VaughanJ::S1, r, ctx);
  SigmaResult s2p = vaughan_sigma(x, ell, beta, u, VaughanJ::S2Prime, r, ctx);
  rep.lhs_sigma1 = s1.value.abs();
  rep.lhs_sigma2p = s2p.value.abs();

  double rhs1 = 0.0, rhs2p = 0.0;
  for (const GaussInt& alpha : primary_elements_upto(u)) {
    if (ctx.mu_of(alpha) == 0) continue;
    double f_x = f_sum(x, ell, beta, alpha, r, ctx).abs();
    double f_2x = f_sum(2.0 * x, ell, beta, alpha, r, ctx).abs();
    double integral = adaptive_simpson(
        [&](double t) { return f_sum(t, ell, beta, alpha, r, ctx).abs() / t; }, x,
        2.0 * x, rep.quadrature_rel_tol);
    rhs1 += f_2x * std::log(2.0 * x) + f_x * std::log(x) + integral;
    rhs2p += f_x + f_2x;
  }
  rep.rhs_sigma1 = rhs1;
  rep.rhs_sigma2p = rhs2p;
  double slack1 = s1.value.err + 1e-9 * (rhs1 + s1.abs_sum) + 1e-12;
  double slack2 = s2p.value.err + 1e-9 * (rhs2p + s2p.abs_sum) + 1e-12;
  rep.sigma1_ok = rep.lhs_sigma1 <= rhs1 + slack1;
  rep.sigma2p_ok = rep.lhs_sigma2p <= rhs2p + slack2;
  return rep;
}

}  // namespace qgs
