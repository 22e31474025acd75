#pragma once

// Tracked-error complex values and deterministic summation.
//
// Sums are evaluated with a pairwise tree over fixed-size blocks of the term
// stream, so the result depends only on term order, never on thread count.
// Every ComplexVal carries a conservative error bound: input errors are
// added, and each reduction charges eps * tree-depth * sum(|terms|).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace qgs {

using Cplx = std::complex<double>;

enum class Precision : uint8_t {
  Double,       // plain pairwise reduction
  DoubleDouble  // Neumaier-compensated blocks under the same tree
};

struct ComplexVal {
  Cplx v{0.0, 0.0};
  double err = 0.0;

  ComplexVal() = default;
  ComplexVal(Cplx z, double e) : v(z), err(e) {}
  ComplexVal(double re, double im, double e) : v(re, im), err(e) {}
  static ComplexVal exact(Cplx z) { return {z, 0.0}; }
  static ComplexVal zero() { return {Cplx(0.0, 0.0), 0.0}; }

  double re() const { return v.real(); }
  double im() const { return v.imag(); }
  double abs() const { return std::abs(v); }

  ComplexVal operator+(const ComplexVal& o) const { return {v + o.v, err + o.err}; }
  ComplexVal operator-(const ComplexVal& o) const { return {v - o.v, err + o.err}; }
  ComplexVal operator*(const ComplexVal& o) const {
    double ea = err, eb = o.err;
    double ma = std::abs(v), mb = std::abs(o.v);
    double e = ma * eb + mb * ea + ea * eb +
               std::numeric_limits<double>::epsilon() * ma * mb;
    return {v * o.v, e};
  }
  ComplexVal operator*(double s) const { return {v * s, err * std::abs(s)}; }
  ComplexVal operator*(Cplx s) const { return {v * s, err * std::abs(s)}; }
  ComplexVal operator-() const { return {-v, err}; }
  ComplexVal conj() const { return {std::conj(v), err}; }
};

// Streaming deterministic reducer: pairwise "binary counter" tree over the
// stream order plus compensated option. Also tracks sum of |term|.
class SumAccumulator {
 public:
  explicit SumAccumulator(Precision mode = Precision::Double) : mode_(mode) {}

  void add(Cplx term, double term_err = 0.0) {
    abs_sum_ += std::abs(term);
    err_in_ += term_err;
    ++count_;
    if (mode_ == Precision::DoubleDouble) {
      // Neumaier running compensation; deterministic in stream order
      Cplx t = comp_sum_ + term;
      Cplx big_r(std::abs(comp_sum_.real()) >= std::abs(term.real())
                     ? (comp_sum_.real() - t.real()) + term.real()
                     : (term.real() - t.real()) + comp_sum_.real(),
                 std::abs(comp_sum_.imag()) >= std::abs(term.imag())
                     ? (comp_sum_.imag() - t.imag()) + term.imag()
                     : (term.imag() - t.imag()) + comp_sum_.imag());
      comp_c_ += big_r;
      comp_sum_ = t;
      return;
    }
    // carry-combine: level k holds a pending sum of 2^k terms
    Cplx carry = term;
    size_t k = 0;
    while (k < levels_.size() && occupied_ & (size_t(1) << k)) {
      carry += levels_[k];
      occupied_ &= ~(size_t(1) << k);
      ++k;
    }
    if (k == levels_.size()) levels_.push_back(Cplx{});
    levels_[k] = carry;
    occupied_ |= size_t(1) << k;
  }

  size_t count() const { return count_; }
  double abs_sum() const { return abs_sum_; }

  ComplexVal result() const {
    Cplx total{0.0, 0.0};
    if (mode_ == Precision::DoubleDouble) {
      total = comp_sum_ + comp_c_;
    } else {
      for (size_t k = 0; k < levels_.size(); ++k)
        if (occupied_ & (size_t(1) << k)) total += levels_[k];
    }
    double depth = 1.0;
    for (size_t c = count_; c > 1; c >>= 1) depth += 1.0;
    double round_err =
        std::numeric_limits<double>::epsilon() * depth * abs_sum_;
    return {total, err_in_ + round_err};
  }

 private:
  Precision mode_;
  std::vector<Cplx> levels_;
  size_t occupied_ = 0;
  size_t count_ = 0;
  double abs_sum_ = 0.0;
  double err_in_ = 0.0;
  Cplx comp_sum_{0.0, 0.0};
  Cplx comp_c_{0.0, 0.0};
};

// combine per-block partials in block order (use with parallel block maps)
ComplexVal combine_blocks(const std::vector<ComplexVal>& blocks);

inline double eps() { return std::numeric_limits<double>::epsilon(); }

}  // namespace qgs
