#pragma once

#include <map>

#include "divstab/polynomial.hpp"

namespace divstab {

class EvalAtOriginWithNegativePower : public std::domain_error {
 public:
  EvalAtOriginWithNegativePower()
      : std::domain_error(
            "expression with negative weight power evaluated where the "
            "weight vanishes") {}
};

// Finite sum  sum_m w(x)^m * p_m(x)  with integer (possibly negative)
// half-powers m and a positive-definite quadratic weight w. The default
// weight is |x|^2, which keeps every density-weighted divergence the
// analysis produces in closed form; (x^T P x)-weighted expressions use the
// same machinery with w = x^T P x.
class NormExpr {
 public:
  NormExpr(int nvars, Polynomial weight)
      : nvars_(nvars), weight_(std::move(weight)) {
    if (weight_.nvars() != nvars_) {
      throw std::invalid_argument("weight arity mismatch");
    }
  }

  static Polynomial norm_sq_weight(int nvars);

  // Zero expression over |x|^2.
  static NormExpr zero_norm(int nvars) {
    return NormExpr(nvars, norm_sq_weight(nvars));
  }

  static NormExpr single(int m, Polynomial p, Polynomial weight);

  // Plain polynomial as part m = 0 over |x|^2.
  static NormExpr from_polynomial(Polynomial p);

  int nvars() const { return nvars_; }
  const Polynomial& weight() const { return weight_; }
  const std::map<int, Polynomial>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  bool operator==(const NormExpr& o) const {
    return nvars_ == o.nvars_ && weight_ == o.weight_ && parts_ == o.parts_;
  }

  NormExpr operator+(const NormExpr& o) const;
  NormExpr operator-(const NormExpr& o) const;
  NormExpr operator-() const;
  NormExpr operator*(const Rational& c) const;
  NormExpr multiplied_by(const Polynomial& p) const;
  // Multiply by w^dm.
  NormExpr shifted(int dm) const;

  // Pulls every extractable weight factor out of the part polynomials and
  // merges parts, e.g. {m: p*w} -> {m+1: p}. Called by display and by sign
  // preprocessing, not by arithmetic.
  NormExpr normalized() const;

  struct Cleared {
    Polynomial poly;
    int shift;  // poly == w^shift * expr away from the weight's zero locus
  };
  // Multiplies by w^M with M = -min part key (0 if all keys are
  // nonnegative) and expands to a single polynomial. The weight is positive
  // away from the origin, so the sign of poly equals the sign of the
  // expression there.
  Cleared clear_denominator() const;

  double evaluate(const std::vector<double>& x) const;
  Rational evaluate(const std::vector<Rational>& x) const;

  // min over parts of (2m + low_total_degree(p_m)); INT_MAX when zero.
  // Meaningful on normalized expressions: the value at / limit toward the
  // origin is zero iff this is positive.
  int origin_degree() const;

  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  void insert_part(int m, const Polynomial& p);

  int nvars_;
  Polynomial weight_;
  std::map<int, Polynomial> parts_;
};

}  // namespace divstab
