#pragma once

#include <optional>

#include "divstab/polynomial.hpp"

namespace divstab {

// Symmetric matrix with exact rational entries (quadratic-form densities,
// analysis regions).
struct SymMatrixQ {
  int n = 0;
  std::vector<std::vector<Rational>> a;

  static SymMatrixQ identity(int n);
  static SymMatrixQ from_rows(std::vector<std::vector<Rational>> rows);

  bool operator==(const SymMatrixQ& o) const { return n == o.n && a == o.a; }

  // x^T A x as a polynomial.
  Polynomial quad_form(int nvars) const;

  // Numeric eigenvalue test with a relative threshold.
  bool is_positive_definite() const;
};

class IndefiniteDensityForStability : public std::invalid_argument {
 public:
  IndefiniteDensityForStability()
      : std::invalid_argument(
            "stability analysis requires a positive definite density") {}
};

// Density family rho(x):
//   NormPower      rho = |x|^(2 alpha)
//   QuadFormPower  rho = (x^T P x)^alpha, P symmetric positive definite
//   Explicit       rho a plain polynomial; may be sign-indefinite, which is
//                  legal only for instability analysis
class DensitySpec {
 public:
  enum class Kind { NormPower, QuadFormPower, Explicit };

  static DensitySpec norm_power(int nvars, int alpha);
  static DensitySpec quad_form_power(SymMatrixQ P, int alpha,
                                     bool check_positive_definite = true);
  static DensitySpec explicit_density(Polynomial rho, bool positive_definite);

  Kind kind() const { return kind_; }
  int nvars() const { return nvars_; }
  int alpha() const { return alpha_; }
  const SymMatrixQ& P() const { return *P_; }
  const Polynomial& explicit_poly() const { return *rho_; }
  bool positive_definite() const { return positive_definite_; }

  // Same family, different power (norm/quadform kinds only).
  DensitySpec with_alpha(int alpha) const;

  // Weight polynomial w with rho = w^alpha (norm/quadform kinds only).
  Polynomial weight() const;

  // rho expanded to a single polynomial.
  Polynomial as_polynomial() const;

  double evaluate(const std::vector<double>& x) const;

  std::string describe(const std::vector<std::string>& vars) const;

 private:
  DensitySpec() = default;

  Kind kind_ = Kind::NormPower;
  int nvars_ = 0;
  int alpha_ = 1;
  std::optional<SymMatrixQ> P_;
  std::optional<Polynomial> rho_;
  bool positive_definite_ = true;
};

}  // namespace divstab
