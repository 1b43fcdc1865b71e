#pragma once

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divstab/rational.hpp"

namespace divstab {

using Exponents = std::vector<unsigned>;

// Multivariate polynomial with exact rational coefficients.
//
// Terms live in a map keyed by exponent vector (one entry per variable,
// positional), so equal polynomials have identical term maps and the
// iteration order is deterministic. Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(int nvars) : nvars_(nvars) {
    if (nvars <= 0) throw std::invalid_argument("nvars must be positive");
  }

  static Polynomial zero(int nvars) { return Polynomial(nvars); }

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    Rational v = c;
    v.canonicalize();
    if (v != 0) p.terms_[Exponents(nvars, 0)] = v;
    return p;
  }

  static Polynomial variable(int nvars, int index) {
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e.at(index) = 1;
    p.terms_[e] = 1;
    return p;
  }

  static Polynomial monomial(int nvars, Exponents e, const Rational& c) {
    Polynomial p(nvars);
    if (static_cast<int>(e.size()) != nvars) {
      throw std::invalid_argument("exponent vector arity mismatch");
    }
    Rational v = c;
    v.canonicalize();
    if (v != 0) p.terms_[std::move(e)] = v;
    return p;
  }

  static Polynomial from_terms(int nvars, std::map<Exponents, Rational> terms);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Rational& c) const;

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

  Polynomial differentiate(int var_index) const;
  Polynomial pow(unsigned k) const;

  Rational evaluate(const std::vector<Rational>& x) const;
  double evaluate(const std::vector<double>& x) const;

  Rational constant_term() const;

  // -1 for the zero polynomial.
  int total_degree() const;
  // Lowest total degree among terms; INT_MAX for the zero polynomial.
  int low_total_degree() const;

  bool is_homogeneous() const;
  bool all_exponents_even() const;

  // Requires all_exponents_even(): returns p with x_i^2 replaced by y_i.
  Polynomial substitute_squares() const;

  // Symmetric Gram matrix when the polynomial is a (homogeneous) quadratic
  // form; nullopt otherwise.
  std::optional<std::vector<std::vector<Rational>>> quadratic_form_matrix()
      const;

  // Exact division: returns q with *this == q * divisor, or nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  void check_arity(const Polynomial& o) const;

  int nvars_;
  std::map<Exponents, Rational> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) {
  return p * c;
}

// Flattened double-precision view for hot evaluation loops (sampling,
// integration). Exactness does not matter on this path.
struct CompiledPoly {
  int nvars = 0;
  std::vector<double> coeffs;
  std::vector<unsigned> exps;  // nvars entries per term

  static CompiledPoly compile(const Polynomial& p);
  double eval(const double* x) const;
};

}  // namespace divstab
