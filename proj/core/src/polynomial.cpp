#include "divstab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace divstab {

Polynomial Polynomial::from_terms(int nvars,
                                  std::map<Exponents, Rational> terms) {
  Polynomial p(nvars);
  for (auto it = terms.begin(); it != terms.end();) {
    if (static_cast<int>(it->first.size()) != nvars) {
      throw std::invalid_argument("exponent vector arity mismatch");
    }
    it->second.canonicalize();
    if (it->second == 0) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
  p.terms_ = std::move(terms);
  return p;
}

void Polynomial::check_arity(const Polynomial& o) const {
  if (nvars_ != o.nvars_) {
    throw std::invalid_argument("polynomial arity mismatch");
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_arity(o);
  Polynomial r(*this);
  for (const auto& [e, c] : o.terms_) {
    auto it = r.terms_.find(e);
    if (it == r.terms_.end()) {
      r.terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + (-o);
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [e, v] : r.terms_) v *= c;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_arity(o);
  Polynomial r(nvars_);
  Exponents e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      auto it = r.terms_.find(e);
      if (it == r.terms_.end()) {
        Rational c = ca * cb;
        if (c != 0) r.terms_.emplace(e, std::move(c));
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
  }
  return r;
}

Polynomial Polynomial::differentiate(int var_index) const {
  if (var_index < 0 || var_index >= nvars_) {
    throw std::out_of_range("differentiate: variable index out of range");
  }
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    Exponents d = e;
    Rational k(static_cast<long>(d[var_index]));
    d[var_index] -= 1;
    auto it = r.terms_.find(d);
    if (it == r.terms_.end()) {
      r.terms_.emplace(std::move(d), c * k);
    } else {
      it->second += c * k;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = Polynomial::constant(nvars_, 1);
  Polynomial base(*this);
  while (k > 0) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return r;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != nvars_) {
    throw std::invalid_argument("evaluate: point arity mismatch");
  }
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
    }
    acc += t;
  }
  return acc;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != nvars_) {
    throw std::invalid_argument("evaluate: point arity mismatch");
  }
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] > 0) t *= std::pow(x[i], static_cast<int>(e[i]));
    }
    acc += t;
  }
  return acc;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

static int degree_of(const Exponents& e) {
  int d = 0;
  for (unsigned k : e) d += static_cast<int>(k);
  return d;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
  return d;
}

int Polynomial::low_total_degree() const {
  int d = INT_MAX;
  for (const auto& [e, c] : terms_) d = std::min(d, degree_of(e));
  return d;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  return total_degree() == low_total_degree();
}

bool Polynomial::all_exponents_even() const {
  for (const auto& [e, c] : terms_) {
    for (unsigned k : e) {
      if (k % 2 != 0) return false;
    }
  }
  return true;
}

Polynomial Polynomial::substitute_squares() const {
  if (!all_exponents_even()) {
    throw std::logic_error("substitute_squares requires even exponents");
  }
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents h = e;
    for (unsigned& k : h) k /= 2;
    r.terms_.emplace(std::move(h), c);
  }
  return r;
}

std::optional<std::vector<std::vector<Rational>>>
Polynomial::quadratic_form_matrix() const {
  if (terms_.empty()) return std::nullopt;
  std::vector<std::vector<Rational>> g(
      nvars_, std::vector<Rational>(nvars_, Rational(0)));
  for (const auto& [e, c] : terms_) {
    if (degree_of(e) != 2) return std::nullopt;
    int i = -1, j = -1;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 2) {
        i = j = v;
      } else if (e[v] == 1) {
        (i < 0 ? i : j) = v;
      }
    }
    if (i == j) {
      g[i][i] = c;
    } else {
      Rational half = c / 2;
      g[i][j] = half;
      g[j][i] = half;
    }
  }
  return g;
}

std::optional<Polynomial> Polynomial::divide_exact(
    const Polynomial& divisor) const {
  check_arity(divisor);
  if (divisor.is_zero()) return std::nullopt;
  if (is_zero()) return Polynomial::zero(nvars_);

  // Long division in the term-map (lex) order; the divisor's leading term
  // is its last map entry.
  const auto& dlead = *divisor.terms_.rbegin();
  Polynomial rem(*this);
  Polynomial quot(nvars_);
  while (!rem.is_zero()) {
    const auto& rlead = *rem.terms_.rbegin();
    Exponents qe(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      if (rlead.first[i] < dlead.first[i]) return std::nullopt;
      qe[i] = rlead.first[i] - dlead.first[i];
    }
    Rational qc = rlead.second / dlead.second;
    Polynomial qterm = Polynomial::monomial(nvars_, qe, qc);
    quot += qterm;
    rem -= qterm * divisor;
  }
  return quot;
}

std::string Polynomial::to_string(const std::vector<std::string>& vars) const {
  if (static_cast<int>(vars.size()) != nvars_) {
    throw std::invalid_argument("to_string: variable list arity mismatch");
  }
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;

    std::vector<std::string> factors;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (e[i] == 1) {
        factors.push_back(vars[i]);
      } else {
        factors.push_back(vars[i] + "^" + std::to_string(e[i]));
      }
    }
    if (factors.empty()) {
      out << divstab::to_string(a);
    } else {
      if (a != 1) out << divstab::to_string(a) << "*";
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0) out << "*";
        out << factors[i];
      }
    }
  }
  return out.str();
}

CompiledPoly CompiledPoly::compile(const Polynomial& p) {
  CompiledPoly c;
  c.nvars = p.nvars();
  for (const auto& [e, coef] : p.terms()) {
    c.coeffs.push_back(coef.get_d());
    c.exps.insert(c.exps.end(), e.begin(), e.end());
  }
  return c;
}

double CompiledPoly::eval(const double* x) const {
  double acc = 0.0;
  const unsigned* e = exps.data();
  for (double coef : coeffs) {
    double t = coef;
    for (int i = 0; i < nvars; ++i, ++e) {
      unsigned k = *e;
      double b = x[i];
      while (k) {
        if (k & 1u) t *= b;
        k >>= 1u;
        if (k) b *= b;
      }
    }
    acc += t;
  }
  return acc;
}

}  // namespace divstab
