#include "divstab/normexpr.hpp"

#include <sstream>

namespace divstab {

Polynomial NormExpr::norm_sq_weight(int nvars) {
  Polynomial w(nvars);
  for (int i = 0; i < nvars; ++i) {
    Exponents e(nvars, 0);
    e[i] = 2;
    w += Polynomial::monomial(nvars, e, 1);
  }
  return w;
}

NormExpr NormExpr::single(int m, Polynomial p, Polynomial weight) {
  NormExpr e(p.nvars(), std::move(weight));
  if (!p.is_zero()) e.parts_.emplace(m, std::move(p));
  return e;
}

NormExpr NormExpr::from_polynomial(Polynomial p) {
  int n = p.nvars();
  return single(0, std::move(p), norm_sq_weight(n));
}

void NormExpr::insert_part(int m, const Polynomial& p) {
  if (p.is_zero()) return;
  auto it = parts_.find(m);
  if (it == parts_.end()) {
    parts_.emplace(m, p);
  } else {
    it->second += p;
    if (it->second.is_zero()) parts_.erase(it);
  }
}

NormExpr NormExpr::operator+(const NormExpr& o) const {
  if (nvars_ != o.nvars_ || weight_ != o.weight_) {
    throw std::invalid_argument("norm expression weight mismatch");
  }
  NormExpr r(*this);
  for (const auto& [m, p] : o.parts_) r.insert_part(m, p);
  return r;
}

NormExpr NormExpr::operator-(const NormExpr& o) const { return *this + (-o); }

NormExpr NormExpr::operator-() const {
  NormExpr r(*this);
  for (auto& [m, p] : r.parts_) p = -p;
  return r;
}

NormExpr NormExpr::operator*(const Rational& c) const {
  NormExpr r(nvars_, weight_);
  if (c == 0) return r;
  r.parts_ = parts_;
  for (auto& [m, p] : r.parts_) p = p * c;
  return r;
}

NormExpr NormExpr::multiplied_by(const Polynomial& p) const {
  NormExpr r(nvars_, weight_);
  for (const auto& [m, q] : parts_) r.insert_part(m, q * p);
  return r;
}

NormExpr NormExpr::shifted(int dm) const {
  NormExpr r(nvars_, weight_);
  for (const auto& [m, q] : parts_) r.parts_.emplace(m + dm, q);
  return r;
}

NormExpr NormExpr::normalized() const {
  NormExpr r(nvars_, weight_);
  for (const auto& [m, q] : parts_) {
    int mm = m;
    Polynomial p = q;
    for (;;) {
      auto quot = p.divide_exact(weight_);
      if (!quot) break;
      p = std::move(*quot);
      ++mm;
    }
    r.insert_part(mm, p);
  }
  return r;
}

NormExpr::Cleared NormExpr::clear_denominator() const {
  int min_m = 0;
  for (const auto& [m, q] : parts_) min_m = std::min(min_m, m);
  int shift = -min_m;
  Polynomial acc(nvars_);
  for (const auto& [m, q] : parts_) {
    acc += q * weight_.pow(static_cast<unsigned>(m + shift));
  }
  return Cleared{std::move(acc), shift};
}

double NormExpr::evaluate(const std::vector<double>& x) const {
  double w = weight_.evaluate(x);
  double acc = 0.0;
  for (const auto& [m, q] : parts_) {
    double val = q.evaluate(x);
    if (m >= 0) {
      double t = 1.0;
      for (int k = 0; k < m; ++k) t *= w;
      acc += t * val;
    } else {
      if (w == 0.0) throw EvalAtOriginWithNegativePower();
      double t = 1.0;
      for (int k = 0; k < -m; ++k) t *= w;
      acc += val / t;
    }
  }
  return acc;
}

Rational NormExpr::evaluate(const std::vector<Rational>& x) const {
  Rational w = weight_.evaluate(x);
  Rational acc = 0;
  for (const auto& [m, q] : parts_) {
    Rational val = q.evaluate(x);
    Rational t = 1;
    for (int k = 0; k < (m >= 0 ? m : -m); ++k) t *= w;
    if (m >= 0) {
      acc += t * val;
    } else {
      if (w == 0) throw EvalAtOriginWithNegativePower();
      acc += val / t;
    }
  }
  return acc;
}

int NormExpr::origin_degree() const {
  int d = INT_MAX;
  for (const auto& [m, q] : parts_) {
    d = std::min(d, 2 * m + q.low_total_degree());
  }
  return d;
}

std::string NormExpr::to_string(const std::vector<std::string>& vars) const {
  if (parts_.empty()) return "0";
  bool plain_norm = (weight_ == norm_sq_weight(nvars_));
  std::string wname = plain_norm ? "|x|" : "(" + weight_.to_string(vars) + ")";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, q] : parts_) {
    if (!first) out << " + ";
    first = false;
    if (m == 0) {
      out << "(" << q.to_string(vars) << ")";
    } else if (plain_norm) {
      out << "|x|^" << 2 * m << "*(" << q.to_string(vars) << ")";
    } else {
      out << wname << "^" << m << "*(" << q.to_string(vars) << ")";
    }
  }
  return out.str();
}

}  // namespace divstab
