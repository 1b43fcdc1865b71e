#include "divstab/density.hpp"

#include <Eigen/Dense>

#include "divstab/normexpr.hpp"

namespace divstab {

SymMatrixQ SymMatrixQ::identity(int n) {
  SymMatrixQ m;
  m.n = n;
  m.a.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) m.a[i][i] = 1;
  return m;
}

SymMatrixQ SymMatrixQ::from_rows(std::vector<std::vector<Rational>> rows) {
  SymMatrixQ m;
  m.n = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.n) {
      throw std::invalid_argument("matrix is not square");
    }
  }
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j < m.n; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw std::invalid_argument("matrix is not symmetric");
      }
    }
  }
  m.a = std::move(rows);
  return m;
}

Polynomial SymMatrixQ::quad_form(int nvars) const {
  if (nvars != n) throw std::invalid_argument("quad_form arity mismatch");
  Polynomial q(nvars);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a[i][j] == 0) continue;
      q += Polynomial::variable(nvars, i) * Polynomial::variable(nvars, j) *
           a[i][j];
    }
  }
  return q;
}

bool SymMatrixQ::is_positive_definite() const {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = a[i][j].get_d();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  double tol = 1e-10 * std::max(1.0, m.norm());
  return es.eigenvalues().minCoeff() > tol;
}

DensitySpec DensitySpec::norm_power(int nvars, int alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  DensitySpec d;
  d.kind_ = Kind::NormPower;
  d.nvars_ = nvars;
  d.alpha_ = alpha;
  d.positive_definite_ = true;
  return d;
}

DensitySpec DensitySpec::quad_form_power(SymMatrixQ P, int alpha,
                                         bool check_positive_definite) {
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  DensitySpec d;
  d.kind_ = Kind::QuadFormPower;
  d.nvars_ = P.n;
  d.alpha_ = alpha;
  if (check_positive_definite && !P.is_positive_definite()) {
    throw IndefiniteDensityForStability();
  }
  d.positive_definite_ = true;
  d.P_ = std::move(P);
  return d;
}

DensitySpec DensitySpec::explicit_density(Polynomial rho,
                                          bool positive_definite) {
  DensitySpec d;
  d.kind_ = Kind::Explicit;
  d.nvars_ = rho.nvars();
  d.positive_definite_ = positive_definite;
  d.rho_ = std::move(rho);
  return d;
}

DensitySpec DensitySpec::with_alpha(int alpha) const {
  switch (kind_) {
    case Kind::NormPower:
      return norm_power(nvars_, alpha);
    case Kind::QuadFormPower:
      return quad_form_power(*P_, alpha, false);
    case Kind::Explicit:
      throw std::logic_error("explicit density has no power parameter");
  }
  throw std::logic_error("unreachable");
}

Polynomial DensitySpec::weight() const {
  switch (kind_) {
    case Kind::NormPower:
      return NormExpr::norm_sq_weight(nvars_);
    case Kind::QuadFormPower:
      return P_->quad_form(nvars_);
    case Kind::Explicit:
      throw std::logic_error("explicit density has no weight form");
  }
  throw std::logic_error("unreachable");
}

Polynomial DensitySpec::as_polynomial() const {
  if (kind_ == Kind::Explicit) return *rho_;
  return weight().pow(static_cast<unsigned>(alpha_));
}

double DensitySpec::evaluate(const std::vector<double>& x) const {
  return as_polynomial().evaluate(x);
}

std::string DensitySpec::describe(const std::vector<std::string>& vars) const {
  switch (kind_) {
    case Kind::NormPower:
      return "|x|^" + std::to_string(2 * alpha_);
    case Kind::QuadFormPower:
      return "(" + weight().to_string(vars) + ")^" + std::to_string(alpha_);
    case Kind::Explicit:
      return rho_->to_string(vars);
  }
  return "";
}

}  // namespace divstab
