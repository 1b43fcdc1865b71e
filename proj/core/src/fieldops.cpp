#include "divstab/fieldops.hpp"

namespace divstab {

namespace {

// (Px) . f with P = I reducing to x . f.
Polynomial weighted_dot(const VectorField& f, const DensitySpec& rho) {
  int n = f.dim();
  if (rho.kind() == DensitySpec::Kind::NormPower) return f.x_dot_f();
  const SymMatrixQ& P = rho.P();
  std::vector<Polynomial> px;
  px.reserve(n);
  for (int i = 0; i < n; ++i) {
    Polynomial row(n);
    for (int j = 0; j < n; ++j) {
      if (P.a[i][j] != 0) row += Polynomial::variable(n, j) * P.a[i][j];
    }
    px.push_back(std::move(row));
  }
  return f.dot(px);
}

}  // namespace

NormExpr div_rho_f(const VectorField& f, const DensitySpec& rho,
                   bool inverse) {
  if (rho.nvars() != f.dim()) {
    throw std::invalid_argument("density/field arity mismatch");
  }
  if (rho.kind() == DensitySpec::Kind::Explicit) {
    if (inverse) throw UnsupportedInverse();
    Polynomial p = grad_dot_f(rho.explicit_poly(), f) +
                   rho.explicit_poly() * f.divergence();
    return NormExpr::from_polynomial(std::move(p));
  }

  int alpha = rho.alpha();
  Polynomial w = rho.weight();
  Polynomial dot = weighted_dot(f, rho);
  Rational two_alpha(2 * alpha);
  Polynomial divf = f.divergence();

  if (!inverse) {
    NormExpr e = NormExpr::single(alpha - 1, dot * two_alpha, w);
    return e + NormExpr::single(alpha, divf, w);
  }
  NormExpr e = NormExpr::single(-alpha - 1, dot * (-two_alpha), w);
  return e + NormExpr::single(-alpha, divf, w);
}

NormExpr grad_rho_dot_f(const VectorField& f, const DensitySpec& rho) {
  if (rho.kind() == DensitySpec::Kind::Explicit) {
    return NormExpr::from_polynomial(grad_dot_f(rho.explicit_poly(), f));
  }
  Polynomial w = rho.weight();
  Polynomial dot = weighted_dot(f, rho);
  return NormExpr::single(rho.alpha() - 1, dot * Rational(2 * rho.alpha()), w);
}

Polynomial grad_dot_f(const Polynomial& rho, const VectorField& f) {
  if (rho.nvars() != f.dim()) {
    throw std::invalid_argument("arity mismatch");
  }
  Polynomial acc(f.dim());
  for (int i = 0; i < f.dim(); ++i) {
    acc += rho.differentiate(i) * f.component(i);
  }
  return acc;
}

Polynomial rho2_div_rho_inv_f(const VectorField& f, const Polynomial& rho) {
  return rho * f.divergence() - grad_dot_f(rho, f);
}

}  // namespace divstab
