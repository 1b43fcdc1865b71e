#pragma once

#include "divstab/density.hpp"
#include "divstab/normexpr.hpp"
#include "divstab/vectorfield.hpp"

namespace divstab {

class UnsupportedInverse : public std::invalid_argument {
 public:
  UnsupportedInverse()
      : std::invalid_argument(
            "div{rho^-1 f} is not a polynomial expression for an explicit "
            "density; use the cleared form rho*div f - grad rho . f") {}
};

// div{rho f} (inverse = false) or div{rho^-1 f} (inverse = true) as a
// weighted expression, exact away from the origin.
//
// For rho = w^alpha (w = |x|^2 or x^T P x):
//   div{rho f}    = w^(alpha-1) * [ 2 alpha (Px . f) + w div f ]
//   div{rho^-1 f} = w^(-alpha-1) * [ -2 alpha (Px . f) + w div f ]
// with P = I in the norm-power case.
//
// For an explicit polynomial rho, inverse = false yields the plain product
// rule grad rho . f + rho div f as a part-0 expression; inverse = true
// throws UnsupportedInverse.
NormExpr div_rho_f(const VectorField& f, const DensitySpec& rho, bool inverse);

// grad rho . f as a weighted expression (single part for the power
// families, part 0 for explicit densities).
NormExpr grad_rho_dot_f(const VectorField& f, const DensitySpec& rho);

// rho^2 div{rho^-1 f} = rho div f - grad rho . f, which is a polynomial for
// any polynomial rho. Instability conditions on explicit densities reduce
// to sign questions on this form.
Polynomial rho2_div_rho_inv_f(const VectorField& f, const Polynomial& rho);

// grad rho . f for an explicit polynomial rho.
Polynomial grad_dot_f(const Polynomial& rho, const VectorField& f);

}  // namespace divstab
