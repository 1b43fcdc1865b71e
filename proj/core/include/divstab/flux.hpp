#pragma once

#include <cstdint>

#include "divstab/density.hpp"
#include "divstab/normexpr.hpp"
#include "divstab/vectorfield.hpp"

namespace divstab {

class NonIntegrableNearOrigin : public std::runtime_error {
 public:
  NonIntegrableNearOrigin()
      : std::runtime_error(
            "integrand diverges too fast at the origin to be integrable") {}
};

// Sublevel-set region V = {S(x) <= C} with S = |x|^2 or S = x^T P x
// (P positive definite); the boundary {S = C} carries the surface flux.
struct RegionSpec {
  enum class Kind { NormSq, QuadForm };
  Kind kind = Kind::NormSq;
  double C = 1.0;
  SymMatrixQ P;  // QuadForm only

  static RegionSpec norm_sq(double C) { return RegionSpec{Kind::NormSq, C, {}}; }
  static RegionSpec quad_form(SymMatrixQ P, double C);
};

struct IntegralEstimate {
  enum class Sign { Negative, Positive, Inconclusive };
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  Sign sign = Sign::Inconclusive;
  bool origin_excluded = false;  // ball of radius 1e-6 removed
  std::string note;

  std::string sign_string() const;
};

struct FluxOptions {
  std::uint64_t n = 100000;
  std::uint64_t seed = 0;
  int workers = 0;
};

// Monte-Carlo estimate of the integral of g over V (uniform ball sampling;
// ellipsoids via the affine image with its determinant factor). Expressions
// with negative weight powers are admitted only when degree arithmetic
// shows integrability; the origin is then excluded on a ball of radius 1e-6
// and the exclusion reported.
IntegralEstimate volume_integral(const NormExpr& g, const RegionSpec& region,
                                 const FluxOptions& opts);

// Monte-Carlo estimate of the flux of rho * f through the boundary
// {S = C}, i.e. the surface integral of rho (f . grad S)/|grad S|. By the
// divergence theorem this matches volume_integral of div{rho f}.
IntegralEstimate surface_flux(const VectorField& f, const DensitySpec& rho,
                              const RegionSpec& region,
                              const FluxOptions& opts);

// Integral over the truncated exterior shell {1/C <= S <= r_out_factor/C}
// used by the inverse-density condition; the truncation is reported.
IntegralEstimate shell_integral(const NormExpr& g, const RegionSpec& region,
                                double r_out_factor, const FluxOptions& opts);

}  // namespace divstab
