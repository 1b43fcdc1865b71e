#pragma once

#include "divstab/density.hpp"
#include "divstab/fieldops.hpp"
#include "divstab/signcheck.hpp"

namespace divstab {

// Exclusion of invariant closed subsets of positive measure in a ball:
// a sign-semidefinite (weighted) divergence with a measure-zero zero set
// rules them out. Only the exact sign provers may grant Excluded; sampling
// evidence alone never does.
struct ExclusionVerdict {
  enum class Kind {
    ExcludedNegative,
    ExcludedPositive,
    Inapplicable,
    Undetermined
  };
  Kind kind = Kind::Undetermined;
  SignVerdict sign;      // the certificate (Excluded) or refutations found
  std::string reason;
  Polynomial tested = Polynomial::zero(1);  // the sign-checked polynomial

  bool excluded() const {
    return kind == Kind::ExcludedNegative || kind == Kind::ExcludedPositive;
  }
  std::string kind_string() const;
};

ExclusionVerdict bendixson_check(const VectorField& f, double ball_radius,
                                 const CheckOptions& opts);

ExclusionVerdict dulac_check(const VectorField& f, const DensitySpec& rho,
                             double ball_radius, const CheckOptions& opts);

}  // namespace divstab
