#include "divstab/invariantset.hpp"

namespace divstab {

std::string ExclusionVerdict::kind_string() const {
  switch (kind) {
    case Kind::ExcludedNegative: return "Excluded(Negative)";
    case Kind::ExcludedPositive: return "Excluded(Positive)";
    case Kind::Inapplicable: return "Inapplicable";
    case Kind::Undetermined: return "Undetermined";
  }
  return "";
}

namespace {

ExclusionVerdict decide(Polynomial q, double ball_radius,
                        const CheckOptions& opts) {
  ExclusionVerdict v;
  v.tested = q;
  if (q.is_zero()) {
    v.kind = ExclusionVerdict::Kind::Inapplicable;
    v.reason = "the tested divergence vanishes identically";
    return v;
  }
  Region region = Region::ball(ball_radius);
  SignVerdict neg = check_sign(q, SignReq::LE, region, opts);
  if (neg.proven()) {
    // q is not identically zero, so its zero locus is a proper algebraic
    // subset and has measure zero.
    v.kind = ExclusionVerdict::Kind::ExcludedNegative;
    v.sign = neg;
    return v;
  }
  SignVerdict pos = check_sign(q, SignReq::GE, region, opts);
  if (pos.proven()) {
    v.kind = ExclusionVerdict::Kind::ExcludedPositive;
    v.sign = pos;
    return v;
  }
  v.kind = ExclusionVerdict::Kind::Undetermined;
  v.sign = neg.refuted() ? neg : pos;
  if (neg.refuted() && pos.refuted()) {
    v.reason = "the divergence changes sign (witnesses found both ways)";
  } else {
    v.reason = "no exact sign certificate; sampling cannot grant exclusion";
  }
  return v;
}

}  // namespace

ExclusionVerdict bendixson_check(const VectorField& f, double ball_radius,
                                 const CheckOptions& opts) {
  return decide(f.divergence(), ball_radius, opts);
}

ExclusionVerdict dulac_check(const VectorField& f, const DensitySpec& rho,
                             double ball_radius, const CheckOptions& opts) {
  NormExpr e = div_rho_f(f, rho, false);
  NormExpr n = e.normalized();
  Polynomial q = n.parts().size() == 1 ? n.parts().begin()->second
                                       : n.clear_denominator().poly;
  return decide(std::move(q), ball_radius, opts);
}

}  // namespace divstab
