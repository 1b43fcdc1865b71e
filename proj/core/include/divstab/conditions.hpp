#pragma once

#include "divstab/density.hpp"
#include "divstab/fieldops.hpp"
#include "divstab/signcheck.hpp"

namespace divstab {

class NonEquilibrium : public std::invalid_argument {
 public:
  NonEquilibrium()
      : std::invalid_argument("vector field does not vanish at the origin") {}
};

class RhoNotZeroAtOrigin : public std::invalid_argument {
 public:
  RhoNotZeroAtOrigin()
      : std::invalid_argument(
            "instability density must vanish at the origin") {}
};

struct ConditionSpec {
  enum class Theorem { Stability, Instability, Control };
  Theorem theorem = Theorem::Stability;
  int case_id = 1;          // 1..4
  Rational beta = 1;        // case 3 only, constant >= 1
  bool strict = true;       // asymptotic stability requested
};

// Ball B of radius r with the Chetaev-type set U = {x in B : rho(x) > 0}.
struct InstabilityRegion {
  double r = 1.0;
  DensitySpec rho = DensitySpec::norm_power(1, 1);
};

struct Clause {
  Clause(std::string name, NormExpr expr, Polynomial cleared, SignReq required,
         std::string region_desc)
      : name(std::move(name)),
        expr(std::move(expr)),
        cleared(std::move(cleared)),
        required(required),
        region_desc(std::move(region_desc)) {}

  std::string name;
  NormExpr expr;        // weighted expression whose sign is required
  Polynomial cleared;   // polynomial with the same sign away from 0
  SignReq required = SignReq::LE;
  std::string region_desc;
  SignVerdict verdict;
};

// Origin-limit obligation, decided exactly by degree arithmetic on the
// normalized expression: limit is zero iff min over parts of
// (2m + low degree of p_m) is positive.
struct OriginObligation {
  std::string name;
  int min_degree = 0;
  bool holds = false;
  std::string note;
};

enum class Overall { Holds, Fails, Undetermined };

std::string overall_to_string(Overall o);

struct ConditionReport {
  ConditionSpec spec;
  int alpha = 0;  // density power (0 for explicit densities)
  std::vector<Clause> clauses;
  std::vector<OriginObligation> origin_checks;
  // Cases 3-4 print their origin limit with weight rho but prove it with
  // rho^2; the rho^2 form decides the verdict, the statement form is
  // recorded here and only influences ranking (synthesis).
  std::vector<OriginObligation> advisory_checks;
  Overall overall = Overall::Undetermined;
  bool empirical = false;  // Holds granted on unrefuted samples only
  // Union of the zero sets on which proven clauses are non-strict; the
  // asymptotic verdict holds away from this set.
  ZeroSetDesc exceptional_set;
  bool asymptotic = false;
  std::string note;

  // Ordering used by control synthesis: 3 asymptotic everywhere,
  // 2 asymptotic off an exceptional set, 1 holds non-strictly only,
  // 0 otherwise.
  int grade() const;
  bool advisory_ok() const;
  std::string verdict_text(const std::vector<std::string>& vars) const;
};

struct AnalysisOptions {
  CheckOptions check;
  double region_radius = 1.0;  // sampling domain D for stability clauses
  bool empirical = false;
};

// Clause construction alone (no sign checking); exposed for tests and for
// report tooling.
std::vector<Clause> build_stability_condition(
    const VectorField& f, const DensitySpec& rho, const ConditionSpec& spec,
    std::vector<OriginObligation>* obligations,
    std::vector<OriginObligation>* advisory = nullptr);

std::vector<Clause> build_instability_condition(const VectorField& f,
                                                const InstabilityRegion& region,
                                                const ConditionSpec& spec,
                                                std::string* note);

ConditionReport evaluate_stability(const VectorField& f,
                                   const DensitySpec& rho,
                                   const ConditionSpec& spec,
                                   const AnalysisOptions& opts);

ConditionReport evaluate_instability(const VectorField& f,
                                     const InstabilityRegion& region,
                                     const ConditionSpec& spec,
                                     const AnalysisOptions& opts);

// div{rho^-1 f} > 0 on D \ {0}; integrability is recorded as an assumption,
// not decided.
ConditionReport rantzer_baseline(const VectorField& f, const DensitySpec& rho,
                                 const AnalysisOptions& opts);

// True iff the expression's value (or limit) at the origin is zero.
bool origin_limit_is_zero(const NormExpr& e);
std::vector<OriginObligation> check_origin_limits(
    const std::vector<NormExpr>& exprs);

}  // namespace divstab
