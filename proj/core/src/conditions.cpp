#include "divstab/conditions.hpp"

#include <sstream>

#include "divstab/rng.hpp"

namespace divstab {

std::string overall_to_string(Overall o) {
  switch (o) {
    case Overall::Holds: return "Holds";
    case Overall::Fails: return "Fails";
    case Overall::Undetermined: return "Undetermined";
  }
  return "";
}

bool origin_limit_is_zero(const NormExpr& e) {
  return e.normalized().origin_degree() > 0;
}

std::vector<OriginObligation> check_origin_limits(
    const std::vector<NormExpr>& exprs) {
  std::vector<OriginObligation> out;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    OriginObligation ob;
    ob.name = "limit " + std::to_string(i);
    int d = exprs[i].normalized().origin_degree();
    ob.min_degree = d;
    ob.holds = d > 0;
    out.push_back(std::move(ob));
  }
  return out;
}

namespace {

// Cleared polynomial: a normalized single-part expression reduces to its
// part polynomial (the weight is positive away from 0), otherwise multiply
// out the weight powers.
Polynomial cleared_form(const NormExpr& e) {
  NormExpr n = e.normalized();
  if (n.parts().size() == 1) return n.parts().begin()->second;
  return n.clear_denominator().poly;
}

Clause make_clause(std::string name, NormExpr expr, SignReq req,
                   std::string region_desc) {
  Polynomial cleared = cleared_form(expr);
  return Clause(std::move(name), std::move(expr), std::move(cleared), req,
                std::move(region_desc));
}

OriginObligation obligation_from_expr(std::string name, const NormExpr& e) {
  OriginObligation ob;
  ob.name = std::move(name);
  ob.min_degree = e.normalized().origin_degree();
  ob.holds = ob.min_degree > 0;
  return ob;
}

// Statement-form limit lim rho div{rho^-1 f} for an explicit density:
// decidable by degree arithmetic when rho is a positive definite quadratic
// form (rho scales like |x|^2 near the origin).
OriginObligation explicit_statement_limit(const Polynomial& numerator,
                                          const Polynomial& rho) {
  OriginObligation ob;
  ob.name = "lim rho div{rho^-1 f} (statement form)";
  auto gram = rho.quadratic_form_matrix();
  if (gram && SymMatrixQ::from_rows(*gram).is_positive_definite()) {
    ob.min_degree = numerator.low_total_degree() - 2;
    ob.holds = ob.min_degree > 0;
  } else {
    ob.holds = false;
    ob.note = "undecided for a non-quadratic explicit density";
  }
  return ob;
}

}  // namespace

std::vector<Clause> build_stability_condition(
    const VectorField& f, const DensitySpec& rho, const ConditionSpec& spec,
    std::vector<OriginObligation>* obligations,
    std::vector<OriginObligation>* advisory) {
  if (!f.equilibrium_at_origin()) throw NonEquilibrium();
  if (!rho.positive_definite()) throw IndefiniteDensityForStability();
  if (spec.case_id < 1 || spec.case_id > 4) {
    throw std::invalid_argument("case_id must be in 1..4");
  }
  if (spec.case_id == 3 && spec.beta < 1) {
    throw std::invalid_argument("beta must be >= 1");
  }

  const std::string domain = "D \\ {0}";
  std::vector<Clause> clauses;
  std::vector<OriginObligation> obs;
  Polynomial divf = f.divergence();

  if (rho.kind() == DensitySpec::Kind::Explicit) {
    // Polynomial reductions: rho^2 div{rho^-1 f} = rho div f - grad rho . f.
    const Polynomial& r = rho.explicit_poly();
    Polynomial g = grad_dot_f(r, f);
    Polynomial inv2 = rho2_div_rho_inv_f(f, r);
    Polynomial drhof = g + r * divf;
    switch (spec.case_id) {
      case 1:
        clauses.push_back(make_clause("div{rho f} - rho div f",
                                      NormExpr::from_polynomial(g), SignReq::LE,
                                      domain));
        obs.push_back(obligation_from_expr(
            "div{rho f} at origin", NormExpr::from_polynomial(drhof)));
        break;
      case 2:
        clauses.push_back(make_clause("rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(inv2),
                                      SignReq::GE, domain));
        clauses.push_back(make_clause("div f",
                                      NormExpr::from_polynomial(divf),
                                      SignReq::LE, domain));
        obs.push_back(obligation_from_expr(
            "lim rho^2 div{rho^-1 f}", NormExpr::from_polynomial(inv2)));
        break;
      case 3: {
        Polynomial expr3 =
            g * (Rational(1) + spec.beta) + r * divf * (Rational(1) - spec.beta);
        clauses.push_back(make_clause("div{rho f} - beta rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(expr3),
                                      SignReq::LE, domain));
        if (spec.beta > 1) {
          clauses.push_back(make_clause("div f",
                                        NormExpr::from_polynomial(divf),
                                        SignReq::LE, domain));
        }
        obs.push_back(obligation_from_expr(
            "div{rho f} at origin", NormExpr::from_polynomial(drhof)));
        obs.push_back(obligation_from_expr(
            "lim rho^2 div{rho^-1 f}", NormExpr::from_polynomial(inv2)));
        if (advisory) advisory->push_back(explicit_statement_limit(inv2, r));
        break;
      }
      case 4:
        clauses.push_back(make_clause("div{rho f}",
                                      NormExpr::from_polynomial(drhof),
                                      SignReq::LE, domain));
        clauses.push_back(make_clause("rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(inv2),
                                      SignReq::GE, domain));
        obs.push_back(obligation_from_expr(
            "div{rho f} at origin", NormExpr::from_polynomial(drhof)));
        obs.push_back(obligation_from_expr(
            "lim rho^2 div{rho^-1 f}", NormExpr::from_polynomial(inv2)));
        if (advisory) advisory->push_back(explicit_statement_limit(inv2, r));
        break;
    }
    if (obligations) *obligations = std::move(obs);
    return clauses;
  }

  int alpha = rho.alpha();
  NormExpr e_rho = div_rho_f(f, rho, false);
  NormExpr e_inv = div_rho_f(f, rho, true);
  NormExpr g = grad_rho_dot_f(f, rho);

  switch (spec.case_id) {
    case 1:
      clauses.push_back(
          make_clause("div{rho f} - rho div f", g, SignReq::LE, domain));
      obs.push_back(obligation_from_expr("div{rho f} at origin", e_rho));
      break;
    case 2:
      clauses.push_back(
          make_clause("div{rho^-1 f}", e_inv, SignReq::GE, domain));
      clauses.push_back(make_clause(
          "div f", NormExpr::single(0, divf, rho.weight()), SignReq::LE,
          domain));
      obs.push_back(obligation_from_expr("lim rho^2 div{rho^-1 f}",
                                         e_inv.shifted(2 * alpha)));
      break;
    case 3: {
      NormExpr expr3 = e_rho - e_inv.shifted(2 * alpha) * spec.beta;
      clauses.push_back(make_clause("div{rho f} - beta rho^2 div{rho^-1 f}",
                                    expr3, SignReq::LE, domain));
      if (spec.beta > 1) {
        clauses.push_back(make_clause(
            "div f", NormExpr::single(0, divf, rho.weight()), SignReq::LE,
            domain));
      }
      obs.push_back(obligation_from_expr("div{rho f} at origin", e_rho));
      obs.push_back(obligation_from_expr("lim rho^2 div{rho^-1 f}",
                                         e_inv.shifted(2 * alpha)));
      if (advisory) {
        advisory->push_back(
            obligation_from_expr("lim rho div{rho^-1 f} (statement form)",
                                 e_inv.shifted(alpha)));
      }
      break;
    }
    case 4:
      clauses.push_back(make_clause("div{rho f}", e_rho, SignReq::LE, domain));
      clauses.push_back(
          make_clause("div{rho^-1 f}", e_inv, SignReq::GE, domain));
      obs.push_back(obligation_from_expr("div{rho f} at origin", e_rho));
      obs.push_back(obligation_from_expr("lim rho^2 div{rho^-1 f}",
                                         e_inv.shifted(2 * alpha)));
      if (advisory) {
        advisory->push_back(
            obligation_from_expr("lim rho div{rho^-1 f} (statement form)",
                                 e_inv.shifted(alpha)));
      }
      break;
  }
  if (obligations) *obligations = std::move(obs);
  return clauses;
}

std::vector<Clause> build_instability_condition(const VectorField& f,
                                                const InstabilityRegion& region,
                                                const ConditionSpec& spec,
                                                std::string* note) {
  if (spec.case_id < 1 || spec.case_id > 4) {
    throw std::invalid_argument("case_id must be in 1..4");
  }
  if (region.r <= 0) throw std::invalid_argument("ball radius must be > 0");
  Polynomial rho_poly = region.rho.as_polynomial();
  if (rho_poly.constant_term() != 0) throw RhoNotZeroAtOrigin();

  std::ostringstream rdesc;
  rdesc << "U(r=" << region.r << ")";
  const std::string domain = rdesc.str();

  Polynomial divf = f.divergence();
  if (note && divf.is_zero() && spec.case_id == 2) {
    *note =
        "div f vanishes identically; the non-strict clause div f >= 0 is "
        "granted, the strict variant would not be";
  }

  std::vector<Clause> clauses;
  if (region.rho.kind() == DensitySpec::Kind::Explicit) {
    const Polynomial& r = region.rho.explicit_poly();
    Polynomial g = grad_dot_f(r, f);
    Polynomial inv2 = rho2_div_rho_inv_f(f, r);  // sign of div{rho^-1 f} on U
    Polynomial drhof = g + r * divf;
    switch (spec.case_id) {
      case 1:
        clauses.push_back(make_clause("div{rho f} - rho div f",
                                      NormExpr::from_polynomial(g), SignReq::GT,
                                      domain));
        break;
      case 2:
        clauses.push_back(make_clause("rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(inv2),
                                      SignReq::LT, domain));
        clauses.push_back(make_clause("div f",
                                      NormExpr::from_polynomial(divf),
                                      SignReq::GE, domain));
        break;
      case 3: {
        Polynomial expr3 =
            g * (Rational(1) + spec.beta) + r * divf * (Rational(1) - spec.beta);
        clauses.push_back(make_clause("div{rho f} - beta rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(expr3),
                                      SignReq::GT, domain));
        if (spec.beta > 1) {
          clauses.push_back(make_clause("div f",
                                        NormExpr::from_polynomial(divf),
                                        SignReq::GE, domain));
        }
        break;
      }
      case 4:
        clauses.push_back(make_clause("div{rho f}",
                                      NormExpr::from_polynomial(drhof),
                                      SignReq::GT, domain));
        clauses.push_back(make_clause("rho^2 div{rho^-1 f}",
                                      NormExpr::from_polynomial(inv2),
                                      SignReq::LT, domain));
        break;
    }
    return clauses;
  }

  // Power densities vanish only at the origin, so U is the punctured ball.
  int alpha = region.rho.alpha();
  NormExpr e_rho = div_rho_f(f, region.rho, false);
  NormExpr e_inv = div_rho_f(f, region.rho, true);
  NormExpr g = grad_rho_dot_f(f, region.rho);
  switch (spec.case_id) {
    case 1:
      clauses.push_back(
          make_clause("div{rho f} - rho div f", g, SignReq::GT, domain));
      break;
    case 2:
      clauses.push_back(
          make_clause("div{rho^-1 f}", e_inv, SignReq::LT, domain));
      clauses.push_back(make_clause(
          "div f", NormExpr::single(0, divf, region.rho.weight()), SignReq::GE,
          domain));
      break;
    case 3: {
      NormExpr expr3 = e_rho - e_inv.shifted(2 * alpha) * spec.beta;
      clauses.push_back(make_clause("div{rho f} - beta rho^2 div{rho^-1 f}",
                                    expr3, SignReq::GT, domain));
      if (spec.beta > 1) {
        clauses.push_back(make_clause(
            "div f", NormExpr::single(0, divf, region.rho.weight()),
            SignReq::GE, domain));
      }
      break;
    }
    case 4:
      clauses.push_back(make_clause("div{rho f}", e_rho, SignReq::GT, domain));
      clauses.push_back(
          make_clause("div{rho^-1 f}", e_inv, SignReq::LT, domain));
      break;
  }
  return clauses;
}

namespace {

void evaluate_clauses(std::vector<Clause>& clauses, const Region& region,
                      const AnalysisOptions& opts, bool enforce_strict) {
  for (Clause& c : clauses) {
    c.verdict = check_sign(c.cleared, c.required, region, opts.check);
    if (enforce_strict && sign_req_is_strict(c.required) &&
        c.verdict.proven() && !c.verdict.strict_on_region) {
      // Only a non-strict sign was certified; for the instability clauses
      // that is not enough.
      SignVerdict v;
      v.status = SignVerdict::Status::Undetermined;
      v.zero_set = c.verdict.zero_set;
      v.note = "only the non-strict sign was proven";
      c.verdict = v;
    }
  }
}

void roll_up(ConditionReport& rep, int nvars) {
  bool all_proven = true;
  bool any_refuted = false;
  bool all_strict = true;
  for (const Clause& c : rep.clauses) {
    if (c.verdict.refuted()) any_refuted = true;
    if (!c.verdict.proven()) {
      all_proven = false;
      all_strict = false;
      continue;
    }
    if (!c.verdict.strict_on_region) {
      all_strict = false;
      if (!c.verdict.zero_set.subset_of_origin(nvars)) {
        rep.exceptional_set =
            ZeroSetDesc::unite(rep.exceptional_set, c.verdict.zero_set);
      }
    }
  }
  bool obligations_ok = true;
  for (const auto& ob : rep.origin_checks) obligations_ok &= ob.holds;

  if (any_refuted || !obligations_ok) {
    rep.overall = Overall::Fails;
  } else if (all_proven) {
    rep.overall = Overall::Holds;
  } else if (rep.empirical) {
    rep.overall = Overall::Holds;  // on samples only; flag recorded
  } else {
    rep.overall = Overall::Undetermined;
  }
  rep.asymptotic = rep.overall == Overall::Holds && all_strict && !rep.empirical;
}

}  // namespace

bool ConditionReport::advisory_ok() const {
  for (const auto& ob : advisory_checks) {
    if (!ob.holds) return false;
  }
  return true;
}

int ConditionReport::grade() const {
  if (overall != Overall::Holds || empirical) return 0;
  if (asymptotic) return 3;
  for (const Clause& c : clauses) {
    if (c.cleared.is_zero()) return 1;
  }
  bool whole_space = false;
  for (const auto& comp : exceptional_set.components) {
    if (comp.empty()) whole_space = true;
  }
  return whole_space ? 1 : 2;
}

std::string ConditionReport::verdict_text(
    const std::vector<std::string>& vars) const {
  std::ostringstream out;
  out << overall_to_string(overall);
  if (overall == Overall::Holds) {
    bool degenerate = false;
    for (const auto& comp : exceptional_set.components) {
      if (comp.empty()) degenerate = true;
    }
    if (empirical) {
      out << " (on samples only)";
    } else if (asymptotic) {
      out << " (strict on the whole domain)";
    } else if (degenerate) {
      out << " (non-strict: a clause vanishes identically)";
    } else if (!exceptional_set.empty()) {
      out << " (strict except on " << exceptional_set.describe(vars) << ")";
    } else {
      out << " (non-strict)";
    }
  }
  return out.str();
}

ConditionReport evaluate_stability(const VectorField& f,
                                   const DensitySpec& rho,
                                   const ConditionSpec& spec,
                                   const AnalysisOptions& opts) {
  ConditionReport rep;
  rep.spec = spec;
  rep.alpha = rho.kind() == DensitySpec::Kind::Explicit ? 0 : rho.alpha();
  rep.empirical = opts.empirical;
  rep.clauses = build_stability_condition(f, rho, spec, &rep.origin_checks,
                                          &rep.advisory_checks);
  evaluate_clauses(rep.clauses, Region::ball(opts.region_radius), opts,
                   /*enforce_strict=*/false);
  roll_up(rep, f.dim());
  return rep;
}

ConditionReport evaluate_instability(const VectorField& f,
                                     const InstabilityRegion& region,
                                     const ConditionSpec& spec,
                                     const AnalysisOptions& opts) {
  ConditionReport rep;
  rep.spec = spec;
  rep.spec.theorem = ConditionSpec::Theorem::Instability;
  rep.alpha = region.rho.kind() == DensitySpec::Kind::Explicit
                  ? 0
                  : region.rho.alpha();
  rep.empirical = opts.empirical;
  rep.clauses = build_instability_condition(f, region, rep.spec, &rep.note);

  Region sign_region =
      region.rho.kind() == DensitySpec::Kind::Explicit
          ? Region::u_set(region.rho.explicit_poly(), region.r)
          : Region::ball(region.r);

  if (sign_region.kind == Region::Kind::USet) {
    // U must contain points arbitrarily close to the origin.
    bool found = false;
    CompiledPoly crho = CompiledPoly::compile(*sign_region.u_rho);
    for (std::uint64_t i = 0; i < 4096 && !found; ++i) {
      SampleRng rng = SampleRng::for_index(opts.check.seed, i);
      std::vector<double> x = rng.ball_point(f.dim(), region.r / 10.0);
      found = crho.eval(x.data()) > 0.0;
    }
    if (!found) throw EmptyU();
  }

  evaluate_clauses(rep.clauses, sign_region, opts, /*enforce_strict=*/true);
  roll_up(rep, f.dim());
  return rep;
}

ConditionReport rantzer_baseline(const VectorField& f, const DensitySpec& rho,
                                 const AnalysisOptions& opts) {
  if (!f.equilibrium_at_origin()) throw NonEquilibrium();
  if (!rho.positive_definite()) throw IndefiniteDensityForStability();
  ConditionReport rep;
  rep.spec.theorem = ConditionSpec::Theorem::Stability;
  rep.spec.case_id = 0;
  rep.alpha = rho.kind() == DensitySpec::Kind::Explicit ? 0 : rho.alpha();
  rep.note = "integrability of div{rho^-1 f} is assumed, not decided";
  NormExpr e_inv = rho.kind() == DensitySpec::Kind::Explicit
                       ? NormExpr::from_polynomial(rho2_div_rho_inv_f(
                             f, rho.explicit_poly()))
                       : div_rho_f(f, rho, true);
  rep.clauses.push_back(
      make_clause("div{rho^-1 f}", e_inv, SignReq::GT, "D \\ {0}"));
  evaluate_clauses(rep.clauses, Region::ball(opts.region_radius), opts,
                   /*enforce_strict=*/false);
  roll_up(rep, f.dim());
  return rep;
}

}  // namespace divstab
