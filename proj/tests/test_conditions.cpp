#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/conditions.hpp>
#include <divstab/linstab.hpp>
#include <divstab/rng.hpp>

#include "test_systems.hpp"

using namespace divstab;
using namespace testsys;

namespace {

AnalysisOptions opts(std::uint64_t seed = 0) {
  AnalysisOptions o;
  o.check.seed = seed;
  return o;
}

ConditionSpec stab(int case_id, Rational beta = 1) {
  ConditionSpec s;
  s.case_id = case_id;
  s.beta = beta;
  return s;
}

ConditionReport run_stab(const VectorField& f, int alpha, int case_id,
                         Rational beta = 1) {
  return evaluate_stability(f, DensitySpec::norm_power(f.dim(), alpha),
                            stab(case_id, beta), opts());
}

}  // namespace

TEST_CASE("damped rotation: case 1 holds for every alpha with zero set {x3=0}") {
  VectorField f = rot3();
  for (int a = 1; a <= 8; ++a) {
    ConditionReport rep = run_stab(f, a, 1);
    CHECK(rep.overall == Overall::Holds);
    CHECK(!rep.asymptotic);
    CHECK(rep.exceptional_set.describe(kVars3) == "{x3=0}");
    // the case-1 expression is exactly grad{rho}.f
    Polynomial want =
        P3("-" + std::to_string(4 * a) + "*x3^2") *
        NormExpr::norm_sq_weight(3).pow(a);
    NormExpr g = grad_rho_dot_f(f, DensitySpec::norm_power(3, a));
    CHECK(g.clear_denominator().poly == want);
  }
}

TEST_CASE("damped rotation: cases 2 and 4 switch on at alpha = 3") {
  VectorField f = rot3();
  for (int a = 1; a <= 8; ++a) {
    ConditionReport c2 = run_stab(f, a, 2);
    ConditionReport c4 = run_stab(f, a, 4);
    if (a >= 3) {
      CHECK(c2.overall == Overall::Holds);
      CHECK(c4.overall == Overall::Holds);
    } else {
      CHECK(c2.overall == Overall::Fails);
      CHECK(c4.overall == Overall::Fails);
    }
  }
}

TEST_CASE("damped rotation: case 3 with constant beta matches the threshold") {
  VectorField f = rot3();
  // alpha > 5(beta-1)/(2(beta+1)); for beta = 4 that is alpha > 1.5.
  for (int a = 1; a <= 4; ++a) {
    ConditionReport rep = run_stab(f, a, 3, Rational(4));
    if (a >= 2) {
      CHECK(rep.overall == Overall::Holds);
    } else {
      CHECK(rep.overall == Overall::Fails);
    }
  }
  // beta = 1 holds for every alpha.
  for (int a = 1; a <= 8; ++a) {
    CHECK(run_stab(f, a, 3).overall == Overall::Holds);
  }
}

TEST_CASE("two-equilibria system: baseline holds, no theorem case does") {
  VectorField f = twoeq3();
  DensitySpec rho = DensitySpec::norm_power(3, 3);

  ConditionReport rz = rantzer_baseline(f, rho, opts());
  CHECK(rz.overall == Overall::Holds);
  CHECK(rz.asymptotic);  // the bracket is the constant 3

  ConditionReport c1 = run_stab(f, 3, 1);
  CHECK(c1.overall == Overall::Undetermined);

  ConditionReport c2 = run_stab(f, 3, 2);
  REQUIRE(c2.overall == Overall::Fails);
  bool divf_witness_found = false;
  for (const auto& c : c2.clauses) {
    if (c.name == "div f" && c.verdict.refuted()) {
      divf_witness_found = true;
      CHECK(c.verdict.witness[0] > Rational(1, 2));
    }
  }
  CHECK(divf_witness_found);

  ConditionReport c3 = run_stab(f, 3, 3);
  CHECK(c3.overall == Overall::Undetermined);
  for (const auto& ob : c3.origin_checks) CHECK(ob.holds);

  ConditionReport c4 = run_stab(f, 3, 4);
  REQUIRE(c4.overall == Overall::Fails);
  for (const auto& c : c4.clauses) {
    if (c.verdict.refuted()) CHECK(c.verdict.witness[0] > Rational(1, 2));
  }
}

TEST_CASE("quartic system: case 3 (beta=1) is asymptotic for every alpha") {
  VectorField f = quartic3();
  for (int a = 1; a <= 8; ++a) {
    ConditionReport rep = run_stab(f, a, 3);
    CHECK(rep.overall == Overall::Holds);
    CHECK(rep.asymptotic);
    CHECK(rep.grade() == 3);
  }
}

TEST_CASE("quartic system: case 2 fails on the indefinite divergence") {
  ConditionReport rep = run_stab(quartic3(), 3, 2);
  CHECK(rep.overall == Overall::Fails);
}

TEST_CASE("quartic system: the case-4 pair first holds at alpha = 8") {
  VectorField f = quartic3();
  for (int a = 6; a <= 8; ++a) {
    ConditionReport rep = run_stab(f, a, 4);
    if (a == 8) {
      CHECK(rep.overall == Overall::Holds);
      CHECK(rep.asymptotic);
    } else {
      CHECK(rep.overall == Overall::Fails);
    }
  }
  // Exact counterexample freezing the alpha=6 refutation: the published
  // inverse bracket evaluates to -1607/625 at (3/5, 3/5, 1).
  DensitySpec rho = DensitySpec::norm_power(3, 6);
  auto [bracket, shift] = div_rho_f(f, rho, true).clear_denominator();
  std::vector<Rational> witness{make_rational(3, 5), make_rational(3, 5),
                                Rational(1)};
  CHECK(shift == 7);
  CHECK(bracket.evaluate(witness) == make_rational(-1607, 625));
}

TEST_CASE("gradient-flow sanity: every case holds for scalar f = -x") {
  const std::vector<std::string> v1{"x1"};
  VectorField f(v1, {parse_polynomial("-x1", v1)});
  for (int c = 1; c <= 4; ++c) {
    ConditionReport rep = run_stab(f, 1, c);
    CHECK(rep.overall == Overall::Holds);
    CHECK(rep.asymptotic);
  }
}

TEST_CASE("origin limit checks decide by degree arithmetic") {
  Polynomial w3 = NormExpr::norm_sq_weight(3);
  // |x|^(2a) (4a-10) x3^2 at a = 3: degree 2a+2 = 8 > 0
  NormExpr e1 = NormExpr::single(3, P3("2*x3^2"), w3);
  CHECK(origin_limit_is_zero(e1));
  // |x|^-2 x1: degree -1, the limit is unbounded
  NormExpr e2 = NormExpr::single(-1, P3("x1"), w3);
  CHECK(!origin_limit_is_zero(e2));
  // identically zero expression
  CHECK(origin_limit_is_zero(NormExpr::zero_norm(3)));

  auto obs = check_origin_limits({e1, e2});
  CHECK(obs[0].holds);
  CHECK(!obs[1].holds);
}

TEST_CASE("stability requires an equilibrium and a definite density") {
  VectorField shifted(kVars2, {P2("1 - x1"), P2("-x2")});
  CHECK_THROWS_AS(run_stab(shifted, 1, 1), NonEquilibrium);
  VectorField f(kVars2, {P2("-x1"), P2("-x2")});
  DensitySpec indef = DensitySpec::explicit_density(P2("x1^2 - x2^2"), false);
  CHECK_THROWS_AS(evaluate_stability(f, indef, stab(1), opts()),
                  IndefiniteDensityForStability);
}

TEST_CASE("instability: saddle with an indefinite density, all four cases") {
  VectorField f = saddle2();
  InstabilityRegion region;
  region.r = 1.0;
  region.rho = DensitySpec::explicit_density(P2("1/2*x1^2 - 1/2*x2^2"), false);
  for (int c = 1; c <= 4; ++c) {
    ConditionSpec spec = stab(c);
    spec.theorem = ConditionSpec::Theorem::Instability;
    ConditionReport rep = evaluate_instability(f, region, spec, opts());
    CHECK(rep.overall == Overall::Holds);
    if (c == 1) {
      REQUIRE(rep.clauses.size() == 1);
      CHECK(rep.clauses[0].expr.clear_denominator().poly ==
            P2("x1^2 + x2^2"));
      CHECK(rep.clauses[0].verdict.proven());
      CHECK(rep.clauses[0].verdict.strict_on_region);
    }
    if (c == 2) CHECK(!rep.note.empty());  // div f vanishes identically
  }
}

TEST_CASE("instability: stable system fails, unstable 1D system proves") {
  const std::vector<std::string> v1{"x1"};
  VectorField stable(v1, {parse_polynomial("-x1", v1)});
  InstabilityRegion region;
  region.rho = DensitySpec::explicit_density(
      parse_polynomial("x1^2", v1), false);
  ConditionSpec spec = stab(1);
  spec.theorem = ConditionSpec::Theorem::Instability;
  ConditionReport rep = evaluate_instability(stable, region, spec, opts());
  CHECK(rep.overall == Overall::Fails);

  VectorField unstable(v1, {parse_polynomial("x1", v1)});
  ConditionReport rep2 = evaluate_instability(unstable, region, spec, opts());
  CHECK(rep2.overall == Overall::Holds);
  CHECK(rep2.clauses[0].verdict.strict_on_region);
}

TEST_CASE("instability preconditions") {
  VectorField f = saddle2();
  InstabilityRegion bad_rho;
  bad_rho.rho = DensitySpec::explicit_density(P2("1 + x1^2"), false);
  ConditionSpec spec = stab(1);
  spec.theorem = ConditionSpec::Theorem::Instability;
  CHECK_THROWS_AS(evaluate_instability(f, bad_rho, spec, opts()),
                  RhoNotZeroAtOrigin);

  InstabilityRegion empty_u;
  empty_u.rho = DensitySpec::explicit_density(P2("-x1^2 - x2^2"), false);
  CHECK_THROWS_AS(evaluate_instability(f, empty_u, spec, opts()), EmptyU);
}

TEST_CASE("linear consistency: P from the Lyapunov solve proves case 3") {
  Eigen::MatrixXd A(2, 2);
  A << 0, 1, -1, -1;
  Eigen::MatrixXd P = lyapunov_solve(A, Eigen::MatrixXd::Identity(2, 2));
  std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) rows[i][j] = rational_from_double(P(i, j));
  }
  VectorField f(kVars2, {P2("x2"), P2("-x1 - x2")});
  // A^T P + P A = -I by construction; the case-3 expression is
  // 2 alpha (1+beta)/2 x^T (A^T P + P A) x weighted by (x^T P x)^(a-1).
  for (int alpha : {1, 2, 3}) {
    DensitySpec rho =
        DensitySpec::quad_form_power(SymMatrixQ::from_rows(rows), alpha);
    ConditionReport rep = evaluate_stability(f, rho, stab(3), opts());
    CHECK(rep.overall == Overall::Holds);
    REQUIRE(rep.clauses[0].verdict.proven());
    Polynomial gram_form(2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Eigen::MatrixXd S = A.transpose() * P + P * A;
        gram_form += Polynomial::variable(2, i) * Polynomial::variable(2, j) *
                     rational_from_double(S(i, j));
      }
    }
    CHECK(rep.clauses[0].cleared == gram_form * Rational(2 * alpha));
  }
}

TEST_CASE("rantzer baseline on the damped rotation") {
  VectorField f = rot3();
  ConditionReport a3 =
      rantzer_baseline(f, DensitySpec::norm_power(3, 3), opts());
  CHECK(a3.overall == Overall::Holds);
  CHECK(a3.exceptional_set.describe(kVars3) == "{x3=0}");
  ConditionReport a2 =
      rantzer_baseline(f, DensitySpec::norm_power(3, 2), opts());
  CHECK(a2.overall == Overall::Fails);  // (4a-10) < 0 at a = 2
}

TEST_CASE("empirical mode grants a flagged Holds on unrefuted samples") {
  // x1 - 1 <= 0 on the unit ball: no exact certificate, no refutation.
  VectorField f(kVars2, {P2("-x1 + x1*x2"), P2("-x2")});
  ConditionReport exact = run_stab(f, 1, 1);
  CHECK(exact.overall == Overall::Undetermined);
  AnalysisOptions eo = opts();
  eo.empirical = true;
  ConditionReport emp = evaluate_stability(
      f, DensitySpec::norm_power(2, 1), stab(1), eo);
  CHECK(emp.overall == Overall::Holds);
  CHECK(emp.empirical);
  CHECK(emp.grade() == 0);  // empirical Holds never feeds synthesis
}
