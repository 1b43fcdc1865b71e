#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/invariantset.hpp>

#include "test_systems.hpp"

using namespace divstab;
using namespace testsys;

namespace {
CheckOptions opts() {
  CheckOptions o;
  o.seed = 0;
  return o;
}
}  // namespace

TEST_CASE("damped rotation is excluded through its plain divergence") {
  ExclusionVerdict v = bendixson_check(rot3(), 1.0, opts());
  CHECK(v.kind == ExclusionVerdict::Kind::ExcludedNegative);
  CHECK(v.sign.zero_set.describe(kVars3) == "{x3=0}");
}

TEST_CASE("classical planar case: damped oscillator excluded, harmonic not") {
  ExclusionVerdict damped = bendixson_check(damped2(), 1.0, opts());
  CHECK(damped.kind == ExclusionVerdict::Kind::ExcludedNegative);

  ExclusionVerdict harmonic = bendixson_check(harmonic2(), 1.0, opts());
  CHECK(harmonic.kind == ExclusionVerdict::Kind::Inapplicable);
}

TEST_CASE("weighted divergence: damped rotation with the cubic norm power") {
  ExclusionVerdict v =
      dulac_check(rot3(), DensitySpec::norm_power(3, 3), 1.0, opts());
  CHECK(v.kind == ExclusionVerdict::Kind::ExcludedNegative);
  CHECK(v.tested == P3("-22*x3^2"));
}

TEST_CASE("weighted divergence strengthens the certificate for a spiral") {
  // f = -x + rotation: div f = -2 excludes already; the weighted form
  // agrees and its zero locus is just the origin.
  VectorField f(kVars2, {P2("-x1 + x2"), P2("-x2 - x1")});
  ExclusionVerdict plain = bendixson_check(f, 1.0, opts());
  CHECK(plain.kind == ExclusionVerdict::Kind::ExcludedNegative);
  ExclusionVerdict weighted =
      dulac_check(f, DensitySpec::norm_power(2, 1), 1.0, opts());
  CHECK(weighted.kind == ExclusionVerdict::Kind::ExcludedNegative);
  // div{rho f} = -4 |x|^2; the positive weight factor is reduced away.
  CHECK(weighted.tested == P2("-4"));
}

TEST_CASE("a unit explicit density reduces to the plain check verbatim") {
  std::vector<VectorField> corpus{rot3(), twoeq3(), quartic3(), harmonic2(),
                                  damped2(), saddle2()};
  for (const auto& f : corpus) {
    DensitySpec one = DensitySpec::explicit_density(
        Polynomial::constant(f.dim(), 1), true);
    ExclusionVerdict a = bendixson_check(f, 1.0, opts());
    ExclusionVerdict b = dulac_check(f, one, 1.0, opts());
    CHECK(a.kind == b.kind);
    CHECK(a.tested == b.tested);
  }
}

TEST_CASE("the harmonic oscillator is never excluded by any corpus density") {
  VectorField f = harmonic2();
  for (int a = 1; a <= 8; ++a) {
    ExclusionVerdict v =
        dulac_check(f, DensitySpec::norm_power(2, a), 1.0, opts());
    CHECK(v.kind == ExclusionVerdict::Kind::Inapplicable);
  }
  std::vector<std::vector<Rational>> rows{{Rational(1), Rational(0)},
                                          {Rational(0), Rational(2)}};
  ExclusionVerdict v = dulac_check(
      f, DensitySpec::quad_form_power(SymMatrixQ::from_rows(rows), 1), 1.0,
      opts());
  CHECK(!v.excluded());
}

TEST_CASE("sign-changing divergence stays undetermined with witnesses") {
  ExclusionVerdict v = bendixson_check(quartic3(), 1.0, opts());
  CHECK(v.kind == ExclusionVerdict::Kind::Undetermined);
  CHECK(v.sign.refuted());
}
