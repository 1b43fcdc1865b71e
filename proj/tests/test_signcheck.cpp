#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/normexpr.hpp>
#include <divstab/rng.hpp>
#include <divstab/signcheck.hpp>

#include "test_systems.hpp"

using namespace divstab;
using namespace testsys;

namespace {
CheckOptions opts(std::uint64_t seed = 0, std::uint64_t samples = 10000) {
  CheckOptions o;
  o.seed = seed;
  o.samples = samples;
  return o;
}
Polynomial W3() { return NormExpr::norm_sq_weight(3); }
}  // namespace

TEST_CASE("even-monomial proof with reported zero set") {
  // -22 x3^2 |x|^6 expanded: all coefficients negative, all exponents even.
  Polynomial q = P3("-22*x3^2") * W3().pow(3);
  SignVerdict v = check_sign(q, SignReq::LE, Region::ball(1.0), opts());
  REQUIRE(v.proven());
  CHECK(v.method == SignVerdict::Method::EvenMonomial);
  CHECK(v.zero_set.describe(kVars3) == "{x3=0}");
  CHECK(!v.strict_on_region);
}

TEST_CASE("indefinite quadratic is refuted both ways with a valid witness") {
  Polynomial q = P3("x1^2 + x2^2 - 11*x3^2");
  for (SignReq req : {SignReq::LE, SignReq::GE}) {
    SignVerdict v = check_sign(q, req, Region::ball(1.0), opts());
    REQUIRE(v.refuted());
    Rational val = q.evaluate(v.witness);
    if (req == SignReq::LE) CHECK(val > 0);
    if (req == SignReq::GE) CHECK(val < 0);
  }
}

TEST_CASE("odd monomial is refuted") {
  Polynomial q = P3("x1*x2");
  SignVerdict v = check_sign(q, SignReq::GE, Region::ball(1.0), opts());
  REQUIRE(v.refuted());
  CHECK(q.evaluate(v.witness) < 0);
}

TEST_CASE("positive constant is proven as a degenerate even-monomial") {
  // bracket (2a-3) + 2 x1 (3-a) collapses to the constant 3 at a = 3
  Polynomial q = P3("3");
  SignVerdict v = check_sign(q, SignReq::GT, Region::ball(1.0), opts());
  REQUIRE(v.proven());
  CHECK(v.method == SignVerdict::Method::EvenMonomial);
  CHECK(v.zero_set.empty());
  CHECK(v.strict_on_region);
}

TEST_CASE("quadratic form proof via Gram eigenvalues") {
  Polynomial q = P3("-x1^2 - 2*x2^2 - x3^2 + x1*x2");
  SignVerdict v = check_sign(q, SignReq::LE, Region::ball(1.0), opts());
  REQUIRE(v.proven());
  CHECK(v.method == SignVerdict::Method::QuadForm);
  CHECK(v.strict_on_region);
}

TEST_CASE("rank-deficient quadratic form reports its kernel as zero set") {
  Polynomial q = P3("-10*x3^2");
  SignVerdict v = check_sign(q, SignReq::LE, Region::ball(1.0), opts());
  REQUIRE(v.proven());
  CHECK(v.zero_set.describe(kVars3) == "{x3=0}");
}

TEST_CASE("square substitution proves quartic forms") {
  // (x1^2 - x2^2)^2 is PSD but not an even-monomial-definite expression.
  Polynomial q = P2("x1^4 - 2*x1^2*x2^2 + x2^4");
  SignVerdict v = check_sign(q, SignReq::GE, Region::ball(1.0), opts());
  REQUIRE(v.proven());
  CHECK(v.method == SignVerdict::Method::SOSDiagonal);
}

TEST_CASE("identically zero expression") {
  Polynomial z(3);
  SignVerdict nonstrict =
      check_sign(z, SignReq::LE, Region::ball(1.0), opts());
  CHECK(nonstrict.proven());
  SignVerdict strict = check_sign(z, SignReq::LT, Region::ball(1.0), opts());
  CHECK(strict.refuted());
}

TEST_CASE("sampling refutes with witnesses in the all-ones probe family") {
  // div f of the two-equilibria system violates <= 0 at x1 > 0.5.
  Polynomial q = P3("-3 + 6*x1");
  SignVerdict v = check_sign(q, SignReq::LE, Region::ball(1.0), opts());
  REQUIRE(v.refuted());
  CHECK(v.witness[0].get_d() > 0.5);
}

TEST_CASE("honest Undetermined for unstructured but sign-correct input") {
  // x1 <= 1 holds on the unit ball but has no exact certificate here.
  Polynomial q = P3("x1 - 1");
  SignVerdict v = check_sign(q, SignReq::LE, Region::ball(1.0), opts());
  CHECK(v.status == SignVerdict::Status::Undetermined);
  CHECK(v.samples_used == 10000);
}

TEST_CASE("determinism: same seed, same verdict and witness") {
  Polynomial q = P3("x1^3 - x2 + 1/10");
  SignVerdict a = check_sign(q, SignReq::LE, Region::ball(1.0), opts(5));
  SignVerdict b = check_sign(q, SignReq::LE, Region::ball(1.0), opts(5));
  REQUIRE(a.status == b.status);
  if (a.refuted()) {
    CHECK(a.witness == b.witness);
    CHECK(a.witness_index == b.witness_index);
  }
}

TEST_CASE("worker count does not change the outcome") {
  Polynomial q = P3("x1^3 - x2 + 1/10");
  CheckOptions one = opts(5);
  one.workers = 1;
  CheckOptions many = opts(5);
  many.workers = 7;
  SignVerdict a = check_sign(q, SignReq::LE, Region::ball(1.0), one);
  SignVerdict b = check_sign(q, SignReq::LE, Region::ball(1.0), many);
  REQUIRE(a.status == b.status);
  if (a.refuted()) {
    CHECK(a.witness == b.witness);
    CHECK(a.witness_index == b.witness_index);
  }
}

TEST_CASE("scale invariance for homogeneous input") {
  Polynomial q = P3("x1^2*x2^2 - x3^4");
  SignVerdict small = check_sign(q, SignReq::LE, Region::ball(1.0), opts(3));
  SignVerdict large = check_sign(q, SignReq::LE, Region::ball(100.0), opts(3));
  CHECK(small.status == large.status);
}

TEST_CASE("soundness smoke: proven verdicts survive a million samples") {
  std::vector<std::pair<Polynomial, SignReq>> corpus{
      {P3("-22*x3^2") * W3().pow(3), SignReq::LE},
      {P2("x1^4 - 2*x1^2*x2^2 + x2^4"), SignReq::GE},
      {P3("-x1^2 - 2*x2^2 - x3^2 + x1*x2"), SignReq::LE},
  };
  for (const auto& [q, req] : corpus) {
    SignVerdict v = check_sign(q, req, Region::ball(1.0), opts());
    REQUIRE(v.proven());
    CompiledPoly c = CompiledPoly::compile(q);
    int dir = sign_req_direction(req);
    for (std::uint64_t i = 0; i < 1000000; ++i) {
      SampleRng rng = SampleRng::for_index(99, i);
      std::vector<double> x = rng.ball_point(q.nvars(), 1.0);
      double val = c.eval(x.data());
      bool ok = dir < 0 ? val <= 1e-12 : val >= -1e-12;
      if (!ok) {
        CHECK(ok);
        break;
      }
    }
  }
}

TEST_CASE("U-set: even-monomial proof applies off the zero set") {
  SignVerdict v = check_sign_on_U(P2("x1^2 + x2^2"),
                                  P2("1/2*x1^2 - 1/2*x2^2"), SignReq::GT, 1.0,
                                  opts());
  REQUIRE(v.proven());
  CHECK(v.strict_on_region);
}

TEST_CASE("U-set: wrong sign is refuted") {
  SignVerdict v = check_sign_on_U(P2("-x1^2"), P2("1/2*x1^2 - 1/2*x2^2"),
                                  SignReq::GT, 1.0, opts());
  CHECK(v.refuted());
}

TEST_CASE("U-set: sign-linked region stays Undetermined") {
  SignVerdict v =
      check_sign_on_U(P2("x1"), P2("x1"), SignReq::GT, 1.0, opts());
  CHECK(v.status == SignVerdict::Status::Undetermined);
  CHECK(v.samples_used > 0);
}

TEST_CASE("U-set: empty U raises") {
  CHECK_THROWS_AS(check_sign_on_U(P2("x1"), P2("-x1^2 - x2^2"), SignReq::GT,
                                  1.0, opts()),
                  EmptyU);
}
