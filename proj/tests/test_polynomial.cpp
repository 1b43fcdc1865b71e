#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/parser.hpp>
#include <divstab/polynomial.hpp>
#include <divstab/rng.hpp>

using namespace divstab;

namespace {

const std::vector<std::string> kVars3{"x1", "x2", "x3"};

Polynomial P(const std::string& src,
             const std::vector<std::string>& vars = kVars3) {
  return parse_polynomial(src, vars);
}

// Random polynomial with small integer coefficients, independent of the
// production parser/printer.
Polynomial random_poly(SampleRng& rng, int nvars, int max_deg, int max_terms) {
  Polynomial p(nvars);
  int terms = 1 + static_cast<int>(rng.next() % max_terms);
  for (int t = 0; t < terms; ++t) {
    Exponents e(nvars);
    for (int i = 0; i < nvars; ++i) {
      e[i] = static_cast<unsigned>(rng.next() % (max_deg + 1));
    }
    long num = static_cast<long>(rng.next() % 19) - 9;
    long den = 1 + static_cast<long>(rng.next() % 4);
    p += Polynomial::monomial(nvars, e, make_rational(num, den));
  }
  return p;
}

std::vector<Rational> random_point(SampleRng& rng, int nvars,
                                   bool nonzero = false) {
  for (;;) {
    std::vector<Rational> x;
    bool all_zero = true;
    for (int i = 0; i < nvars; ++i) {
      long num = static_cast<long>(rng.next() % 21) - 10;
      long den = 1 + static_cast<long>(rng.next() % 6);
      if (num != 0) all_zero = false;
      x.push_back(make_rational(num, den));
    }
    if (!nonzero || !all_zero) return x;
  }
}

}  // namespace

TEST_CASE("parse: first component of the rotating test system") {
  Polynomial p = P("x2 - 2*x1*x3^2");
  std::map<Exponents, Rational> want{{{0, 1, 0}, Rational(1)},
                                     {{1, 0, 2}, Rational(-2)}};
  CHECK(p.terms() == want);
}

TEST_CASE("parse: zero literal gives empty term map") {
  CHECK(P("0").is_zero());
  CHECK(P("0").terms().empty());
}

TEST_CASE("parse: binomial squared cancels to a single term") {
  Polynomial p = P("(x1+x2)^2 - x1^2 - 2*x1*x2");
  std::map<Exponents, Rational> want{{{0, 2, 0}, Rational(1)}};
  CHECK(p.terms() == want);
}

TEST_CASE("parse: rationals, leading minus, nested parens") {
  Polynomial p = P("-1/2*x1^2 + (3/4 - 1/4)*x2");
  CHECK(p.evaluate(std::vector<Rational>{2, 3, 0}) == Rational(-1, 2) * 4 + Rational(1, 2) * 3);
}

TEST_CASE("parse errors carry positions and kinds") {
  CHECK_THROWS_AS(P("2x1"), SyntaxError);          // no implicit multiplication
  CHECK_THROWS_AS(P("x1*"), SyntaxError);
  CHECK_THROWS_AS(P("x1 + y"), UnknownVariableError);
  CHECK_THROWS_AS(P("x1^(2)"), SyntaxError);
  CHECK_THROWS_AS(P("x1^3/2"), NonIntegerExponentError);
  CHECK_THROWS_AS(P("x1/2"), SyntaxError);         // '/' only inside rationals
  try {
    P("x1 + @");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 5);
  }
}

TEST_CASE("arithmetic: spec examples") {
  CHECK(P("x1") * P("x1") == P("x1^2"));
  CHECK((P("x1+x2") - P("x1+x2")).is_zero());
  CHECK(P("x1^2+x2^2+x3^2") * P("-10*x3^2") ==
        P("-10*x1^2*x3^2 - 10*x2^2*x3^2 - 10*x3^4"));
}

TEST_CASE("arity mismatch is rejected") {
  Polynomial a = P("x1");
  Polynomial b = parse_polynomial("x1", {"x1"});
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("differentiate: examples") {
  CHECK(P("x1^2*x2").differentiate(0) == P("2*x1*x2"));
  CHECK(P("x2 - 2*x1*x3^2").differentiate(2) == P("-4*x1*x3"));
  CHECK(P("5").differentiate(0).is_zero());
  CHECK_THROWS_AS(P("x1").differentiate(3), std::out_of_range);
}

TEST_CASE("evaluation homomorphism at 50 random rational points") {
  SampleRng rng = SampleRng::for_index(7, 0);
  for (int k = 0; k < 50; ++k) {
    Polynomial a = random_poly(rng, 3, 3, 5);
    Polynomial b = random_poly(rng, 3, 3, 5);
    std::vector<Rational> x = random_point(rng, 3);
    CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
    CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
  }
}

TEST_CASE("product rule holds exactly on a random corpus") {
  SampleRng rng = SampleRng::for_index(11, 0);
  for (int k = 0; k < 30; ++k) {
    Polynomial p = random_poly(rng, 3, 3, 4);
    Polynomial q = random_poly(rng, 3, 3, 4);
    for (int v = 0; v < 3; ++v) {
      CHECK((p * q).differentiate(v) ==
            p.differentiate(v) * q + p * q.differentiate(v));
    }
  }
}

TEST_CASE("pretty-print round-trips to the identical term map") {
  SampleRng rng = SampleRng::for_index(13, 0);
  for (int k = 0; k < 100; ++k) {
    Polynomial p = random_poly(rng, 3, 4, 6);
    Polynomial back = P(p.to_string(kVars3));
    CHECK(back == p);
  }
}

TEST_CASE("degree helpers") {
  CHECK(P("0").total_degree() == -1);
  CHECK(P("1 + x1^2*x2").total_degree() == 3);
  CHECK(P("x1^2 + x2^4").low_total_degree() == 2);
  CHECK(P("x1^2 + x2^2").is_homogeneous());
  CHECK(!P("x1^2 + x2").is_homogeneous());
  CHECK(P("x1^2*x2^4 + 4").all_exponents_even());
  CHECK(!P("x1^2*x2^3").all_exponents_even());
}

TEST_CASE("square substitution") {
  Polynomial p = P("x1^4 - 2*x1^2*x2^2 + x2^2");
  Polynomial y = p.substitute_squares();
  CHECK(y == P("x1^2 - 2*x1*x2 + x2"));
  CHECK_THROWS_AS(P("x1^3").substitute_squares(), std::logic_error);
}

TEST_CASE("quadratic form matrix extraction") {
  auto g = P("x1^2 + 4*x1*x2 - x3^2").quadratic_form_matrix();
  REQUIRE(g.has_value());
  CHECK((*g)[0][0] == 1);
  CHECK((*g)[0][1] == 2);
  CHECK((*g)[1][0] == 2);
  CHECK((*g)[2][2] == -1);
  CHECK(!P("x1^2 + x2").quadratic_form_matrix().has_value());
}

TEST_CASE("exact division") {
  Polynomial w = P("x1^2+x2^2+x3^2");
  Polynomial p = w * P("3*x1 - x2^2");
  auto q = p.divide_exact(w);
  REQUIRE(q.has_value());
  CHECK(*q == P("3*x1 - x2^2"));
  CHECK(!P("x1^2 + 1").divide_exact(w).has_value());
}

TEST_CASE("compiled evaluation matches exact evaluation") {
  SampleRng rng = SampleRng::for_index(17, 0);
  for (int k = 0; k < 20; ++k) {
    Polynomial p = random_poly(rng, 3, 4, 6);
    CompiledPoly c = CompiledPoly::compile(p);
    std::vector<double> x{rng.uniform01() - 0.5, rng.uniform01() - 0.5,
                          rng.uniform01() - 0.5};
    double want = p.evaluate(x);
    CHECK(c.eval(x.data()) == doctest::Approx(want).epsilon(1e-12));
  }
}
