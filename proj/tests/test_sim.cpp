#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/sim.hpp>

#include <cmath>
#include <sstream>

#include "test_systems.hpp"

using namespace divstab;
using namespace testsys;

namespace {

SimSettings settings(double T = 100.0, double tol = 1e-9) {
  SimSettings s;
  s.T = T;
  s.tol = tol;
  return s;
}

const std::vector<std::string> kVar1{"x1"};

VectorField decay1() {
  return VectorField(kVar1, {parse_polynomial("-x1", kVar1)});
}

}  // namespace

TEST_CASE("scalar exponential decay matches the closed form") {
  TrajectoryRecord rec = integrate(decay1(), {1.0}, settings(10.0, 1e-9));
  CHECK(std::abs(rec.x.back()[0] - std::exp(-10.0)) <= 10 * 1e-9);
  CHECK(rec.t.size() >= 1000);
}

TEST_CASE("pure rotation on the invariant slice keeps its radius") {
  TrajectoryRecord rec =
      integrate(rot3(), {1.0, 0.0, 0.0}, settings(100.0, 1e-9));
  double worst = 0.0;
  for (std::size_t j = 0; j < rec.t.size(); ++j) {
    worst = std::max(worst, std::abs(rec.norm_at(j) - 1.0));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("rotation on the slice classifies as periodic with period 2 pi") {
  TrajectoryRecord rec =
      integrate(rot3(), {1.0, 0.0, 0.0}, settings(100.0, 1e-9));
  REQUIRE(rec.classification.kind == Classification::Kind::Periodic);
  CHECK(std::abs(rec.classification.period_estimate - 2.0 * M_PI) < 1e-3);
}

TEST_CASE("two-equilibria system: escape and convergence") {
  VectorField f = twoeq3();
  TrajectoryRecord esc = integrate(f, {2.0, 0.0, 0.0}, settings());
  CHECK(esc.classification.kind == Classification::Kind::Escaped);

  TrajectoryRecord conv = integrate(f, {0.5, 0.5, 0.0}, settings());
  REQUIRE(conv.classification.kind ==
          Classification::Kind::ConvergedToOrigin);
  CHECK(conv.classification.t_hit < 100.0);
}

TEST_CASE("saddle escape from a tiny perturbation inside U") {
  TrajectoryRecord rec = integrate(saddle2(), {1e-3, 0.0}, settings());
  CHECK(rec.classification.kind == Classification::Kind::Escaped);
  double max_norm = 0.0;
  for (std::size_t j = 0; j < rec.t.size(); ++j) {
    max_norm = std::max(max_norm, rec.norm_at(j));
  }
  CHECK(max_norm > 1.0);  // leaves the unit analysis ball
}

TEST_CASE("finite-time blowup with escape disabled underflows the step") {
  SimSettings s = settings(2.0, 1e-9);
  s.R_escape = 1e290;
  CHECK_THROWS_AS(integrate(twoeq3(), {2.0, 0.0, 0.0}, s), StepUnderflow);
}

TEST_CASE("halving the tolerance never changes a classification") {
  struct Case {
    VectorField f;
    std::vector<double> x0;
  };
  std::vector<Case> corpus{{rot3(), {1.0, 0.0, 0.0}},
                           {rot3(), {0.5, 0.5, 0.5}},
                           {twoeq3(), {2.0, 0.0, 0.0}},
                           {twoeq3(), {0.5, 0.5, 0.0}},
                           {saddle2(), {1e-3, 0.0}}};
  for (const auto& c : corpus) {
    TrajectoryRecord a = integrate(c.f, c.x0, settings(100.0, 1e-9));
    TrajectoryRecord b = integrate(c.f, c.x0, settings(100.0, 5e-10));
    CHECK(a.classification.kind == b.classification.kind);
  }
}

TEST_CASE("classification thresholds are caller-adjustable") {
  TrajectoryRecord rec = integrate(rot3(), {0.5, 0.5, 0.5}, settings());
  // algebraic decay: not inside 1e-6 by T=100, but well inside 0.3
  CHECK(rec.classification.kind == Classification::Kind::Undecided);
  Classification relaxed = classify(rec, 0.3, 1e3);
  CHECK(relaxed.kind == Classification::Kind::ConvergedToOrigin);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(integrate(decay1(), {1.0, 2.0}, settings()),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate(decay1(), {1.0}, settings(10.0, 1e-2)),
                  std::invalid_argument);
}

TEST_CASE("portrait CSV format") {
  std::vector<TrajectoryRecord> recs =
      portrait(saddle2(), {{0.1, 0.1}, {-0.1, 0.2}}, settings(1.0, 1e-9));
  std::ostringstream out;
  write_portrait_csv(out, recs);
  std::string csv = out.str();
  CHECK(csv.rfind("traj_id,t,x1,x2\n", 0) == 0);
  CHECK(csv.find("\n1,") != std::string::npos);
  // 17 significant digits survive a double round-trip
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::size_t second_comma = line.find(',', line.find(',') + 1);
  double x1 = std::stod(line.substr(second_comma + 1));
  CHECK(x1 == recs[0].x[0][0]);
}
