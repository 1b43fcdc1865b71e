#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/parser.hpp>
#include <divstab/report.hpp>
#include <divstab/svg.hpp>
#include <divstab/systemfile.hpp>

#include <sstream>

using namespace divstab;

namespace {

const char* kPlain = R"(# comment
vars: x1 x2 x3
f1: x2 - 2*x1*x3^2
f2: -x1 - 2*x2*x3^2   # inline comment
f3: -2*x3^3
rho: norm^6
levels: 0.25, 1, 4
x0: 0.5, 0.5, 0.5
T: 50
)";

const char* kControl = R"(vars: x1 x2
xi1: -x1*x2^2
xi2: 0
g11: 0
g21: 1
u1: -x2^3
u_template: c1*x2 + c2*x2^3 ; grid: -2..2
rho: norm^2
beta: 1
alpha: 1..8
)";

}  // namespace

TEST_CASE("plain system file round-trips into a vector field") {
  SystemFile sf = parse_system_file(kPlain);
  CHECK(sf.vars == std::vector<std::string>{"x1", "x2", "x3"});
  CHECK(!sf.control_mode);
  VectorField f = sf.field();
  CHECK(f.divergence() == parse_polynomial("-10*x3^2", sf.vars));
  REQUIRE(sf.rho.has_value());
  CHECK(sf.rho->kind() == DensitySpec::Kind::NormPower);
  CHECK(sf.rho->alpha() == 3);
  CHECK(sf.levels == std::vector<double>{0.25, 1, 4});
  REQUIRE(sf.x0s.size() == 1);
  CHECK(sf.x0s[0] == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(sf.T == 50.0);
}

TEST_CASE("control system file carries the law and the template") {
  SystemFile sf = parse_system_file(kControl);
  REQUIRE(sf.control_mode);
  ControlSystem sys = sf.control_system();
  CHECK(sys.inputs() == 1);
  CHECK(sys.u.size() == 1);
  REQUIRE(sf.u_template.has_value());
  CHECK(sf.u_template->basis[0].size() == 2);
  CHECK(sf.u_template->grid.size() == 5);
  CHECK(sf.beta == 1);
  CHECK(sf.alpha_lo == 1);
  CHECK(sf.alpha_hi == 8);
  VectorField f = sys.closed_loop();
  CHECK(f.component(1) == parse_polynomial("-x2^3", sf.vars));
}

TEST_CASE("quadform and explicit densities parse") {
  SystemFile qf = parse_system_file(
      "vars: x1 x2\nf1: -x1\nf2: -x2\nrho: quadform 1 0; 0 2 ^2\n");
  REQUIRE(qf.rho.has_value());
  CHECK(qf.rho->kind() == DensitySpec::Kind::QuadFormPower);
  CHECK(qf.rho->alpha() == 2);

  SystemFile ex = parse_system_file(
      "vars: x1 x2\nf1: x1\nf2: -x2\nrho: expr 1/2*x1^2 - 1/2*x2^2\nr: 1\n");
  REQUIRE(ex.rho.has_value());
  CHECK(ex.rho->kind() == DensitySpec::Kind::Explicit);
  CHECK(!ex.rho->positive_definite());
}

TEST_CASE("file errors carry line numbers") {
  try {
    parse_system_file("vars: x1 x2\nf1: x1\nf2: x1 +\n");
    CHECK(false);
  } catch (const SystemFileError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_system_file("f1: x1\n"), SystemFileError);
  CHECK_THROWS_AS(parse_system_file("vars: x1\nf1: x1\nbogus: 1\n"),
                  SystemFileError);
  CHECK_THROWS_AS(parse_system_file("vars: x1 x2\nf1: x1\n"),
                  SystemFileError);  // missing f2
  CHECK_THROWS_AS(
      parse_system_file("vars: x1 x2\nf1: x1\nf2: x2\nx0: 1,2,3\n"),
      SystemFileError);  // x0 arity
}

TEST_CASE("matrix files parse rationals and floats") {
  Eigen::MatrixXd M = parse_matrix_file("0 1\n-1 -1/2\n");
  CHECK(M(0, 1) == 1.0);
  CHECK(M(1, 1) == -0.5);
  Eigen::MatrixXd F = parse_matrix_file("1.5 0\n0 2e-1\n");
  CHECK(F(0, 0) == 1.5);
  CHECK(F(1, 1) == 0.2);
  CHECK_THROWS_AS(parse_matrix_file("1 2\n3\n"), SystemFileError);
  CHECK_THROWS_AS(parse_matrix_file("\n"), SystemFileError);
}

TEST_CASE("report writer is deterministic and digest-stable") {
  auto build = [] {
    ReportWriter w;
    write_header(w, "analyze", "vars: x1\nf1: -x1\n");
    w.section("numbers");
    w.kv("pi", 3.14159265358979312);
    w.kv("count", static_cast<std::uint64_t>(42));
    w.kv("ratio", make_rational(-22, 7));
    return w.str();
  };
  std::string a = build();
  std::string b = build();
  CHECK(a == b);
  CHECK(a.find("tool_version: 0.1.0") != std::string::npos);
  CHECK(a.find("input_digest: fnv1a64:") != std::string::npos);
  CHECK(a.find("pi: 3.1415926535897931") != std::string::npos);
  CHECK(a.find("ratio: -22/7") != std::string::npos);
  // digest depends on the bytes
  CHECK(digest_hex("a") != digest_hex("b"));
  CHECK(digest_hex("a") == digest_hex("a"));
}

TEST_CASE("svg plotting from a trajectory CSV") {
  std::string csv =
      "traj_id,t,x1,x2\n"
      "0,0,1,0\n0,1,0.5,0.5\n0,2,0,1\n"
      "1,0,-1,0\n1,1,-0.5,-0.5\n";
  std::vector<SvgSeries> series = csv_to_series(csv, 1, 2);
  REQUIRE(series.size() == 2);
  CHECK(series[0].points.size() == 3);
  std::ostringstream out;
  write_svg_plot(out, series, "x1", "x2");
  std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("x1</text>") != std::string::npos);

  CHECK_THROWS_AS(csv_to_series("", 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(csv_to_series("traj_id,t,x1,x2\n", 1, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(csv_to_series(csv, 1, 5), std::invalid_argument);
}
