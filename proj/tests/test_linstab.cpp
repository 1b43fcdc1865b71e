#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <divstab/linstab.hpp>
#include <divstab/rng.hpp>

using namespace divstab;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::MatrixXd random_matrix(SampleRng& rng, int n, double scale) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = scale * (2.0 * rng.uniform01() - 1.0);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("lyapunov_solve: closed form for M = -I") {
  Eigen::MatrixXd P = lyapunov_solve(mat2(-1, 0, 0, -1),
                                     Eigen::MatrixXd::Identity(2, 2));
  CHECK(P(0, 0) == doctest::Approx(0.5));
  CHECK(P(1, 1) == doctest::Approx(0.5));
  CHECK(P(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("lyapunov_solve: hand-solved 2x2 system") {
  Eigen::MatrixXd M = mat2(0, 1, -1, -1);
  Eigen::MatrixXd P = lyapunov_solve(M, Eigen::MatrixXd::Identity(2, 2));
  CHECK(P(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(P(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(P(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(P(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lyapunov_solve: skew matrix is singular") {
  CHECK_THROWS_AS(
      lyapunov_solve(mat2(0, 1, -1, 0), Eigen::MatrixXd::Identity(2, 2)),
      SingularLyapunovOperator);
}

TEST_CASE("lyapunov_solve: dimension checks") {
  Eigen::MatrixXd M(2, 3);
  M.setZero();
  CHECK_THROWS_AS(lyapunov_solve(M, Eigen::MatrixXd::Identity(2, 2)),
                  DimensionMismatch);
}

TEST_CASE("lyapunov residual stays below 1e-9 relative on a random corpus") {
  SampleRng rng = SampleRng::for_index(51, 0);
  for (int k = 0; k < 20; ++k) {
    int n = 2 + static_cast<int>(rng.next() % 5);
    Eigen::MatrixXd M = random_matrix(rng, n, 1.0);
    M -= (M.eigenvalues().real().maxCoeff() + 0.5) *
         Eigen::MatrixXd::Identity(n, n);  // force Hurwitz
    Eigen::MatrixXd G = random_matrix(rng, n, 1.0);
    Eigen::MatrixXd Q =
        G * G.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd P = lyapunov_solve(M, Q);
    double rel = (M.transpose() * P + P * M + Q).norm() / Q.norm();
    CHECK(rel <= 1e-9);
    CHECK((P - P.transpose()).norm() <= 1e-12 * P.norm());
  }
}

TEST_CASE("case 1: plain Lyapunov inequality at beta = 1") {
  LinearVerdict v = check_case1(mat2(-1, 0, 0, -1), 1.0, 1.0,
                                Eigen::MatrixXd::Identity(2, 2));
  CHECK(v.holds());
  CHECK(v.max_eig_form1 == doctest::Approx(-2.0));
}

TEST_CASE("case 1: shifted-Hurwitz example holds") {
  // eigenvalues of A have real part -1/2; the shift is +1/4.
  LinearVerdict v = check_case1(mat2(0, 1, -1, -1), 1.0, 3.0, std::nullopt);
  CHECK(v.holds());
  CHECK(v.hurwitz);
  CHECK(is_positive_definite_sym(v.P));
}

TEST_CASE("case 1: positive trace with beta > 1 is NotApplicable") {
  LinearVerdict v = check_case1(mat2(1, 0, 0, 1), 1.0, 2.0, std::nullopt);
  CHECK(v.status == LinearVerdict::Status::NotApplicable);
}

TEST_CASE("case 2: A = -I with alpha = 2 gives the forms -I and -3I") {
  LinearVerdict v =
      check_case2(mat2(-1, 0, 0, -1), 2.0, Eigen::MatrixXd::Identity(2, 2));
  CHECK(v.holds());
  CHECK(v.max_eig_form1 == doctest::Approx(-1.0));
  CHECK(v.max_eig_form2 == doctest::Approx(-3.0));
}

TEST_CASE("case 2: A = -I with alpha = 1 fails for P = I at eigenvalue zero") {
  LinearVerdict v =
      check_case2(mat2(-1, 0, 0, -1), 1.0, Eigen::MatrixXd::Identity(2, 2));
  CHECK(v.status == LinearVerdict::Status::FailsWithSuppliedP);
  CHECK(std::abs(v.max_eig_form1) <= 1e-10);
}

TEST_CASE("case 2: large alpha reduces to the Lyapunov inequality") {
  Eigen::MatrixXd A = mat2(-1, 0, 0, -10);
  LinearVerdict v = check_case2(A, 1e6, std::nullopt);
  CHECK(v.holds());
}

TEST_CASE("the two case-2 forms sum to twice the Lyapunov form") {
  SampleRng rng = SampleRng::for_index(53, 0);
  for (int k = 0; k < 20; ++k) {
    int n = 2 + static_cast<int>(rng.next() % 4);
    Eigen::MatrixXd A = random_matrix(rng, n, 2.0);
    Eigen::MatrixXd P = random_matrix(rng, n, 1.0);
    P = 0.5 * (P + P.transpose());
    double s = A.trace();  // alpha = 1
    Eigen::MatrixXd f1 = A.transpose() * P + P * A - s * P;
    Eigen::MatrixXd f2 = A.transpose() * P + P * A + s * P;
    Eigen::MatrixXd lyap = A.transpose() * P + P * A;
    CHECK((f1 + f2 - 2.0 * lyap).norm() <= 1e-12 * std::max(1.0, lyap.norm()));
  }
}

TEST_CASE("every Holds verdict implies a Hurwitz matrix") {
  SampleRng rng = SampleRng::for_index(57, 0);
  int holds_seen = 0;
  for (int k = 0; k < 40; ++k) {
    int n = 2 + static_cast<int>(rng.next() % 3);
    Eigen::MatrixXd A = random_matrix(rng, n, 2.0);
    for (double alpha : {0.5, 1.0, 4.0}) {
      LinearVerdict v1 = check_case1(A, alpha, 1.0, std::nullopt);
      if (v1.holds()) {
        ++holds_seen;
        CHECK(is_hurwitz(A));
      }
      LinearVerdict v3 = check_case1(A, alpha, 3.0, std::nullopt);
      if (v3.holds()) CHECK(is_hurwitz(A));
      LinearVerdict v2 = check_case2(A, alpha, std::nullopt);
      if (v2.holds()) CHECK(is_hurwitz(A));
    }
  }
  CHECK(holds_seen > 0);  // the sweep must actually exercise the Holds path
}
