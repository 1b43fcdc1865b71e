#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace divstab {

class SingularLyapunovOperator : public std::runtime_error {
 public:
  SingularLyapunovOperator()
      : std::runtime_error(
            "Lyapunov operator is singular (a pair of eigenvalues of M sums "
            "to zero)") {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch() : std::invalid_argument("matrix dimension mismatch") {}
};

// Solves M^T P + P M = -Q for symmetric P by a dense linear solve over the
// n(n+1)/2 symmetric unknowns. Q must be symmetric.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& Q);

// All eigenvalues of A have negative real part.
bool is_hurwitz(const Eigen::MatrixXd& A);

// Relative-threshold definiteness tests (threshold 1e-10 * max(1, ||S||_F)).
bool is_negative_definite(const Eigen::MatrixXd& S);
bool is_positive_definite_sym(const Eigen::MatrixXd& S);
double max_eigenvalue_sym(const Eigen::MatrixXd& S);

struct LinearVerdict {
  enum class Status { Holds, FailsWithSuppliedP, NotApplicable, Undetermined };
  Status status = Status::Undetermined;
  Eigen::MatrixXd P;          // the matrix the verdict refers to (if any)
  bool p_supplied = false;
  bool hurwitz = false;       // eigenvalue check on A (diagnostic)
  double max_eig_form1 = 0.0; // largest eigenvalue of the (first) tested form
  double max_eig_form2 = 0.0; // second form (case 2)
  std::string note;

  bool holds() const { return status == Status::Holds; }
  std::string status_string() const;
};

// Trace-shifted inequality A^T P + P A - (1/alpha)((beta-1)/(beta+1)) tr(A) P < 0,
// applicable for beta = 1, or for beta > 1 when tr(A) <= 0. With no P
// supplied, P is constructed by a Lyapunov solve on the shifted matrix and
// must come out positive definite.
LinearVerdict check_case1(const Eigen::MatrixXd& A, double alpha, double beta,
                          const std::optional<Eigen::MatrixXd>& P_opt);

// Simultaneous pair A^T P + P A -+ (1/alpha) tr(A) P < 0 for one common P.
// With no P supplied a finite candidate list is tried; failure to find one
// is Undetermined, not a refutation.
LinearVerdict check_case2(const Eigen::MatrixXd& A, double alpha,
                          const std::optional<Eigen::MatrixXd>& P_opt);

}  // namespace divstab
