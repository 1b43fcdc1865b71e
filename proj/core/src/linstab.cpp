#include "divstab/linstab.hpp"

#include <vector>

namespace divstab {

namespace {
constexpr double kDefTol = 1e-10;

double def_tol(const Eigen::MatrixXd& S) {
  return kDefTol * std::max(1.0, S.norm());
}
}  // namespace

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw DimensionMismatch();
  }
  if ((Q - Q.transpose()).norm() > 1e-12 * std::max(1.0, Q.norm())) {
    throw std::invalid_argument("Q must be symmetric");
  }

  // Unknowns: upper triangle of P, row-major.
  const int m = n * (n + 1) / 2;
  auto idx = [n](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs(m);
  // Equation (i,j), i <= j:  sum_k M(k,i) P(k,j) + P(i,k) M(k,j) = -Q(i,j)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      int row = idx(i, j);
      for (int k = 0; k < n; ++k) {
        sys(row, idx(k, j)) += M(k, i);
        sys(row, idx(i, k)) += M(k, j);
      }
      rhs(row) = -Q(i, j);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible()) throw SingularLyapunovOperator();
  Eigen::VectorXd sol = lu.solve(rhs);

  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      P(i, j) = sol(idx(i, j));
      P(j, i) = sol(idx(i, j));
    }
  }
  double residual = (M.transpose() * P + P * M + Q).norm();
  if (residual > 1e-9 * std::max(1.0, Q.norm())) {
    throw SingularLyapunovOperator();
  }
  return P;
}

bool is_hurwitz(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  return es.eigenvalues().real().maxCoeff() < 0.0;
}

double max_eigenvalue_sym(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().maxCoeff();
}

bool is_negative_definite(const Eigen::MatrixXd& S) {
  return max_eigenvalue_sym(S) < -def_tol(S);
}

bool is_positive_definite_sym(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().minCoeff() > def_tol(S);
}

std::string LinearVerdict::status_string() const {
  switch (status) {
    case Status::Holds: return "Holds";
    case Status::FailsWithSuppliedP: return "FailsWithSuppliedP";
    case Status::NotApplicable: return "NotApplicable";
    case Status::Undetermined: return "Undetermined";
  }
  return "";
}

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& S) {
  return 0.5 * (S + S.transpose());
}

}  // namespace

LinearVerdict check_case1(const Eigen::MatrixXd& A, double alpha, double beta,
                          const std::optional<Eigen::MatrixXd>& P_opt) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw DimensionMismatch();

  LinearVerdict v;
  v.hurwitz = is_hurwitz(A);
  double tr = A.trace();
  if (beta > 1 && tr > 0) {
    v.status = LinearVerdict::Status::NotApplicable;
    v.note = "beta > 1 requires trace(A) <= 0";
    return v;
  }
  double c = (1.0 / alpha) * ((beta - 1.0) / (beta + 1.0)) * tr;
  auto form = [&](const Eigen::MatrixXd& P) {
    return symmetrize(A.transpose() * P + P * A - c * P);
  };

  if (P_opt) {
    v.p_supplied = true;
    v.P = *P_opt;
    Eigen::MatrixXd g = form(v.P);
    v.max_eig_form1 = max_eigenvalue_sym(g);
    v.status = is_negative_definite(g) ? LinearVerdict::Status::Holds
                                       : LinearVerdict::Status::FailsWithSuppliedP;
    return v;
  }

  // The shifted form equals M^T P + P M for M = A - (c/2) I.
  Eigen::MatrixXd M = A - 0.5 * c * Eigen::MatrixXd::Identity(n, n);
  try {
    Eigen::MatrixXd P = lyapunov_solve(M, Eigen::MatrixXd::Identity(n, n));
    if (is_positive_definite_sym(P)) {
      v.P = P;
      v.max_eig_form1 = max_eigenvalue_sym(form(P));
      v.status = LinearVerdict::Status::Holds;
    } else {
      v.status = LinearVerdict::Status::Undetermined;
      v.note = "Lyapunov solve produced an indefinite P (shifted matrix not "
               "Hurwitz)";
    }
  } catch (const SingularLyapunovOperator&) {
    v.status = LinearVerdict::Status::Undetermined;
    v.note = "singular Lyapunov operator for the shifted matrix";
  }
  return v;
}

LinearVerdict check_case2(const Eigen::MatrixXd& A, double alpha,
                          const std::optional<Eigen::MatrixXd>& P_opt) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw DimensionMismatch();

  LinearVerdict v;
  v.hurwitz = is_hurwitz(A);
  double s = A.trace() / alpha;
  auto form_minus = [&](const Eigen::MatrixXd& P) {
    return symmetrize(A.transpose() * P + P * A - s * P);
  };
  auto form_plus = [&](const Eigen::MatrixXd& P) {
    return symmetrize(A.transpose() * P + P * A + s * P);
  };
  auto test = [&](const Eigen::MatrixXd& P) {
    Eigen::MatrixXd g1 = form_minus(P);
    Eigen::MatrixXd g2 = form_plus(P);
    v.max_eig_form1 = max_eigenvalue_sym(g1);
    v.max_eig_form2 = max_eigenvalue_sym(g2);
    return is_negative_definite(g1) && is_negative_definite(g2) &&
           is_positive_definite_sym(P);
  };

  if (P_opt) {
    v.p_supplied = true;
    v.P = *P_opt;
    v.status = test(v.P) ? LinearVerdict::Status::Holds
                         : LinearVerdict::Status::FailsWithSuppliedP;
    return v;
  }

  // Finite candidate search; feasibility is not decided, so failure is
  // Undetermined.
  std::vector<Eigen::MatrixXd> seeds{
      A, A - 0.5 * s * Eigen::MatrixXd::Identity(n, n),
      A + 0.5 * s * Eigen::MatrixXd::Identity(n, n)};
  for (const auto& M : seeds) {
    try {
      Eigen::MatrixXd P = lyapunov_solve(M, Eigen::MatrixXd::Identity(n, n));
      if (test(P)) {
        v.P = P;
        v.status = LinearVerdict::Status::Holds;
        return v;
      }
    } catch (const SingularLyapunovOperator&) {
      continue;
    }
  }
  v.status = LinearVerdict::Status::Undetermined;
  v.note = "no candidate P satisfied both shifted inequalities";
  return v;
}

}  // namespace divstab
