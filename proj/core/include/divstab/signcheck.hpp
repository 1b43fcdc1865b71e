#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "divstab/polynomial.hpp"

namespace divstab {

enum class SignReq { LE, LT, GE, GT };

bool sign_req_is_strict(SignReq r);
// The sign direction (-1 for LE/LT, +1 for GE/GT).
int sign_req_direction(SignReq r);
std::string sign_req_to_string(SignReq r);

// Union of coordinate subspaces, each component a set of variable indices
// forced to zero. This is how the exact provers describe where a
// semidefinite expression may vanish.
struct ZeroSetDesc {
  std::vector<std::vector<int>> components;

  bool empty() const { return components.empty(); }
  // Every component pins all variables, i.e. the set is {0} (or empty).
  bool subset_of_origin(int nvars) const;
  // Number of components of codimension 1 (a single pinned variable).
  int codim1_components() const;
  std::string describe(const std::vector<std::string>& vars) const;

  static ZeroSetDesc unite(const ZeroSetDesc& a, const ZeroSetDesc& b);
};

// Three-valued outcome of "q has sign sigma on region \ {0}".
//
// Proven comes only from the exact paths (never from sampling); Refuted
// carries a witness whose exact re-evaluation violates the sign.
struct SignVerdict {
  enum class Status { Proven, Refuted, Undetermined };
  enum class Method { EvenMonomial, QuadForm, SOSDiagonal };

  Status status = Status::Undetermined;
  Method method = Method::EvenMonomial;

  // Proven: where the expression may still vanish, and whether that locus
  // misses the region away from the origin (strict inequality holds).
  ZeroSetDesc zero_set;
  bool strict_on_region = false;

  // Refuted.
  std::vector<Rational> witness;
  double witness_value = 0.0;
  std::uint64_t witness_index = 0;

  // Undetermined.
  std::uint64_t samples_used = 0;

  std::string note;

  bool proven() const { return status == Status::Proven; }
  bool refuted() const { return status == Status::Refuted; }
  std::string to_string(const std::vector<std::string>& vars) const;
};

struct Region {
  enum class Kind { Ball, AllSpace, USet };
  Kind kind = Kind::Ball;
  double radius = 1.0;
  // USet: {|x| <= radius, u_rho(x) > 0}
  std::optional<Polynomial> u_rho;

  static Region ball(double r) { return Region{Kind::Ball, r, std::nullopt}; }
  static Region all_space() { return Region{Kind::AllSpace, 1.0, std::nullopt}; }
  static Region u_set(Polynomial rho, double r) {
    return Region{Kind::USet, r, std::move(rho)};
  }
  std::string describe(const std::vector<std::string>& vars) const;
};

struct CheckOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
};

class EmptyU : public std::runtime_error {
 public:
  EmptyU()
      : std::runtime_error(
            "no point with rho > 0 found in the ball within the sample "
            "budget") {}
};

// Decides "q has the required sign on region \ {0}". Exact paths are tried
// in order: even-monomial coefficient test, quadratic-form eigenvalue test,
// then the same two on the y_i = x_i^2 substitution. Otherwise seeded
// sampling refutes or returns Undetermined.
SignVerdict check_sign(const Polynomial& q, SignReq req, const Region& region,
                       const CheckOptions& opts);

// Sign on U = {|x| <= r, rho(x) > 0}.
SignVerdict check_sign_on_U(const Polynomial& q, const Polynomial& rho,
                            SignReq req, double r, const CheckOptions& opts);

}  // namespace divstab
