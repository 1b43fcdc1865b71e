#pragma once

#include <string>
#include <vector>

#include "divstab/polynomial.hpp"

namespace divstab {

// Polynomial vector field: ordered variable names plus one component per
// coordinate. Immutable after construction.
class VectorField {
 public:
  VectorField(std::vector<std::string> vars, std::vector<Polynomial> components);

  int dim() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& component(int i) const { return components_.at(i); }

  // f(0) = 0, i.e. all constant terms vanish.
  bool equilibrium_at_origin() const;

  // sum_i dfi/dxi
  Polynomial divergence() const;

  // sum_i xi * fi
  Polynomial x_dot_f() const;

  // sum_i gi * fi
  Polynomial dot(const std::vector<Polynomial>& g) const;

  std::string to_string() const;

 private:
  std::vector<std::string> vars_;
  std::vector<Polynomial> components_;
};

// Componentwise partial derivatives of a scalar polynomial.
std::vector<Polynomial> gradient(const Polynomial& p);

VectorField gradient_field(const Polynomial& p, std::vector<std::string> vars);

}  // namespace divstab
