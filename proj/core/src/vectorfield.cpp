#include "divstab/vectorfield.hpp"

#include <sstream>

namespace divstab {

VectorField::VectorField(std::vector<std::string> vars,
                         std::vector<Polynomial> components)
    : vars_(std::move(vars)), components_(std::move(components)) {
  if (vars_.empty() || vars_.size() != components_.size()) {
    throw std::invalid_argument("vector field arity mismatch");
  }
  for (const auto& c : components_) {
    if (c.nvars() != dim()) {
      throw std::invalid_argument("vector field component arity mismatch");
    }
  }
}

bool VectorField::equilibrium_at_origin() const {
  for (const auto& c : components_) {
    if (c.constant_term() != 0) return false;
  }
  return true;
}

Polynomial VectorField::divergence() const {
  Polynomial d(dim());
  for (int i = 0; i < dim(); ++i) d += components_[i].differentiate(i);
  return d;
}

Polynomial VectorField::x_dot_f() const {
  Polynomial s(dim());
  for (int i = 0; i < dim(); ++i) {
    s += Polynomial::variable(dim(), i) * components_[i];
  }
  return s;
}

Polynomial VectorField::dot(const std::vector<Polynomial>& g) const {
  if (static_cast<int>(g.size()) != dim()) {
    throw std::invalid_argument("dot: arity mismatch");
  }
  Polynomial s(dim());
  for (int i = 0; i < dim(); ++i) s += g[i] * components_[i];
  return s;
}

std::string VectorField::to_string() const {
  std::ostringstream out;
  for (int i = 0; i < dim(); ++i) {
    if (i > 0) out << "; ";
    out << "d" << vars_[i] << "/dt = " << components_[i].to_string(vars_);
  }
  return out.str();
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) g.push_back(p.differentiate(i));
  return g;
}

VectorField gradient_field(const Polynomial& p, std::vector<std::string> vars) {
  return VectorField(std::move(vars), gradient(p));
}

}  // namespace divstab
