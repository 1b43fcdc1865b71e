#pragma once

#include <optional>

#include "divstab/conditions.hpp"

namespace divstab {

class TemplateTooLarge : public std::invalid_argument {
 public:
  TemplateTooLarge()
      : std::invalid_argument("synthesis template exceeds 10^4 combinations") {}
};

// Affine-in-control system dx/dt = xi(x) + g(x) u(x) with polynomial
// entries; g is n x m, u has m channels.
struct ControlSystem {
  ControlSystem(std::vector<std::string> vars, std::vector<Polynomial> xi,
                std::vector<std::vector<Polynomial>> g,
                std::vector<Polynomial> u);

  std::vector<std::string> vars;
  std::vector<Polynomial> xi;
  std::vector<std::vector<Polynomial>> g;  // n rows, m columns
  std::vector<Polynomial> u;               // m channels (may be empty)

  int dim() const { return static_cast<int>(vars.size()); }
  int inputs() const { return g.empty() ? 0 : static_cast<int>(g[0].size()); }
  bool g_vanishes_at_origin() const;

  VectorField closed_loop() const;
  VectorField closed_loop_with(const std::vector<Polynomial>& u_other) const;
};

// Verified against the same condition machinery as the uncontrolled case:
// the report is structurally identical to a stability report on the closed
// loop.
ConditionReport verify_control(const ControlSystem& sys, const DensitySpec& rho,
                               const ConditionSpec& spec,
                               const AnalysisOptions& opts);

// Finite search template: per input channel a list of basis polynomials,
// one grid of rational coefficients shared by every slot.
struct SynthesisTemplate {
  std::vector<std::vector<Polynomial>> basis;  // [channel][basis term]
  std::vector<Rational> grid;
  std::size_t combinations() const;
};

struct SynthesisResult {
  bool found = false;
  std::vector<Polynomial> u;
  ConditionReport report;
  std::uint64_t enumeration_index = 0;
  std::uint64_t candidates_tried = 0;
};

// Exhaustive lexicographic enumeration. Candidates are ranked by report
// grade (asymptotic everywhere, then fewest exceptional zero-set
// components), with ties broken by fewer nonzero coefficients, smaller
// |coefficient| sum, then enumeration order. Deterministic.
SynthesisResult synthesize(const ControlSystem& sys,
                           const SynthesisTemplate& tmpl, const DensitySpec& rho,
                           const ConditionSpec& spec,
                           const AnalysisOptions& opts);

}  // namespace divstab
