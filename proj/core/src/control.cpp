#include "divstab/control.hpp"

namespace divstab {

ControlSystem::ControlSystem(std::vector<std::string> vars_,
                             std::vector<Polynomial> xi_,
                             std::vector<std::vector<Polynomial>> g_,
                             std::vector<Polynomial> u_)
    : vars(std::move(vars_)),
      xi(std::move(xi_)),
      g(std::move(g_)),
      u(std::move(u_)) {
  const int n = static_cast<int>(vars.size());
  if (static_cast<int>(xi.size()) != n || static_cast<int>(g.size()) != n) {
    throw std::invalid_argument("control system arity mismatch");
  }
  const std::size_t m = g.empty() ? 0 : g[0].size();
  for (const auto& row : g) {
    if (row.size() != m) throw std::invalid_argument("ragged g matrix");
  }
  if (!u.empty() && u.size() != m) {
    throw std::invalid_argument("control law channel count mismatch");
  }
  for (const auto& p : xi) {
    if (p.constant_term() != 0) {
      throw NonEquilibrium();  // xi(0) = 0 is a standing assumption
    }
  }
}

bool ControlSystem::g_vanishes_at_origin() const {
  for (const auto& row : g) {
    for (const auto& p : row) {
      if (p.constant_term() != 0) return false;
    }
  }
  return true;
}

VectorField ControlSystem::closed_loop() const {
  if (u.empty()) {
    throw std::invalid_argument("no control law supplied");
  }
  return closed_loop_with(u);
}

VectorField ControlSystem::closed_loop_with(
    const std::vector<Polynomial>& u_other) const {
  if (static_cast<int>(u_other.size()) != inputs()) {
    throw std::invalid_argument("control law channel count mismatch");
  }
  std::vector<Polynomial> comps;
  comps.reserve(dim());
  for (int i = 0; i < dim(); ++i) {
    Polynomial c = xi[i];
    for (int j = 0; j < inputs(); ++j) c += g[i][j] * u_other[j];
    comps.push_back(std::move(c));
  }
  return VectorField(vars, std::move(comps));
}

ConditionReport verify_control(const ControlSystem& sys, const DensitySpec& rho,
                               const ConditionSpec& spec,
                               const AnalysisOptions& opts) {
  VectorField f = sys.closed_loop();
  if (!f.equilibrium_at_origin()) throw NonEquilibrium();
  ConditionSpec s = spec;
  s.theorem = ConditionSpec::Theorem::Control;
  ConditionReport rep = evaluate_stability(f, rho, s, opts);
  if (!sys.g_vanishes_at_origin() && rep.note.empty()) {
    rep.note = "g(0) != 0; the closed loop still has an equilibrium at 0";
  }
  return rep;
}

std::size_t SynthesisTemplate::combinations() const {
  std::size_t slots = 0;
  for (const auto& ch : basis) slots += ch.size();
  if (grid.empty() || slots == 0) return 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    if (total > 100000) return total;
    total *= grid.size();
  }
  return total;
}

namespace {

struct CandidateRank {
  int grade;          // higher is better
  int advisory;       // statement-form origin limit held (1) or not (0)
  int codim1;         // fewer is better
  int components;     // fewer is better
  int nonzero;        // fewer is better
  double abs_sum;     // smaller is better
  std::uint64_t idx;  // earlier is better

  bool better_than(const CandidateRank& o) const {
    if (grade != o.grade) return grade > o.grade;
    if (advisory != o.advisory) return advisory > o.advisory;
    if (codim1 != o.codim1) return codim1 < o.codim1;
    if (components != o.components) return components < o.components;
    if (nonzero != o.nonzero) return nonzero < o.nonzero;
    if (abs_sum != o.abs_sum) return abs_sum < o.abs_sum;
    return idx < o.idx;
  }
};

}  // namespace

SynthesisResult synthesize(const ControlSystem& sys,
                           const SynthesisTemplate& tmpl, const DensitySpec& rho,
                           const ConditionSpec& spec,
                           const AnalysisOptions& opts) {
  std::size_t total = tmpl.combinations();
  if (total == 0) throw std::invalid_argument("empty synthesis template");
  if (total > 10000) throw TemplateTooLarge();

  std::size_t slots = 0;
  for (const auto& ch : tmpl.basis) slots += ch.size();

  SynthesisResult best;
  CandidateRank best_rank{};
  bool have_best = false;

  std::vector<std::size_t> digits(slots, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    // Lexicographic: the first slot is the most significant digit.
    std::uint64_t rem = idx;
    for (std::size_t s = slots; s-- > 0;) {
      digits[s] = rem % tmpl.grid.size();
      rem /= tmpl.grid.size();
    }

    std::vector<Polynomial> u;
    int nonzero = 0;
    Rational abs_sum = 0;
    std::size_t slot = 0;
    for (const auto& ch : tmpl.basis) {
      Polynomial uc(sys.dim());
      for (const auto& b : ch) {
        const Rational& coef = tmpl.grid[digits[slot++]];
        if (coef != 0) {
          uc += b * coef;
          ++nonzero;
          abs_sum += abs(coef);
        }
      }
      u.push_back(std::move(uc));
    }

    ConditionReport rep;
    try {
      VectorField f = sys.closed_loop_with(u);
      rep = evaluate_stability(f, rho, spec, opts);
    } catch (const NonEquilibrium&) {
      continue;
    }
    if (rep.overall != Overall::Holds || rep.empirical) continue;
    bool all_proven = true;
    for (const auto& c : rep.clauses) all_proven &= c.verdict.proven();
    if (!all_proven) continue;

    CandidateRank rank{rep.grade(), rep.advisory_ok() ? 1 : 0,
                       rep.exceptional_set.codim1_components(),
                       static_cast<int>(rep.exceptional_set.components.size()),
                       nonzero, abs_sum.get_d(), idx};
    if (!have_best || rank.better_than(best_rank)) {
      have_best = true;
      best_rank = rank;
      best.found = true;
      best.u = u;
      best.report = rep;
      best.enumeration_index = idx;
    }
  }
  best.candidates_tried = total;
  return best;
}

}  // namespace divstab
