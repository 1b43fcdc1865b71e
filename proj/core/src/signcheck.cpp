#include "divstab/signcheck.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "divstab/rng.hpp"

namespace divstab {

namespace {
constexpr double kSampleTol = 1e-12;
constexpr double kEigRelTol = 1e-10;
}  // namespace

bool sign_req_is_strict(SignReq r) {
  return r == SignReq::LT || r == SignReq::GT;
}

int sign_req_direction(SignReq r) {
  return (r == SignReq::LE || r == SignReq::LT) ? -1 : +1;
}

std::string sign_req_to_string(SignReq r) {
  switch (r) {
    case SignReq::LE: return "<= 0";
    case SignReq::LT: return "< 0";
    case SignReq::GE: return ">= 0";
    case SignReq::GT: return "> 0";
  }
  return "";
}

bool ZeroSetDesc::subset_of_origin(int nvars) const {
  for (const auto& comp : components) {
    if (static_cast<int>(comp.size()) != nvars) return false;
  }
  return true;
}

int ZeroSetDesc::codim1_components() const {
  int k = 0;
  for (const auto& comp : components) {
    if (comp.size() == 1) ++k;
  }
  return k;
}

std::string ZeroSetDesc::describe(const std::vector<std::string>& vars) const {
  if (components.empty()) return "{}";
  std::ostringstream out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (c > 0) out << " u ";
    if (components[c].empty()) {
      out << "R^n";
      continue;
    }
    out << "{";
    for (std::size_t i = 0; i < components[c].size(); ++i) {
      if (i > 0) out << "=";
      out << vars.at(components[c][i]);
    }
    out << "=0}";
  }
  return out.str();
}

ZeroSetDesc ZeroSetDesc::unite(const ZeroSetDesc& a, const ZeroSetDesc& b) {
  ZeroSetDesc u = a;
  for (const auto& comp : b.components) {
    if (std::find(u.components.begin(), u.components.end(), comp) ==
        u.components.end()) {
      u.components.push_back(comp);
    }
  }
  std::sort(u.components.begin(), u.components.end());
  return u;
}

std::string Region::describe(const std::vector<std::string>& vars) const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Ball:
      out << "ball(r=" << radius << ") \\ {0}";
      break;
    case Kind::AllSpace:
      out << "R^n \\ {0}";
      break;
    case Kind::USet:
      out << "U = {|x| <= " << radius << ", " << u_rho->to_string(vars)
          << " > 0}";
      break;
  }
  return out.str();
}

std::string SignVerdict::to_string(const std::vector<std::string>& vars) const {
  std::ostringstream out;
  switch (status) {
    case Status::Proven: {
      const char* m = method == Method::EvenMonomial ? "EvenMonomial"
                      : method == Method::QuadForm   ? "QuadForm"
                                                     : "SOSDiagonal";
      out << "Proven(" << m << ")";
      if (!zero_set.empty()) out << " zero_set=" << zero_set.describe(vars);
      if (strict_on_region) out << " strict";
      break;
    }
    case Status::Refuted: {
      out << "Refuted witness=(";
      for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i > 0) out << ",";
        out << witness[i].get_d();
      }
      out << ") value=" << witness_value;
      break;
    }
    case Status::Undetermined:
      out << "Undetermined samples=" << samples_used;
      break;
  }
  if (!note.empty()) out << " [" << note << "]";
  return out.str();
}

namespace {

// ---------------------------------------------------------------------------
// Exact paths
// ---------------------------------------------------------------------------

// Zero locus of a same-sign even-monomial polynomial: q vanishes exactly
// where every monomial does, i.e. on the union of coordinate subspaces
// given by the minimal hitting sets of the monomial supports.
ZeroSetDesc even_monomial_zero_set(const Polynomial& q) {
  int n = q.nvars();
  std::vector<std::vector<int>> supports;
  for (const auto& [e, c] : q.terms()) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (e[i] > 0) s.push_back(i);
    }
    if (s.empty()) return ZeroSetDesc{};  // nonzero constant term: never 0
    supports.push_back(std::move(s));
  }
  ZeroSetDesc z;
  if (n > 16) return z;  // keep the subset enumeration bounded
  std::vector<unsigned> hitting;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    bool hits_all = true;
    for (const auto& s : supports) {
      bool hit = false;
      for (int i : s) {
        if (mask & (1u << i)) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        hits_all = false;
        break;
      }
    }
    if (!hits_all) continue;
    bool minimal = true;
    for (unsigned h : hitting) {
      if ((h & mask) == h) {
        minimal = false;
        break;
      }
    }
    if (minimal) hitting.push_back(mask);
  }
  for (unsigned mask : hitting) {
    std::vector<int> comp;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) comp.push_back(i);
    }
    z.components.push_back(std::move(comp));
  }
  std::sort(z.components.begin(), z.components.end());
  return z;
}

std::optional<SignVerdict> try_even_monomial(const Polynomial& q, int dir) {
  if (!q.all_exponents_even()) return std::nullopt;
  for (const auto& [e, c] : q.terms()) {
    if (sign_of(c) != dir) return std::nullopt;
  }
  SignVerdict v;
  v.status = SignVerdict::Status::Proven;
  v.method = SignVerdict::Method::EvenMonomial;
  v.zero_set = even_monomial_zero_set(q);
  return v;
}

// Semidefiniteness of a quadratic form via eigenvalues of its Gram matrix.
// `remap` translates variable indices of q back to the caller's indexing
// (used by the y = x^2 substitution path).
std::optional<SignVerdict> try_quadform(const Polynomial& q, int dir,
                                        SignVerdict::Method tag) {
  auto gram = q.quadratic_form_matrix();
  if (!gram) return std::nullopt;
  int n = q.nvars();

  // Variables with an all-zero row lie in the kernel axis-wise.
  std::vector<int> appearing;
  for (int i = 0; i < n; ++i) {
    bool nonzero = false;
    for (int j = 0; j < n; ++j) {
      if ((*gram)[i][j] != 0) nonzero = true;
    }
    if (nonzero) appearing.push_back(i);
  }
  int k = static_cast<int>(appearing.size());
  if (k == 0) return std::nullopt;  // zero polynomial, handled by caller

  Eigen::MatrixXd g(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      g(i, j) = (*gram)[appearing[i]][appearing[j]].get_d();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  double tol = kEigRelTol * std::max(1.0, g.norm());
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();

  bool semidefinite = (dir < 0) ? (hi <= tol) : (lo >= -tol);
  if (!semidefinite) return std::nullopt;
  bool definite_on_appearing = (dir < 0) ? (hi < -tol) : (lo > tol);

  SignVerdict v;
  v.status = SignVerdict::Status::Proven;
  v.method = tag;
  if (definite_on_appearing) {
    // Vanishes exactly where all appearing variables vanish.
    v.zero_set.components.push_back(appearing);
  } else {
    v.note = "quadratic form is semidefinite with a non-axis kernel";
  }
  return v;
}

std::optional<SignVerdict> try_exact(const Polynomial& q, int dir) {
  if (auto v = try_even_monomial(q, dir)) return v;
  if (auto v = try_quadform(q, dir, SignVerdict::Method::QuadForm)) return v;
  if (q.all_exponents_even()) {
    Polynomial y = q.substitute_squares();
    if (auto v = try_quadform(y, dir, SignVerdict::Method::SOSDiagonal)) {
      // y_i = 0 iff x_i = 0, so the zero-set description carries over.
      return v;
    }
  }
  return std::nullopt;
}

// Exact proof that p <= 0 everywhere (used to show a zero-set component
// carries no points of {rho > 0}).
bool provably_nonpositive(const Polynomial& p) {
  if (p.is_zero()) return true;
  return try_exact(p, -1).has_value();
}

Polynomial restrict_to_component(const Polynomial& p,
                                 const std::vector<int>& zero_vars) {
  std::map<Exponents, Rational> kept;
  for (const auto& [e, c] : p.terms()) {
    bool drop = false;
    for (int i : zero_vars) {
      if (e[i] > 0) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.emplace(e, c);
  }
  return Polynomial::from_terms(p.nvars(), kept);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> probe_points(int n, const Region& region) {
  double scale = region.kind == Region::Kind::AllSpace ? 1.0 : region.radius;
  std::vector<std::vector<double>> pts;
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  dirs.push_back(ones);

  for (const auto& d : dirs) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = scale * d[i];
    pts.push_back(std::move(p));
  }
  if (region.kind == Region::Kind::AllSpace) {
    for (const auto& d : dirs) {
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) p[i] = 10.0 * d[i];
      pts.push_back(std::move(p));
    }
  }
  // Stability clauses concentrate their behavior near the origin; probe a
  // ladder of shrinking radii along every direction.
  double base = std::min(scale, 1.0);
  for (int k = 1; k <= 6; ++k) {
    double r = base * std::pow(10.0, -k);
    for (const auto& d : dirs) {
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) p[i] = r * d[i];
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

bool float_violates(double v, int dir) {
  return dir < 0 ? v > kSampleTol : v < -kSampleTol;
}

bool exact_violates(const Polynomial& q, const std::vector<Rational>& x,
                    int dir) {
  Rational v = q.evaluate(x);
  return dir < 0 ? v > 0 : v < 0;
}

std::vector<Rational> to_rational_point(const std::vector<double>& x) {
  std::vector<Rational> r;
  r.reserve(x.size());
  for (double c : x) r.push_back(rational_from_double(c));
  return r;
}

bool point_in_region(const std::vector<double>& x, const Region& region,
                     const CompiledPoly* rho) {
  if (region.kind != Region::Kind::USet) return true;
  double n2 = 0.0;
  for (double c : x) n2 += c * c;
  if (n2 > region.radius * region.radius * (1.0 + 1e-12)) return false;
  return rho->eval(x.data()) > 0.0;
}

struct SampleOutcome {
  bool refuted = false;
  std::uint64_t index = 0;
  std::vector<double> point;
  double value = 0.0;
  std::uint64_t accepted = 0;
};

SampleOutcome run_samples(const Polynomial& q, int dir, const Region& region,
                          const CheckOptions& opts, bool on_sphere) {
  CompiledPoly cq = CompiledPoly::compile(q);
  std::optional<CompiledPoly> crho;
  if (region.kind == Region::Kind::USet) {
    crho = CompiledPoly::compile(*region.u_rho);
  }
  int n = q.nvars();
  double radius = region.kind == Region::Kind::AllSpace ? 1.0 : region.radius;

  unsigned hw = std::thread::hardware_concurrency();
  int workers = opts.workers > 0 ? opts.workers
                                 : static_cast<int>(std::min<unsigned>(
                                       hw == 0 ? 1 : hw, 8));
  if (opts.samples < 4096) workers = 1;

  std::atomic<std::uint64_t> best{UINT64_MAX};
  std::vector<SampleOutcome> partial(workers);
  std::vector<std::thread> pool;
  std::uint64_t chunk = (opts.samples + workers - 1) / workers;

  auto work = [&](int w) {
    std::uint64_t lo = w * chunk;
    std::uint64_t hi = std::min<std::uint64_t>(opts.samples, lo + chunk);
    SampleOutcome& out = partial[w];
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (best.load(std::memory_order_relaxed) < lo) return;
      SampleRng rng = SampleRng::for_index(opts.seed, i);
      std::vector<double> x =
          on_sphere ? rng.sphere_point(n, 1.0) : rng.ball_point(n, radius);
      if (region.kind == Region::Kind::USet) {
        if (!point_in_region(x, region, &*crho)) continue;
        out.accepted++;
      }
      double v = cq.eval(x.data());
      if (float_violates(v, dir)) {
        if (exact_violates(q, to_rational_point(x), dir)) {
          out.refuted = true;
          out.index = i;
          out.point = x;
          out.value = v;
          std::uint64_t prev = best.load(std::memory_order_relaxed);
          while (i < prev &&
                 !best.compare_exchange_weak(prev, i,
                                             std::memory_order_relaxed)) {
          }
          return;
        }
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // First refutation by sample index wins, regardless of worker count.
  SampleOutcome merged;
  for (const auto& p : partial) {
    merged.accepted += p.accepted;
    if (p.refuted && (!merged.refuted || p.index < merged.index)) {
      merged.refuted = true;
      merged.index = p.index;
      merged.point = p.point;
      merged.value = p.value;
    }
  }
  return merged;
}

}  // namespace

SignVerdict check_sign(const Polynomial& q, SignReq req, const Region& region,
                       const CheckOptions& opts) {
  int dir = sign_req_direction(req);
  int n = q.nvars();

  if (q.is_zero()) {
    SignVerdict v;
    if (sign_req_is_strict(req)) {
      v.status = SignVerdict::Status::Refuted;
      v.witness.assign(n, Rational(0));
      v.witness[0] = 1;
      v.witness_value = 0.0;
      v.note = "expression is identically zero";
    } else {
      v.status = SignVerdict::Status::Proven;
      v.method = SignVerdict::Method::EvenMonomial;
      v.zero_set.components.push_back({});  // vanishes everywhere
      v.note = "expression is identically zero";
    }
    return v;
  }

  if (auto exact = try_exact(q, dir)) {
    SignVerdict v = *exact;
    if (region.kind == Region::Kind::USet) {
      // The proof holds on the whole space; strictness on U needs the zero
      // set to miss {rho > 0}.
      bool strict = true;
      if (!v.zero_set.subset_of_origin(n)) {
        for (const auto& comp : v.zero_set.components) {
          Polynomial rho_restricted =
              restrict_to_component(*region.u_rho, comp);
          if (!provably_nonpositive(rho_restricted)) {
            strict = false;
            break;
          }
        }
      }
      if (!v.note.empty() && !v.zero_set.subset_of_origin(n)) strict = false;
      v.strict_on_region = strict;
    } else {
      v.strict_on_region =
          v.zero_set.subset_of_origin(n) && v.note.empty();
    }
    return v;
  }

  // Deterministic probes run before the seeded samples.
  std::uint64_t accepted_probes = 0;
  for (const auto& p : probe_points(n, region)) {
    if (region.kind == Region::Kind::USet) {
      std::vector<Rational> xr = to_rational_point(p);
      // exact membership: rho(x) > 0 and inside the ball
      Rational rv = region.u_rho->evaluate(xr);
      double n2 = 0.0;
      for (double c : p) n2 += c * c;
      if (rv <= 0 || n2 > region.radius * region.radius * (1.0 + 1e-12)) {
        continue;
      }
      ++accepted_probes;
    }
    double v = q.evaluate(p);
    if (float_violates(v, dir)) {
      std::vector<Rational> xr = to_rational_point(p);
      if (exact_violates(q, xr, dir)) {
        SignVerdict out;
        out.status = SignVerdict::Status::Refuted;
        out.witness = xr;
        out.witness_value = v;
        out.note = "deterministic probe";
        return out;
      }
    }
  }

  bool on_sphere = region.kind != Region::Kind::USet && q.is_homogeneous();
  SampleOutcome s = run_samples(q, dir, region, opts, on_sphere);
  if (s.refuted) {
    SignVerdict out;
    out.status = SignVerdict::Status::Refuted;
    out.witness = to_rational_point(s.point);
    out.witness_value = s.value;
    out.witness_index = s.index;
    return out;
  }
  if (region.kind == Region::Kind::USet &&
      s.accepted + accepted_probes == 0) {
    throw EmptyU();
  }
  SignVerdict out;
  out.status = SignVerdict::Status::Undetermined;
  out.samples_used =
      region.kind == Region::Kind::USet ? s.accepted : opts.samples;
  if (on_sphere) out.note = "homogeneous: sampled on the unit sphere";
  return out;
}

SignVerdict check_sign_on_U(const Polynomial& q, const Polynomial& rho,
                            SignReq req, double r, const CheckOptions& opts) {
  return check_sign(q, req, Region::u_set(rho, r), opts);
}

}  // namespace divstab
