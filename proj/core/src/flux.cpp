#include "divstab/flux.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <thread>

#include "divstab/rng.hpp"

namespace divstab {

namespace {

constexpr double kZ99 = 2.58;           // two-sided 99% normal quantile
constexpr double kOriginCut = 1e-6;     // exclusion radius for singular parts
constexpr std::uint64_t kChunk = 8192;  // fixed accumulation granularity

double ball_volume(int n, double radius) {
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0) *
         std::pow(radius, n);
}

double sphere_area(int n, double radius) {
  return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0) *
         std::pow(radius, n - 1);
}

struct CompiledNormExpr {
  CompiledPoly weight;
  std::vector<std::pair<int, CompiledPoly>> parts;

  static CompiledNormExpr compile(const NormExpr& e) {
    CompiledNormExpr c;
    c.weight = CompiledPoly::compile(e.weight());
    for (const auto& [m, p] : e.parts()) {
      c.parts.emplace_back(m, CompiledPoly::compile(p));
    }
    return c;
  }

  double eval(const double* x) const {
    double w = weight.eval(x);
    double acc = 0.0;
    for (const auto& [m, cp] : parts) {
      double t = std::pow(w, m);
      acc += t * cp.eval(x);
    }
    return acc;
  }
};

// Deterministic chunked mean/variance accumulation: chunk boundaries are
// fixed, workers claim whole chunks, and the final reduction runs in chunk
// order, so the result is byte-identical for any worker count.
struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t used = 0;
};

template <typename SampleFn>
std::vector<ChunkSums> accumulate_chunks(std::uint64_t n, int workers,
                                         const SampleFn& fn) {
  std::uint64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkSums> chunks(nchunks);
  unsigned hw = std::thread::hardware_concurrency();
  int nw = workers > 0
               ? workers
               : static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
  if (n < 2 * kChunk) nw = 1;

  std::atomic<std::uint64_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      std::uint64_t lo = c * kChunk;
      std::uint64_t hi = std::min(n, lo + kChunk);
      ChunkSums& s = chunks[c];
      for (std::uint64_t i = lo; i < hi; ++i) {
        double v;
        if (fn(i, &v)) {
          s.sum += v;
          s.sum_sq += v * v;
        }
        ++s.used;
      }
    }
  };
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return chunks;
}

IntegralEstimate finish(const std::vector<ChunkSums>& chunks, double measure,
                        std::uint64_t n) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& c : chunks) {
    sum += c.sum;
    sum_sq += c.sum_sq;
  }
  double mean = sum / static_cast<double>(n);
  double var = 0.0;
  if (n > 1) {
    var = (sum_sq - sum * sum / static_cast<double>(n)) /
          static_cast<double>(n - 1);
    var = std::max(var, 0.0);
  }
  IntegralEstimate est;
  est.n_samples = n;
  est.mean = measure * mean;
  est.std_error = measure * std::sqrt(var / static_cast<double>(n));
  if (est.mean + kZ99 * est.std_error < 0.0) {
    est.sign = IntegralEstimate::Sign::Negative;
  } else if (est.mean - kZ99 * est.std_error > 0.0) {
    est.sign = IntegralEstimate::Sign::Positive;
  } else {
    est.sign = IntegralEstimate::Sign::Inconclusive;
  }
  return est;
}

// Affine map z -> x for quadratic-form regions: with P = L L^T, the image
// of the unit ball under x = sqrt(C) L^-T z is {x^T P x <= C}.
struct RegionMap {
  int n = 0;
  bool affine = false;
  double sqrtC = 1.0;
  Eigen::MatrixXd Linv_t;  // sqrt(C) * L^-T
  Eigen::MatrixXd L;
  double det_factor = 1.0;  // |det(d x / d z)|

  static RegionMap make(int n, const RegionSpec& region) {
    RegionMap m;
    m.n = n;
    m.sqrtC = std::sqrt(region.C);
    if (region.kind == RegionSpec::Kind::NormSq) {
      m.det_factor = std::pow(m.sqrtC, n);
      return m;
    }
    m.affine = true;
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) P(i, j) = region.P.a[i][j].get_d();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("region matrix is not positive definite");
    }
    m.L = llt.matrixL();
    m.Linv_t = m.sqrtC *
               m.L.transpose().triangularView<Eigen::Upper>().solve(
                   Eigen::MatrixXd::Identity(n, n));
    m.det_factor = std::abs(m.Linv_t.determinant());
    return m;
  }

  void map_point(const std::vector<double>& z, std::vector<double>* x) const {
    if (!affine) {
      for (int i = 0; i < n; ++i) (*x)[i] = sqrtC * z[i];
      return;
    }
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += Linv_t(i, j) * z[j];
      (*x)[i] = acc;
    }
  }

  // Surface area element of x = map(z) relative to the unit sphere at z.
  double surface_jacobian(const std::vector<double>& z) const {
    if (!affine) return std::pow(sqrtC, n - 1);
    Eigen::VectorXd zv(n);
    for (int i = 0; i < n; ++i) zv(i) = z[i];
    // dGamma = |det A| |A^-T z| dsigma with A = sqrt(C) L^-T.
    Eigen::VectorXd col = (1.0 / sqrtC) * (L * zv);
    return det_factor * col.norm();
  }
};

void check_integrability(const NormExpr& g, int n, IntegralEstimate* est) {
  NormExpr norm = g.normalized();
  bool negative_power = false;
  for (const auto& [m, p] : norm.parts()) {
    if (m < 0) {
      negative_power = true;
      if (2 * m + p.low_total_degree() <= -n) throw NonIntegrableNearOrigin();
    }
  }
  if (negative_power) {
    est->origin_excluded = true;
    est->note = "integrand excluded on |x| < 1e-6 (negative weight power)";
  }
}

}  // namespace

RegionSpec RegionSpec::quad_form(SymMatrixQ P, double C) {
  if (!P.is_positive_definite()) {
    throw std::invalid_argument("region matrix must be positive definite");
  }
  RegionSpec r;
  r.kind = Kind::QuadForm;
  r.C = C;
  r.P = std::move(P);
  return r;
}

std::string IntegralEstimate::sign_string() const {
  switch (sign) {
    case Sign::Negative: return "Negative";
    case Sign::Positive: return "Positive";
    case Sign::Inconclusive: return "Inconclusive";
  }
  return "";
}

IntegralEstimate volume_integral(const NormExpr& g, const RegionSpec& region,
                                 const FluxOptions& opts) {
  if (region.C <= 0) throw std::invalid_argument("level C must be > 0");
  int n = g.nvars();
  IntegralEstimate pre;
  check_integrability(g, n, &pre);

  RegionMap map = RegionMap::make(n, region);
  double volume = ball_volume(n, 1.0) * map.det_factor;
  CompiledNormExpr cg = CompiledNormExpr::compile(g);
  bool excl = pre.origin_excluded;

  auto chunks = accumulate_chunks(
      opts.n, opts.workers, [&](std::uint64_t i, double* out) {
        SampleRng rng = SampleRng::for_index(opts.seed, i);
        std::vector<double> z = rng.ball_point(n, 1.0);
        std::vector<double> x(n);
        map.map_point(z, &x);
        if (excl) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          if (r2 < kOriginCut * kOriginCut) {
            *out = 0.0;
            return true;  // integrand defined as 0 on the excluded core
          }
        }
        *out = cg.eval(x.data());
        return true;
      });

  IntegralEstimate est = finish(chunks, volume, opts.n);
  est.origin_excluded = pre.origin_excluded;
  est.note = pre.note;
  return est;
}

IntegralEstimate surface_flux(const VectorField& f, const DensitySpec& rho,
                              const RegionSpec& region,
                              const FluxOptions& opts) {
  if (region.C <= 0) throw std::invalid_argument("level C must be > 0");
  int n = f.dim();
  RegionMap map = RegionMap::make(n, region);

  std::vector<CompiledPoly> cf;
  for (const auto& c : f.components()) cf.push_back(CompiledPoly::compile(c));
  CompiledPoly crho = CompiledPoly::compile(rho.as_polynomial());

  // grad S: 2x for S = |x|^2, 2Px for the quadratic form.
  Eigen::MatrixXd P;
  if (region.kind == RegionSpec::Kind::QuadForm) {
    P.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) P(i, j) = region.P.a[i][j].get_d();
    }
  }

  double area_unit = sphere_area(n, 1.0);
  auto chunks = accumulate_chunks(
      opts.n, opts.workers, [&](std::uint64_t i, double* out) {
        SampleRng rng = SampleRng::for_index(opts.seed, i);
        std::vector<double> z = rng.sphere_point(n, 1.0);
        std::vector<double> x(n);
        map.map_point(z, &x);

        std::vector<double> grad(n);
        if (region.kind == RegionSpec::Kind::NormSq) {
          for (int k = 0; k < n; ++k) grad[k] = 2.0 * x[k];
        } else {
          for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += P(k, j) * x[j];
            grad[k] = 2.0 * acc;
          }
        }
        double gnorm = 0.0, fdotg = 0.0;
        for (int k = 0; k < n; ++k) {
          double fk = cf[k].eval(x.data());
          fdotg += fk * grad[k];
          gnorm += grad[k] * grad[k];
        }
        gnorm = std::sqrt(gnorm);
        double h = crho.eval(x.data()) * fdotg / gnorm;
        *out = h * map.surface_jacobian(z);
        return true;
      });

  return finish(chunks, area_unit, opts.n);
}

IntegralEstimate shell_integral(const NormExpr& g, const RegionSpec& region,
                                double r_out_factor, const FluxOptions& opts) {
  if (region.C <= 0) throw std::invalid_argument("level C must be > 0");
  if (r_out_factor <= 1.0) {
    throw std::invalid_argument("r_out_factor must exceed 1");
  }
  int n = g.nvars();
  double s_lo = 1.0 / region.C;
  double s_hi = r_out_factor / region.C;
  // Uniform sampling of {s_lo <= S <= s_hi}: radii in the z-ball picture.
  double r_lo = std::sqrt(s_lo);
  double r_hi = std::sqrt(s_hi);

  RegionSpec unit = region;
  unit.C = 1.0;
  RegionMap map = RegionMap::make(n, unit);
  double shell_volume = ball_volume(n, 1.0) * map.det_factor *
                        (std::pow(r_hi, n) - std::pow(r_lo, n));
  CompiledNormExpr cg = CompiledNormExpr::compile(g);

  auto chunks = accumulate_chunks(
      opts.n, opts.workers, [&](std::uint64_t i, double* out) {
        SampleRng rng = SampleRng::for_index(opts.seed, i);
        std::vector<double> z = rng.sphere_point(n, 1.0);
        double u = rng.uniform01();
        double r = std::pow(std::pow(r_lo, n) +
                                u * (std::pow(r_hi, n) - std::pow(r_lo, n)),
                            1.0 / n);
        for (double& c : z) c *= r;
        std::vector<double> x(n);
        map.map_point(z, &x);
        *out = cg.eval(x.data());
        return true;
      });

  IntegralEstimate est = finish(chunks, shell_volume, opts.n);
  est.note = "exterior region truncated at S = " + std::to_string(s_hi);
  return est;
}

}  // namespace divstab
