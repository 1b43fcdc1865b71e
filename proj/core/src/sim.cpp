#include "divstab/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace divstab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth-minus-fourth-order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights for the fourth-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

struct FieldEval {
  std::vector<CompiledPoly> comps;
  int n;
  explicit FieldEval(const VectorField& f) : n(f.dim()) {
    for (const auto& c : f.components()) comps.push_back(CompiledPoly::compile(c));
  }
  bool operator()(const std::vector<double>& x, std::vector<double>* out) const {
    for (int i = 0; i < n; ++i) {
      double v = comps[i].eval(x.data());
      if (!std::isfinite(v)) return false;
      (*out)[i] = v;
    }
    return true;
  }
};

}  // namespace

void TrajectoryRecord::StepInterp::eval(double t, int dim, double* out) const {
  double theta = (t - t0) / h;
  double th1 = 1.0 - theta;
  for (int i = 0; i < dim; ++i) {
    const double* c = cont.data() + 5 * i;
    out[i] = c[0] + theta * (c[1] + th1 * (c[2] + theta * (c[3] + th1 * c[4])));
  }
}

double TrajectoryRecord::norm_at(std::size_t j) const { return norm2(x[j]); }

std::string Classification::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::ConvergedToOrigin:
      std::snprintf(buf, sizeof buf, "ConvergedToOrigin(t_hit=%.6g)", t_hit);
      return buf;
    case Kind::Escaped:
      std::snprintf(buf, sizeof buf, "Escaped(t_exit=%.6g)", t_exit);
      return buf;
    case Kind::Periodic:
      std::snprintf(buf, sizeof buf, "Periodic(period=%.6g)", period_estimate);
      return buf;
    case Kind::Undecided:
      return "Undecided";
  }
  return "";
}

TrajectoryRecord integrate(const VectorField& f, const std::vector<double>& x0,
                           const SimSettings& settings) {
  if (static_cast<int>(x0.size()) != f.dim()) {
    throw std::invalid_argument("initial condition arity mismatch");
  }
  if (settings.T <= 0) throw std::invalid_argument("horizon must be > 0");
  if (settings.tol < 1e-12 || settings.tol > 1e-3) {
    throw std::invalid_argument("tol must lie in [1e-12, 1e-3]");
  }
  const int n = f.dim();
  const double T = settings.T;
  const double h_min = 1e-12 * T;
  const double escape_cutoff = 4.0 * settings.R_escape;

  FieldEval eval(f);
  TrajectoryRecord rec;
  rec.params = settings;

  const int N = std::max(settings.n_samples, 2);
  const double dt_out = T / (N - 1);
  int next_out = 0;

  std::vector<double> y = x0, ynew(n), k1(n), k2(n), k3(n), k4(n), k5(n),
                      k6(n), k7(n), ytmp(n), yerr(n), dense_buf(n);

  auto emit = [&](double t_sample, const std::vector<double>& state) {
    rec.t.push_back(t_sample);
    rec.x.push_back(state);
  };

  if (!eval(y, &k1)) {
    rec.stop_reason = TrajectoryRecord::StopReason::NonFinite;
    rec.t_stop = 0.0;
    emit(0.0, y);
    return rec;
  }
  emit(0.0, y);
  next_out = 1;

  double t = 0.0;
  double h = std::min(T / 100.0, 0.01 * (1.0 + norm2(y)) / (1.0 + norm2(k1)));
  h = std::max(h, h_min * 10);

  bool stop = false;
  while (t < T && !stop) {
    if (h < h_min) throw StepUnderflow(t);
    if (t + h > T) h = T - t;

    bool finite = true;
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    finite = finite && eval(ytmp, &k2);
    if (finite) {
      for (int i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      finite = finite && eval(ytmp, &k3);
    }
    if (finite) {
      for (int i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      finite = finite && eval(ytmp, &k4);
    }
    if (finite) {
      for (int i = 0; i < n; ++i)
        ytmp[i] = y[i] +
                  h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      finite = finite && eval(ytmp, &k5);
    }
    if (finite) {
      for (int i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                              a64 * k4[i] + a65 * k5[i]);
      finite = finite && eval(ytmp, &k6);
    }
    if (finite) {
      for (int i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                              b5 * k5[i] + b6 * k6[i]);
      finite = finite && eval(ynew, &k7);
    }
    if (!finite) {
      h *= 0.25;
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
      err += yerr[i] * yerr[i];
    }
    err = std::sqrt(err);
    double sc = settings.tol * (1.0 + norm2(y));

    if (err > sc) {
      double fac = std::max(0.2, 0.9 * std::pow(sc / err, 0.2));
      h *= fac;
      continue;
    }

    // Accepted: build the dense-output coefficients for this step.
    TrajectoryRecord::StepInterp interp;
    interp.t0 = t;
    interp.h = h;
    interp.cont.resize(5 * n);
    for (int i = 0; i < n; ++i) {
      double ydiff = ynew[i] - y[i];
      double bspl = h * k1[i] - ydiff;
      double* c = interp.cont.data() + 5 * i;
      c[0] = y[i];
      c[1] = ydiff;
      c[2] = bspl;
      c[3] = ydiff - h * k7[i] - bspl;
      c[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                  d6 * k6[i] + d7 * k7[i]);
    }

    double t_new = t + h;
    while (next_out < N && next_out * dt_out <= t_new + 1e-14 * T) {
      double ts = next_out * dt_out;
      interp.eval(ts, n, dense_buf.data());
      emit(ts, dense_buf);
      ++next_out;
    }
    if (rec.dense_complete) {
      if (rec.dense.size() < settings.dense_steps_cap) {
        rec.dense.push_back(std::move(interp));
      } else {
        rec.dense.clear();
        rec.dense_complete = false;
      }
    }

    t = t_new;
    y = ynew;
    k1 = k7;  // FSAL
    ++rec.steps;

    if (norm2(y) > escape_cutoff) {
      rec.stop_reason = TrajectoryRecord::StopReason::Escaped;
      stop = true;
      if (rec.t.empty() || rec.t.back() < t) emit(t, y);
      break;
    }

    double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(sc / std::max(err, 1e-300), 0.2)));
    h *= fac;
  }

  rec.t_stop = t;
  if (!stop && (rec.t.empty() || rec.t.back() < T - 1e-12 * T)) emit(T, y);
  rec.classification = classify(rec, settings.eps_conv, settings.R_escape);
  return rec;
}

Classification classify(const TrajectoryRecord& rec, double eps_conv,
                        double R_escape) {
  Classification cls;
  const std::size_t N = rec.t.size();
  if (N == 0) return cls;

  for (std::size_t j = 0; j < N; ++j) {
    if (rec.norm_at(j) > R_escape) {
      cls.kind = Classification::Kind::Escaped;
      cls.t_exit = rec.t[j];
      return cls;
    }
  }
  if (rec.stop_reason == TrajectoryRecord::StopReason::Escaped) {
    cls.kind = Classification::Kind::Escaped;
    cls.t_exit = rec.t_stop;
    return cls;
  }
  if (rec.stop_reason == TrajectoryRecord::StopReason::NonFinite) {
    return cls;  // Undecided
  }

  // Converged: below eps from some sample on, through the horizon.
  std::size_t first_below = N;
  for (std::size_t j = N; j-- > 0;) {
    if (rec.norm_at(j) < eps_conv) {
      first_below = j;
    } else {
      break;
    }
  }
  if (first_below < N && rec.norm_at(N - 1) < eps_conv) {
    cls.kind = Classification::Kind::ConvergedToOrigin;
    cls.t_hit = rec.t[first_below];
    return cls;
  }

  // Periodic: refined near-returns to the initial state with a consistent
  // period over at least three returns.
  if (!rec.dense_complete || rec.dense.empty()) return cls;
  const std::vector<double>& x0 = rec.x[0];
  const int dim = static_cast<int>(x0.size());
  double scale = std::max(norm2(x0), 0.1);

  auto dist_at = [&](double tq) {
    // Locate the step containing tq (steps are time-ordered).
    std::size_t lo = 0, hi = rec.dense.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (rec.dense[mid].t0 <= tq) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    std::vector<double> buf(dim);
    rec.dense[lo].eval(tq, dim, buf.data());
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = buf[i] - x0[i];
      s += d * d;
    }
    return std::sqrt(s);
  };

  std::vector<double> returns;
  bool armed = false;
  for (std::size_t j = 1; j + 1 < N; ++j) {
    double dj = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = rec.x[j][i] - x0[i];
      dj += d * d;
    }
    dj = std::sqrt(dj);
    if (dj > 0.5 * scale) {
      armed = true;
      continue;
    }
    if (!armed || dj > 0.2 * scale) continue;
    double dprev = 0.0, dnext = 0.0;
    for (int i = 0; i < dim; ++i) {
      double a = rec.x[j - 1][i] - x0[i];
      double b = rec.x[j + 1][i] - x0[i];
      dprev += a * a;
      dnext += b * b;
    }
    dprev = std::sqrt(dprev);
    dnext = std::sqrt(dnext);
    if (dj > dprev || dj > dnext) continue;  // not a local minimum

    // Golden-section refinement of the near-return time.
    double a = rec.t[j - 1], b = rec.t[j + 1];
    const double gr = 0.6180339887498949;
    double c1 = b - gr * (b - a), c2v = a + gr * (b - a);
    double f1 = dist_at(c1), f2 = dist_at(c2v);
    for (int it = 0; it < 60 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
      if (f1 < f2) {
        b = c2v;
        c2v = c1;
        f2 = f1;
        c1 = b - gr * (b - a);
        f1 = dist_at(c1);
      } else {
        a = c1;
        c1 = c2v;
        f1 = f2;
        c2v = a + gr * (b - a);
        f2 = dist_at(c2v);
      }
    }
    double tstar = 0.5 * (a + b);
    if (dist_at(tstar) < 1e-4) {
      returns.push_back(tstar);
      armed = false;
    }
  }

  if (returns.size() >= 3) {
    std::vector<double> periods;
    for (std::size_t i = 1; i < returns.size(); ++i) {
      periods.push_back(returns[i] - returns[i - 1]);
    }
    double mean = 0.0;
    for (double p : periods) mean += p;
    mean /= periods.size();
    bool consistent = true;
    for (double p : periods) {
      if (std::abs(p - mean) > 0.01 * mean) consistent = false;
    }
    if (consistent && mean > 0.0) {
      cls.kind = Classification::Kind::Periodic;
      cls.period_estimate = mean;
      return cls;
    }
  }
  return cls;
}

std::vector<TrajectoryRecord> portrait(
    const VectorField& f, const std::vector<std::vector<double>>& starts,
    const SimSettings& settings) {
  std::vector<TrajectoryRecord> out;
  out.reserve(starts.size());
  for (const auto& x0 : starts) out.push_back(integrate(f, x0, settings));
  return out;
}

void write_portrait_csv(std::ostream& out,
                        const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) {
    out << "traj_id,t\n";
    return;
  }
  const int n = static_cast<int>(records[0].x[0].size());
  out << "traj_id,t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  out << "\n";
  char buf[64];
  for (std::size_t id = 0; id < records.size(); ++id) {
    const auto& r = records[id];
    for (std::size_t j = 0; j < r.t.size(); ++j) {
      out << id;
      std::snprintf(buf, sizeof buf, ",%.17g", r.t[j]);
      out << buf;
      for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", r.x[j][i]);
        out << buf;
      }
      out << "\n";
    }
  }
}

}  // namespace divstab
