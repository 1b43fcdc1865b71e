#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "divstab/vectorfield.hpp"

namespace divstab {

class StepUnderflow : public std::runtime_error {
 public:
  explicit StepUnderflow(double t)
      : std::runtime_error("step size underflow at t = " + std::to_string(t)),
        t_reached(t) {}
  double t_reached;
};

struct SimSettings {
  double T = 100.0;
  double tol = 1e-9;          // admitted range [1e-12, 1e-3]
  double eps_conv = 1e-6;
  double R_escape = 1e3;
  int n_samples = 1000;       // uniform dense-output grid
  // Per-step interpolants are kept up to this many steps; beyond it the
  // periodicity detector is unavailable (long-horizon runs don't need it).
  std::size_t dense_steps_cap = 200000;
};

struct Classification {
  enum class Kind { ConvergedToOrigin, Escaped, Periodic, Undecided };
  Kind kind = Kind::Undecided;
  double t_hit = 0.0;            // ConvergedToOrigin
  double t_exit = 0.0;           // Escaped
  double period_estimate = 0.0;  // Periodic
  std::string to_string() const;
};

struct TrajectoryRecord {
  std::vector<double> t;                // strictly increasing sample times
  std::vector<std::vector<double>> x;   // state at each sample time
  SimSettings params;
  Classification classification;

  enum class StopReason { ReachedHorizon, Escaped, NonFinite };
  StopReason stop_reason = StopReason::ReachedHorizon;
  double t_stop = 0.0;
  std::size_t steps = 0;

  // Dense-output interpolants (one per accepted step) while under the cap.
  struct StepInterp {
    double t0, h;
    std::vector<double> cont;  // 5 * dim coefficients
    void eval(double t, int dim, double* out) const;
  };
  std::vector<StepInterp> dense;
  bool dense_complete = true;

  double norm_at(std::size_t j) const;
};

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince tableau, with dense
// output on a uniform grid of at least n_samples points. Integration stops
// early once the state passes well beyond R_escape.
TrajectoryRecord integrate(const VectorField& f, const std::vector<double>& x0,
                           const SimSettings& settings);

Classification classify(const TrajectoryRecord& rec, double eps_conv,
                        double R_escape);

std::vector<TrajectoryRecord> portrait(const VectorField& f,
                                       const std::vector<std::vector<double>>& starts,
                                       const SimSettings& settings);

// CSV rows (traj_id, t, x1..xn) with 17 significant digits.
void write_portrait_csv(std::ostream& out,
                        const std::vector<TrajectoryRecord>& records);

}  // namespace divstab
