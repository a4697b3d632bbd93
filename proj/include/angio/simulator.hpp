#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "angio/kernels.hpp"
#include "angio/model.hpp"

namespace angio {

struct State {
  double x = 0.0;
  double y = 0.0;
};

/// Initial function on (-inf, 0] in rescaled variables. Samples are joined by cubic
/// Hermite interpolation; queries before the first sample return its value.
class History {
 public:
  struct Sample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
  };

  static History constant(double x0, double y0);
  /// Samples ordered by time, last one at t = 0; slopes come from finite differences.
  static History from_samples(std::vector<Sample> samples);
  /// Tabulates phi on [-lookback, 0] with spacing <= dt.
  static History from_function(const std::function<State(double)>& phi, double lookback, double dt);

  State operator()(double t) const;
  /// Time derivative of the interpolant (zero on the constant extension).
  State derivative(double t) const;
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
  std::vector<State> slopes_;
};

struct SimConfig {
  double dt = 0.01;
  double T = 100.0;
  double tail_tol = 1e-10;
  int quad_order = 8;
};

/// Largest step satisfying dt <= min(epsilon, 1/a, sigma) / 20 over the scales present
/// (infinite for two undelayed Dirac kernels).
double max_resolved_dt(const DelayKernel& kernel1, const DelayKernel& kernel2);

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

struct OriginalSample {
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
};

class Trajectory {
 public:
  std::vector<TrajectorySample> samples;  // uniform in t, starting at 0
  std::optional<double> blowup_time;

  double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// Cubic Hermite interpolation between samples.
  State at(double t) const;
  /// p = p_e exp(x), q = q_e exp(x - y).
  std::vector<OriginalSample> original(const SteadyState& steady) const;
};

/// RK4 on the rescaled system with the delayed terms evaluated by Gauss-Legendre
/// quadrature of the kernel against the Hermite-interpolated history of exp(y) and
/// exp(alpha y). Stops early (blowup_time set) once |x| or |y| exceeds 1e6, or when a stage
/// convolution turns non-positive because the swing is no longer resolved.
Trajectory simulate(const ModelParams& params, const GrowthFunction& h, const DelayKernel& kernel1,
                    const DelayKernel& kernel2, const History& initial, const SimConfig& cfg);

/// Same system for non-shifted Erlang kernels with a shared rate, integrated as the
/// equivalent ODE chain of dimension 2 + m1 + m2.
Trajectory simulate_linear_chain(const ModelParams& params, const GrowthFunction& h, int m1, int m2,
                                 double a, const History& initial, const SimConfig& cfg);

enum class TrajectoryKind { Converging, Oscillating, Diverging, Inconclusive };
std::string_view to_string(TrajectoryKind k);

struct Classification {
  TrajectoryKind kind = TrajectoryKind::Inconclusive;
  double period = 0.0;
  double amplitude = 0.0;
};

/// Looks at the trailing windows of the run; the trajectory must span >= 3 windows.
Classification classify_trajectory(const Trajectory& traj, double window);

}  // namespace angio
