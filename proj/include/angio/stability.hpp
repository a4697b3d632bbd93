#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "angio/charfun.hpp"

namespace angio {

enum class Verdict { Stable, Unstable, Boundary };
std::string_view to_string(Verdict v);

struct CriticalValue {
  std::string name;
  double value = 0.0;
};

struct StabilityReport {
  Verdict verdict = Verdict::Boundary;
  std::optional<int> rhp_root_count;
  std::optional<CriticalValue> critical_value;
  std::optional<double> omega0;
  std::optional<int> transversal;  // sign of F' at the crossing frequency
};

/// Routh array with epsilon substitution for zero pivots and the auxiliary
/// polynomial derivative for vanishing rows. Zero roots and pivots that vanish
/// without producing a sign change give Boundary.
StabilityReport routh_hurwitz_stable(const Polynomial& poly);

/// Number of companion-matrix eigenvalues with Re > tol * max(1, |z|).
int companion_rhp_count(const Polynomial& poly, double tol = 1e-9);
/// Smallest |Re z| / max(1, |z|) over the roots; used to reject near-degenerate samples.
double companion_axis_distance(const Polynomial& poly);

/// Threshold in a for non-shifted Erlang kernels: stable for a > value.
struct CriticalA {
  bool always_stable = false;
  double value = 0.0;
};

/// Closed forms for (m1, m2) in {(1,1), (2,2), (3,3), (1,2), (2,1)}.
CriticalA critical_a_nonshifted(const ModelParams& params, int m1, int m2);

/// Threshold located by bisection on the Routh-Hurwitz verdict over a in [a_lo, a_hi];
/// assumes stability for large a. Works for any shapes.
CriticalA critical_a_scan(const ModelParams& params, int m1, int m2, double a_lo = 1e-6,
                          double a_hi = 1e4);

/// Frequency and delay of the first crossing for two equal discrete delays.
struct Crossing {
  double sigma = 0.0;
  double omega = 0.0;
};
Crossing discrete_delay_crossing(const ModelParams& params);

struct CrossingCandidate {
  double omega0 = 0.0;
  double slope = 0.0;  // dF/domega at omega0
  bool multiple = false;
  double sigma = 0.0;  // smallest sigma >= 0 with D(i omega0) = 0
};

enum class SigmaStatus { Switch, UnstableAtZero, BoundaryAtZero, NoCrossing };
std::string_view to_string(SigmaStatus s);

struct CriticalSigma {
  SigmaStatus status = SigmaStatus::NoCrossing;
  double sigma0 = 0.0;
  double omega0 = 0.0;
  bool multiple_root = false;
  AuxCase aux_case = AuxCase::ErlangGeneral;
  std::vector<CrossingCandidate> candidates;  // every positive root of F
};

/// Smallest shift at which a root pair of D crosses into the right half-plane.
CriticalSigma critical_sigma_erlang(const ModelParams& params, int m1, int m2, double a);

/// Argument-principle count of right half-plane zeros of an analytic W that
/// behaves like lambda^n for large |lambda|: n/2 - (arg change on [0, inf)) / pi.
int mikhailov_count(const std::function<cdouble(cdouble)>& W, double omega_max, int n,
                    int steps = 2000);
/// Uses W of the kernel pair (n = 2) with an automatic sweep limit.
int mikhailov_count(const CharFunction& cf, int steps = 2000);
/// Uses D for shifted Erlang kernels (n = 2 + max(m1, m2)).
int mikhailov_count_erlang(const ModelParams& params, int m1, int m2, double a, double sigma,
                           int steps = 2000);
/// Sweep limit used by the kernel-pair overload.
double mikhailov_omega_max(const CharFunction& cf);

/// Delay-independent sufficient conditions for two equal tent kernels.
struct TentBounds {
  double sigma_stable_below = 0.0;
  std::optional<std::pair<double, double>> instability;  // open interval, when nonempty
};
TentBounds tent_sufficient_bounds(const ModelParams& params);

struct SwitchSample {
  double epsilon = 0.0;
  double sigma_cr = 0.0;
  double omega0 = 0.0;
};

struct SwitchCurve {
  std::vector<SwitchSample> samples;
  std::vector<double> neutral_excluded;  // grid points whose solution had sigma < epsilon
};

/// Newton solve of Re W(i w) = Im W(i w) = 0 in (w, sigma) for a fixed epsilon.
/// Returns nullopt if the damped iteration does not reach the residual tolerance.
std::optional<SwitchSample> tent_switch_solve(const ModelParams& params, double epsilon,
                                              double omega_guess, double sigma_guess);

/// Stability-switch curve sigma_cr(epsilon) for two equal tent kernels, traced by
/// continuation from the discrete-delay limit. The grid must be increasing and positive.
SwitchCurve tent_switch_curve(const ModelParams& params, std::span<const double> epsilon_grid);

/// Limits of the switch curve: epsilon -> 0 and the point where sigma_cr = epsilon.
struct SwitchEndpoints {
  SwitchSample small_eps;
  SwitchSample neutral_end;
};
SwitchEndpoints tent_switch_endpoints(const ModelParams& params);

/// F(omega) + phase reconstruction for the tent case; the smallest admissible sigma
/// among the positive roots with F' > 0, or nullopt if none.
std::optional<SwitchSample> tent_switch_direct(const ModelParams& params, double epsilon);

enum class SwitchGuarantee { MainCondition, VerA, None };
std::string_view to_string(SwitchGuarantee g);

/// Conditions guaranteeing at most one stability switch for (m1, m2) = (2, 1).
struct Theorem4Flags {
  double alpha1 = 0.0;  // 2 alpha b gamma - a beta^2
  double alpha2 = 0.0;  // alpha^2 b^2 - a^2
  bool main_condition = false;  // a >= alpha b min(1, 2 gamma / beta^2)
  bool ver_a = false;
  bool notcontra = false;  // alpha b < beta and 1 < 2 gamma / beta^2
  bool descartes_path = false;  // alpha = 0: one coefficient sign change
  SwitchGuarantee guarantee = SwitchGuarantee::None;
};
Theorem4Flags check_theorem4_conditions(const ModelParams& params, double a);

/// Sign of F'(omega0) by Richardson-refined central differences.
int hopf_transversality(const std::function<double(double)>& F, double omega0);
int hopf_transversality(const AuxFunction& F, double omega0);

}  // namespace angio
