#pragma once

#include <functional>
#include <string>

namespace angio {

/// Kinetic constants of the tumour / carrying-capacity system.
///
/// Signs are checked by validate(); existence of the positive steady state
/// (b > mu) is checked separately by the analyses that need it, since the limit
/// mu == b is still meaningful for threshold curves.
struct ModelParams {
  double r = 0.0;      ///< tumour growth rate
  double b = 0.0;      ///< stimulation coefficient
  double a_H = 0.0;    ///< inhibition coefficient
  double mu = 0.0;     ///< vasculature loss / constant anti-angiogenic treatment
  double alpha = 0.0;  ///< exponent of p/q in the vessel equation, in [0, 1]

  void validate() const;
  bool has_positive_steady_state() const { return b > mu; }
  void require_positive_steady_state() const;
  void require_nonnegative_margin() const;  // b >= mu

  /// Parameter set estimated by Hahnfeldt et al. (1999).
  static ModelParams hahnfeldt(double alpha = 1.0, double mu = 0.0);
};

/// Tumour growth law h. Must satisfy h(1) = 0, h'(1) = -1 and be decreasing.
class GrowthFunction {
 public:
  using Fn = std::function<double(double)>;

  /// Validates the normalisation and monotonicity on a log grid over [1e-3, 1e3].
  GrowthFunction(std::string label, Fn eval, Fn deriv);

  static GrowthFunction logarithmic();  // h(theta) = -ln(theta), "log"
  static GrowthFunction linear();       // h(theta) = 1 - theta, "linear"
  static GrowthFunction from_label(const std::string& label);

  double operator()(double theta) const;
  double derivative(double theta) const;
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  Fn eval_;
  Fn deriv_;
};

struct SteadyState {
  double p_e = 0.0;
  double q_e = 0.0;
};

struct DerivedRates {
  double beta = 0.0;   // r + alpha b
  double gamma = 0.0;  // 2 r (b - mu) / 3
};

struct Rates {
  double dx = 0.0;
  double dy = 0.0;
};

struct OriginalRates {
  double dp = 0.0;
  double dq = 0.0;
};

SteadyState steady_state(const ModelParams& params);
DerivedRates derived_rates(const ModelParams& params);

/// Right-hand side of the log-rescaled system, x = ln(p/p_e), y = ln(p q_e / (q p_e)).
/// conv1 = int f1(tau) exp(y(t - tau)) dtau, conv2 = int f2(tau) exp(alpha y(t - tau)) dtau.
Rates rhs_rescaled(const ModelParams& params, const GrowthFunction& h, double conv1,
                   double conv2, double x, double y);

/// Right-hand side of the original (p, q) system; conv_ratio1 and conv_ratio2 are the
/// delayed averages of p/q and (p/q)^alpha.
OriginalRates rhs_original(const ModelParams& params, const GrowthFunction& h,
                           double conv_ratio1, double conv_ratio2, double p, double q);

}  // namespace angio
