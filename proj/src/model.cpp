#include "angio/model.hpp"

#include <cmath>
#include <utility>

#include "angio/error.hpp"

namespace angio {

void ModelParams::validate() const {
  if (!(r > 0.0) || !(b > 0.0) || !(a_H > 0.0) || !(mu >= 0.0) || !(alpha >= 0.0) ||
      !(alpha <= 1.0)) {
    fail(ErrorKind::InvalidParameter,
         "model parameters require r > 0, b > 0, a_H > 0, mu >= 0, 0 <= alpha <= 1");
  }
}

void ModelParams::require_positive_steady_state() const {
  validate();
  if (!has_positive_steady_state()) {
    fail(ErrorKind::NoPositiveSteadyState, "positive steady state requires b > mu");
  }
}

void ModelParams::require_nonnegative_margin() const {
  validate();
  if (b < mu) {
    fail(ErrorKind::NoPositiveSteadyState, "analysis requires b >= mu");
  }
}

ModelParams ModelParams::hahnfeldt(double alpha, double mu) {
  return ModelParams{.r = 0.192, .b = 5.85, .a_H = 8.73e-3, .mu = mu, .alpha = alpha};
}

GrowthFunction::GrowthFunction(std::string label, Fn eval, Fn deriv)
    : label_(std::move(label)), eval_(std::move(eval)), deriv_(std::move(deriv)) {
  if (std::abs(eval_(1.0)) > 1e-12 || std::abs(deriv_(1.0) + 1.0) > 1e-12) {
    fail(ErrorKind::InvalidParameter,
         "growth function '" + label_ + "' must satisfy h(1) = 0 and h'(1) = -1");
  }
  constexpr int kGrid = 121;
  for (int i = 0; i < kGrid; ++i) {
    const double theta = std::pow(10.0, -3.0 + 6.0 * i / (kGrid - 1));
    if (!(deriv_(theta) < 0.0)) {
      fail(ErrorKind::InvalidParameter,
           "growth function '" + label_ + "' must be strictly decreasing");
    }
  }
}

GrowthFunction GrowthFunction::logarithmic() {
  return GrowthFunction(
      "log", [](double t) { return -std::log(t); }, [](double t) { return -1.0 / t; });
}

GrowthFunction GrowthFunction::linear() {
  return GrowthFunction(
      "linear", [](double t) { return 1.0 - t; }, [](double) { return -1.0; });
}

GrowthFunction GrowthFunction::from_label(const std::string& label) {
  if (label == "log") return logarithmic();
  if (label == "linear") return linear();
  fail(ErrorKind::InvalidParameter, "unknown growth function '" + label + "'");
}

double GrowthFunction::operator()(double theta) const {
  if (!(theta > 0.0)) {
    fail(ErrorKind::DomainError, "growth function argument must be positive");
  }
  return eval_(theta);
}

double GrowthFunction::derivative(double theta) const {
  if (!(theta > 0.0)) {
    fail(ErrorKind::DomainError, "growth function argument must be positive");
  }
  return deriv_(theta);
}

SteadyState steady_state(const ModelParams& params) {
  params.require_positive_steady_state();
  const double pe = std::pow((params.b - params.mu) / params.a_H, 1.5);
  return {pe, pe};
}

DerivedRates derived_rates(const ModelParams& params) {
  return {params.r + params.alpha * params.b, 2.0 * params.r * (params.b - params.mu) / 3.0};
}

Rates rhs_rescaled(const ModelParams& params, const GrowthFunction& h, double conv1,
                   double conv2, double x, double y) {
  (void)y;  // y enters only through the delayed convolutions
  if (!(conv1 > 0.0)) fail(ErrorKind::DomainError, "conv1 must be positive");
  if (!(conv2 > 0.0)) fail(ErrorKind::DomainError, "conv2 must be positive");
  const double growth = params.r * h(conv1);
  const double vessels =
      -params.b * conv2 + (params.b - params.mu) * std::exp(2.0 * x / 3.0) + params.mu;
  return {growth, growth + vessels};
}

OriginalRates rhs_original(const ModelParams& params, const GrowthFunction& h,
                           double conv_ratio1, double conv_ratio2, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) fail(ErrorKind::DomainError, "p and q must be positive");
  if (!(conv_ratio1 > 0.0)) fail(ErrorKind::DomainError, "conv_ratio1 must be positive");
  const double dp = params.r * p * h(conv_ratio1);
  const double dq =
      q * (params.b * conv_ratio2 - params.a_H * std::pow(p, 2.0 / 3.0) - params.mu);
  return {dp, dq};
}

}  // namespace angio
