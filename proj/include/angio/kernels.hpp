#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace angio {

using cdouble = std::complex<double>;

struct DiracKernel {
  double sigma = 0.0;
};

/// Erlang density with integer shape m and rate a, shifted right by sigma.
struct ErlangKernel {
  int m = 1;
  double a = 1.0;
  double sigma = 0.0;
};

/// Symmetric triangular ("tent") density centred at sigma with half-width epsilon.
struct TentKernel {
  double sigma = 1.0;
  double epsilon = 0.5;
};

struct KernelMoments {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> cv;  // empty when the mean is zero
};

struct Support {
  double lo = 0.0;
  double hi = 0.0;
};

/// A delay distribution on [0, inf). Construction validates the shape
/// parameters; tent kernels with sigma < epsilon (neutral regime) are rejected.
class DelayKernel {
 public:
  using Variant = std::variant<DiracKernel, ErlangKernel, TentKernel>;

  static DelayKernel dirac(double sigma);
  static DelayKernel erlang(int m, double a, double sigma = 0.0);
  static DelayKernel tent(double sigma, double epsilon);

  const Variant& variant() const { return v_; }
  bool is_dirac() const { return std::holds_alternative<DiracKernel>(v_); }
  bool is_erlang() const { return std::holds_alternative<ErlangKernel>(v_); }
  bool is_tent() const { return std::holds_alternative<TentKernel>(v_); }
  const ErlangKernel* as_erlang() const { return std::get_if<ErlangKernel>(&v_); }
  const TentKernel* as_tent() const { return std::get_if<TentKernel>(&v_); }
  const DiracKernel* as_dirac() const { return std::get_if<DiracKernel>(&v_); }

  /// Points in [0, inf) where the density is not smooth.
  std::vector<double> breakpoints() const;

  std::string describe() const;

 private:
  explicit DelayKernel(Variant v) : v_(v) {}
  Variant v_;
};

/// Pointwise density; throws NoDensity for Dirac kernels.
double density(const DelayKernel& kernel, double tau);

/// int_0^inf f(tau) exp(-lambda tau) dtau in closed form.
cdouble laplace(const DelayKernel& kernel, cdouble lambda);

/// g(z) = 2 (cosh z - 1) / z^2 with a series near zero; g(0) = 1.
cdouble tent_shape(cdouble z);
/// g1(x) = g(ix) = 2 (1 - cos x) / x^2 for real x.
double tent_shape_real(double x);
/// d/dx g1(x).
double tent_shape_real_deriv(double x);

KernelMoments moments(const DelayKernel& kernel);

/// Interval holding all probability mass except at most tail_tol (exact
/// support for compact kernels).
Support quadrature_support(const DelayKernel& kernel, double tail_tol);

/// Upper regularised incomplete gamma Q(m, x) for integer m >= 1.
double erlang_upper_tail(int m, double x);

}  // namespace angio
