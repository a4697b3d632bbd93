#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "angio/kernels.hpp"
#include "angio/model.hpp"
#include "angio/polynomial.hpp"

namespace angio {

/// Characteristic function of the linearisation at the trivial steady state,
///   W(lambda) = lambda^2 + lambda (r L1 + alpha b L2) + gamma L1,
/// with L_i the Laplace transforms of the two delay kernels.
class CharFunction {
 public:
  /// Requires b >= mu (gamma >= 0).
  CharFunction(const ModelParams& params, DelayKernel kernel1, DelayKernel kernel2);

  cdouble operator()(cdouble lambda) const;

  const ModelParams& params() const { return params_; }
  const DelayKernel& kernel1() const { return k1_; }
  const DelayKernel& kernel2() const { return k2_; }
  const DerivedRates& rates() const { return rates_; }

 private:
  ModelParams params_;
  DelayKernel k1_;
  DelayKernel k2_;
  DerivedRates rates_;
};

inline cdouble eval_W(const CharFunction& cf, cdouble lambda) { return cf(lambda); }

/// Splits the Erlang characteristic function multiplied by (a+lambda)^M,
/// M = max(m1, m2), into the undelayed part P = lambda^2 (a+lambda)^M and the
/// part N that carries exp(-lambda sigma) once the kernels are shifted.
struct ErlangSplit {
  Polynomial P;
  Polynomial N;
  int M = 0;
};

ErlangSplit erlang_split(const ModelParams& params, int m1, int m2, double a);

/// P + N: the polynomial whose roots are the zeros of W for non-shifted Erlang kernels.
Polynomial erlang_reduced_poly(const ModelParams& params, int m1, int m2, double a);
/// Same, taking the kernels; Unsupported unless both are non-shifted Erlang with a shared rate.
Polynomial erlang_reduced_poly(const ModelParams& params, const DelayKernel& kernel1,
                               const DelayKernel& kernel2);

/// D(lambda) = P(lambda) + N(lambda) exp(-lambda sigma) for shifted Erlang kernels.
cdouble erlang_shifted_D(const ModelParams& params, int m1, int m2, double a, double sigma,
                         cdouble lambda);

enum class AuxCase { ErlangEqualM, Erlang12, Erlang21, ErlangGeneral, Tent };
std::string_view to_string(AuxCase c);

struct AuxRoot {
  double omega = 0.0;
  double slope = 0.0;  // dF/domega at the root
  bool multiple = false;
};

/// Real function whose positive roots are the frequencies at which characteristic
/// roots can sit on the imaginary axis. Erlang cases are polynomials in u = omega^2;
/// the tent case is evaluated pointwise.
class AuxFunction {
 public:
  static AuxFunction polynomial(AuxCase tag, Polynomial in_u);
  static AuxFunction tent(double beta, double gamma, double epsilon);

  AuxCase tag() const { return tag_; }
  bool is_polynomial() const { return poly_.has_value(); }
  /// Coefficients in u = omega^2; only for the Erlang cases.
  const Polynomial& poly_u() const;

  double operator()(double omega) const;
  double derivative(double omega) const;

  /// Positive roots in omega, ascending.
  std::vector<AuxRoot> positive_roots() const;

  /// Upper end of the root search interval for the tent case.
  double search_limit() const;

 private:
  AuxCase tag_ = AuxCase::ErlangGeneral;
  std::optional<Polynomial> poly_;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  double eps_ = 0.0;
};

/// F(u) = u^2 (a^2+u)^M - |N(i omega)|^2; the explicit closed forms are used for
/// equal shapes, (1,2) and (2,1), and the expanded squared modulus otherwise.
AuxFunction aux_F_erlang(const ModelParams& params, int m1, int m2, double a);

/// F(omega) = omega^4 - (omega^2 beta^2 + gamma^2) g1(eps omega)^2.
AuxFunction aux_F_tent(const ModelParams& params, double epsilon);

struct WParts {
  double re = 0.0;
  double im = 0.0;
};

/// Real and imaginary parts of W(i omega) when both kernels are the same tent.
WParts tent_W_parts(const ModelParams& params, double sigma, double epsilon, double omega);

}  // namespace angio
