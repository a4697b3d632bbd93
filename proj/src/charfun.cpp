#include "angio/charfun.hpp"

#include <algorithm>
#include <cmath>

#include "angio/error.hpp"

namespace angio {

CharFunction::CharFunction(const ModelParams& params, DelayKernel kernel1, DelayKernel kernel2)
    : params_(params), k1_(kernel1), k2_(kernel2) {
  params_.validate();
  params_.require_nonnegative_margin();
  rates_ = derived_rates(params_);
}

cdouble CharFunction::operator()(cdouble lambda) const {
  const cdouble L1 = laplace(k1_, lambda);
  const cdouble L2 = laplace(k2_, lambda);
  return lambda * lambda + lambda * (params_.r * L1 + params_.alpha * params_.b * L2) +
         rates_.gamma * L1;
}

namespace {

void check_erlang_shape(int m1, int m2, double a) {
  if (m1 < 1 || m2 < 1) fail(ErrorKind::InvalidParameter, "Erlang shapes must be >= 1");
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::InvalidParameter, "Erlang rate must be > 0");
}

}  // namespace

ErlangSplit erlang_split(const ModelParams& params, int m1, int m2, double a) {
  params.validate();
  params.require_nonnegative_margin();
  check_erlang_shape(m1, m2, a);
  const auto [beta, gamma] = derived_rates(params);
  (void)beta;
  const int M = std::max(m1, m2);
  const Polynomial lam = Polynomial::monomial(1);
  const Polynomial part1 =
      std::pow(a, m1) * Polynomial::binomial_power(a, 1.0, M - m1);  // a^m1 (a+l)^(M-m1)
  const Polynomial part2 = std::pow(a, m2) * Polynomial::binomial_power(a, 1.0, M - m2);
  ErlangSplit s;
  s.M = M;
  s.P = Polynomial::monomial(2) * Polynomial::binomial_power(a, 1.0, M);
  s.N = lam * (params.r * part1 + (params.alpha * params.b) * part2) + gamma * part1;
  return s;
}

Polynomial erlang_reduced_poly(const ModelParams& params, int m1, int m2, double a) {
  const ErlangSplit s = erlang_split(params, m1, m2, a);
  return s.P + s.N;
}

Polynomial erlang_reduced_poly(const ModelParams& params, const DelayKernel& kernel1,
                               const DelayKernel& kernel2) {
  const ErlangKernel* e1 = kernel1.as_erlang();
  const ErlangKernel* e2 = kernel2.as_erlang();
  if (!e1 || !e2) fail(ErrorKind::Unsupported, "reduced polynomial needs Erlang kernels");
  if (e1->sigma != 0.0 || e2->sigma != 0.0) {
    fail(ErrorKind::Unsupported, "reduced polynomial needs non-shifted kernels (sigma = 0)");
  }
  if (e1->a != e2->a) fail(ErrorKind::Unsupported, "reduced polynomial needs a shared rate a");
  return erlang_reduced_poly(params, e1->m, e2->m, e1->a);
}

cdouble erlang_shifted_D(const ModelParams& params, int m1, int m2, double a, double sigma,
                         cdouble lambda) {
  if (!(sigma >= 0.0)) fail(ErrorKind::InvalidParameter, "shift sigma must be >= 0");
  const ErlangSplit s = erlang_split(params, m1, m2, a);
  return s.P(lambda) + s.N(lambda) * std::exp(-lambda * sigma);
}

std::string_view to_string(AuxCase c) {
  switch (c) {
    case AuxCase::ErlangEqualM: return "erlang-equal-m";
    case AuxCase::Erlang12: return "erlang-12";
    case AuxCase::Erlang21: return "erlang-21";
    case AuxCase::ErlangGeneral: return "erlang-general";
    case AuxCase::Tent: return "tent";
  }
  return "unknown";
}

AuxFunction AuxFunction::polynomial(AuxCase tag, Polynomial in_u) {
  if (tag == AuxCase::Tent) fail(ErrorKind::InvalidParameter, "tent auxiliary function is not polynomial");
  AuxFunction f;
  f.tag_ = tag;
  f.poly_ = std::move(in_u);
  return f;
}

AuxFunction AuxFunction::tent(double beta, double gamma, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::InvalidParameter, "tent half-width must be > 0");
  AuxFunction f;
  f.tag_ = AuxCase::Tent;
  f.beta_ = beta;
  f.gamma_ = gamma;
  f.eps_ = epsilon;
  return f;
}

const Polynomial& AuxFunction::poly_u() const {
  if (!poly_) fail(ErrorKind::Unsupported, "auxiliary function has no polynomial form");
  return *poly_;
}

double AuxFunction::operator()(double omega) const {
  if (poly_) return (*poly_)(omega * omega);
  const double g = tent_shape_real(eps_ * omega);
  const double w2 = omega * omega;
  return w2 * w2 - (w2 * beta_ * beta_ + gamma_ * gamma_) * g * g;
}

double AuxFunction::derivative(double omega) const {
  if (poly_) return 2.0 * omega * poly_->derivative()(omega * omega);
  const double g = tent_shape_real(eps_ * omega);
  const double dg = eps_ * tent_shape_real_deriv(eps_ * omega);
  const double w2 = omega * omega;
  const double amp = w2 * beta_ * beta_ + gamma_ * gamma_;
  return 4.0 * w2 * omega - 2.0 * omega * beta_ * beta_ * g * g - 2.0 * amp * g * dg;
}

double AuxFunction::search_limit() const {
  return 2.0 * std::max({1.0, eps_ * std::hypot(beta_, gamma_), beta_ + std::sqrt(gamma_)});
}

std::vector<AuxRoot> AuxFunction::positive_roots() const {
  std::vector<AuxRoot> out;
  if (poly_) {
    const Polynomial du = poly_->derivative();
    for (double u : poly_->positive_real_roots(1e-6)) {
      double scale = 0.0;
      for (int k = 1; k <= poly_->degree(); ++k) {
        scale += k * std::abs(poly_->coeff(k)) * std::pow(u, k - 1);
      }
      const double fu = du(u);
      const double w = std::sqrt(u);
      out.push_back({w, 2.0 * w * fu, std::abs(fu) < 1e-6 * std::max(1.0, scale)});
    }
    return out;
  }

  // Log-grid bracketing, then bisection.
  const double lo = 1e-6;
  const double hi = search_limit();
  const int n = 4000;
  const double ratio = std::pow(hi / lo, 1.0 / n);
  double w0 = lo;
  double f0 = (*this)(w0);
  for (int i = 1; i <= n; ++i) {
    const double w1 = w0 * ratio;
    const double f1 = (*this)(w1);
    if ((f0 < 0.0) != (f1 < 0.0) || f1 == 0.0) {
      double a = w0, b = w1, fa = f0;
      while (b - a > 1e-12 * b) {
        const double m = 0.5 * (a + b);
        const double fm = (*this)(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double w = 0.5 * (a + b);
      const double slope = derivative(w);
      const double scale = std::max(1.0, 4.0 * w * w * w);
      out.push_back({w, slope, std::abs(slope) < 1e-6 * scale});
    }
    w0 = w1;
    f0 = f1;
  }
  return out;
}

AuxFunction aux_F_erlang(const ModelParams& params, int m1, int m2, double a) {
  params.validate();
  params.require_nonnegative_margin();
  check_erlang_shape(m1, m2, a);
  const auto [beta, gamma] = derived_rates(params);
  const double ab = params.alpha * params.b;
  const double r = params.r;
  const double a2 = a * a;

  if (m1 == m2) {
    const int m = m1;
    Polynomial f = Polynomial::monomial(2) * Polynomial::binomial_power(a2, 1.0, m) -
                   std::pow(a, 2 * m) * Polynomial{gamma * gamma, beta * beta};
    return AuxFunction::polynomial(AuxCase::ErlangEqualM, f);
  }
  if (m1 == 1 && m2 == 2) {
    Polynomial f{-a2 * a2 * gamma * gamma,
                 -a2 * (a2 * beta * beta + 2.0 * a * ab * gamma + gamma * gamma),
                 a2 * (a2 - r * r), 2.0 * a2, 1.0};
    return AuxFunction::polynomial(AuxCase::Erlang12, f);
  }
  if (m1 == 2 && m2 == 1) {
    Polynomial f{-gamma * gamma * a2 * a2, -a2 * a * (a * beta * beta - 2.0 * ab * gamma),
                 a2 * (a2 - ab * ab), 2.0 * a2, 1.0};
    return AuxFunction::polynomial(AuxCase::Erlang21, f);
  }

  // |N(i w)|^2 = N(l) N(-l) at l = i w; the product is even in l, so l^(2k) -> (-u)^k.
  const ErlangSplit s = erlang_split(params, m1, m2, a);
  std::vector<double> reflected(s.N.coeffs().begin(), s.N.coeffs().end());
  for (size_t k = 1; k < reflected.size(); k += 2) reflected[k] = -reflected[k];
  const Polynomial nn = s.N * Polynomial(reflected);
  std::vector<double> in_u(static_cast<size_t>(nn.degree() / 2) + 1, 0.0);
  for (int k = 0; k <= nn.degree(); k += 2) {
    in_u[static_cast<size_t>(k / 2)] = ((k / 2) % 2 == 0 ? 1.0 : -1.0) * nn.coeff(k);
  }
  Polynomial f = Polynomial::monomial(2) * Polynomial::binomial_power(a2, 1.0, s.M) -
                 Polynomial(in_u);
  return AuxFunction::polynomial(AuxCase::ErlangGeneral, f);
}

AuxFunction aux_F_tent(const ModelParams& params, double epsilon) {
  params.validate();
  params.require_nonnegative_margin();
  const auto [beta, gamma] = derived_rates(params);
  return AuxFunction::tent(beta, gamma, epsilon);
}

WParts tent_W_parts(const ModelParams& params, double sigma, double epsilon, double omega) {
  const auto [beta, gamma] = derived_rates(params);
  const double g = tent_shape_real(omega * epsilon);
  const double c = std::cos(omega * sigma);
  const double s = std::sin(omega * sigma);
  return {-omega * omega + g * (gamma * c + beta * omega * s),
          g * (beta * omega * c - gamma * s)};
}

}  // namespace angio
