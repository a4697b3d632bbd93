#include "angio/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "angio/error.hpp"

namespace angio {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Below this |z| the tent transform switches to its Taylor series; the
// truncation error is of order |z|^6 / 20160.
constexpr double kTentSeriesThreshold = 1e-4;

}  // namespace

DelayKernel DelayKernel::dirac(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    fail(ErrorKind::InvalidParameter, "dirac kernel requires sigma >= 0");
  }
  return DelayKernel(DiracKernel{sigma});
}

DelayKernel DelayKernel::erlang(int m, double a, double sigma) {
  if (m < 1) fail(ErrorKind::InvalidParameter, "erlang kernel requires m >= 1");
  if (!(a > 0.0) || !std::isfinite(a)) {
    fail(ErrorKind::InvalidParameter, "erlang kernel requires a > 0");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    fail(ErrorKind::InvalidParameter, "erlang kernel requires sigma >= 0");
  }
  return DelayKernel(ErlangKernel{m, a, sigma});
}

DelayKernel DelayKernel::tent(double sigma, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorKind::InvalidParameter, "tent kernel requires epsilon > 0");
  }
  if (!(sigma >= epsilon) || !std::isfinite(sigma)) {
    fail(ErrorKind::InvalidParameter,
         "tent kernel requires sigma >= epsilon (sigma < epsilon gives a neutral equation)");
  }
  return DelayKernel(TentKernel{sigma, epsilon});
}

std::vector<double> DelayKernel::breakpoints() const {
  return std::visit(Overloaded{
                        [](const DiracKernel& k) { return std::vector<double>{k.sigma}; },
                        [](const ErlangKernel& k) { return std::vector<double>{k.sigma}; },
                        [](const TentKernel& k) {
                          return std::vector<double>{k.sigma - k.epsilon, k.sigma,
                                                     k.sigma + k.epsilon};
                        },
                    },
                    v_);
}

std::string DelayKernel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const DiracKernel& k) { os << "dirac(sigma=" << k.sigma << ")"; },
                 [&](const ErlangKernel& k) {
                   os << "erlang(m=" << k.m << ", a=" << k.a << ", sigma=" << k.sigma << ")";
                 },
                 [&](const TentKernel& k) {
                   os << "tent(sigma=" << k.sigma << ", epsilon=" << k.epsilon << ")";
                 },
             },
             v_);
  return os.str();
}

double density(const DelayKernel& kernel, double tau) {
  if (!(tau >= 0.0)) fail(ErrorKind::DomainError, "density requires tau >= 0");
  return std::visit(
      Overloaded{
          [](const DiracKernel&) -> double {
            fail(ErrorKind::NoDensity, "dirac kernel has no pointwise density");
          },
          [tau](const ErlangKernel& k) -> double {
            const double s = tau - k.sigma;
            if (s < 0.0) return 0.0;
            if (k.m == 1) return k.a * std::exp(-k.a * s);
            if (s == 0.0) return 0.0;
            const double log_f = k.m * std::log(k.a) + (k.m - 1) * std::log(s) - k.a * s -
                                 std::lgamma(static_cast<double>(k.m));
            return std::exp(log_f);
          },
          [tau](const TentKernel& k) -> double {
            const double d = std::abs(tau - k.sigma);
            if (d > k.epsilon) return 0.0;
            return (k.epsilon - d) / (k.epsilon * k.epsilon);
          },
      },
      kernel.variant());
}

cdouble tent_shape(cdouble z) {
  if (std::abs(z) < kTentSeriesThreshold) {
    const cdouble z2 = z * z;
    return 1.0 + z2 / 12.0 + z2 * z2 / 360.0;
  }
  // 2 (cosh z - 1) = 4 sinh^2(z/2) sidesteps the cancellation just above the threshold.
  const cdouble s = std::sinh(0.5 * z) / (0.5 * z);
  return s * s;
}

double tent_shape_real(double x) {
  if (std::abs(x) < kTentSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 12.0 + x2 * x2 / 360.0;
  }
  // 1 - cos x = 2 sin^2(x/2) avoids cancellation for moderate x.
  const double s = std::sin(0.5 * x);
  return 4.0 * s * s / (x * x);
}

double tent_shape_real_deriv(double x) {
  // The closed form cancels badly for small x, so the series is used further out.
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * (-1.0 / 6.0 + x2 * (1.0 / 90.0 - x2 / 3360.0));
  }
  const double s = std::sin(0.5 * x);
  return 2.0 * std::sin(x) / (x * x) - 8.0 * s * s / (x * x * x);
}

cdouble laplace(const DelayKernel& kernel, cdouble lambda) {
  return std::visit(
      Overloaded{
          [&](const DiracKernel& k) -> cdouble { return std::exp(-lambda * k.sigma); },
          [&](const ErlangKernel& k) -> cdouble {
            const cdouble denom = k.a + lambda;
            if (std::abs(denom) <= 1e-14 * k.a) {
              fail(ErrorKind::PoleError, "erlang transform has a pole at lambda = -a");
            }
            return std::pow(k.a / denom, k.m) * std::exp(-lambda * k.sigma);
          },
          [&](const TentKernel& k) -> cdouble {
            return tent_shape(lambda * k.epsilon) * std::exp(-lambda * k.sigma);
          },
      },
      kernel.variant());
}

KernelMoments moments(const DelayKernel& kernel) {
  return std::visit(
      Overloaded{
          [](const DiracKernel& k) {
            KernelMoments out{k.sigma, 0.0, std::nullopt};
            if (k.sigma > 0.0) out.cv = 0.0;
            return out;
          },
          [](const ErlangKernel& k) {
            const double mean = k.sigma + k.m / k.a;
            KernelMoments out{mean, k.m / (k.a * k.a), std::nullopt};
            out.cv = std::sqrt(static_cast<double>(k.m)) / (k.a * k.sigma + k.m);
            return out;
          },
          [](const TentKernel& k) {
            KernelMoments out{k.sigma, k.epsilon * k.epsilon / 6.0, std::nullopt};
            out.cv = k.epsilon / (k.sigma * std::sqrt(6.0));
            return out;
          },
      },
      kernel.variant());
}

double erlang_upper_tail(int m, double x) {
  if (x <= 0.0) return 1.0;
  // Q(m, x) = exp(-x) sum_{k < m} x^k / k!
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < m; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::exp(-x + std::log(sum));
}

Support quadrature_support(const DelayKernel& kernel, double tail_tol) {
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
    fail(ErrorKind::InvalidParameter, "tail_tol must lie in (0, 1)");
  }
  return std::visit(
      Overloaded{
          [](const DiracKernel& k) { return Support{k.sigma, k.sigma}; },
          [tail_tol](const ErlangKernel& k) {
            // Bracket x with Q(m, x) = tail_tol, then bisect.
            double hi = std::max(1.0, static_cast<double>(k.m));
            while (erlang_upper_tail(k.m, hi) > tail_tol) hi *= 2.0;
            double lo = 0.0;
            for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
              const double mid = 0.5 * (lo + hi);
              if (erlang_upper_tail(k.m, mid) > tail_tol) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
            return Support{k.sigma, k.sigma + hi / k.a};
          },
          [](const TentKernel& k) { return Support{k.sigma - k.epsilon, k.sigma + k.epsilon}; },
      },
      kernel.variant());
}

}  // namespace angio
