#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "angio/error.hpp"
#include "angio/kernels.hpp"

using namespace angio;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Adaptive Gauss-Kronrod of density * exp(-lambda tau), split at the kernel breakpoints.
cdouble laplace_by_quadrature(const DelayKernel& k, cdouble lambda) {
  const Support sup = quadrature_support(k, 1e-16);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (k.is_erlang()) {
    // infinite range: the weight exp(-lambda tau) may grow when Re lambda < 0
    auto w = [&](double t) {
      const double f = density(k, t);
      return f == 0.0 ? cdouble(0.0) : f * std::exp(-lambda * t);
    };
    auto re = [&](double t) { return w(t).real(); };
    auto im = [&](double t) { return w(t).imag(); };
    const double inf = std::numeric_limits<double>::infinity();
    return cdouble(GK::integrate(re, sup.lo, inf, 15, 1e-14), GK::integrate(im, sup.lo, inf, 15, 1e-14));
  }
  std::vector<double> cuts{sup.lo};
  for (double b : k.breakpoints()) {
    if (b > sup.lo && b < sup.hi) cuts.push_back(b);
  }
  cuts.push_back(sup.hi);
  cdouble total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto re = [&](double t) { return density(k, t) * std::real(std::exp(-lambda * t)); };
    auto im = [&](double t) { return density(k, t) * std::imag(std::exp(-lambda * t)); };
    total += cdouble(GK::integrate(re, cuts[i], cuts[i + 1], 15, 1e-14),
                     GK::integrate(im, cuts[i], cuts[i + 1], 15, 1e-14));
  }
  return total;
}

bool kind_is(const AnalysisError& e, ErrorKind k) { return e.kind() == k; }

}  // namespace

TEST_CASE("densities", "[kernels]") {
  CHECK_THAT(density(DelayKernel::tent(2.0, 1.0), 2.0), WithinAbs(1.0, 1e-15));
  CHECK(density(DelayKernel::tent(2.0, 1.0), 0.5) == 0.0);
  CHECK_THAT(density(DelayKernel::tent(2.0, 1.0), 2.5), WithinAbs(0.5, 1e-15));
  CHECK_THAT(density(DelayKernel::erlang(1, 2.0), 0.0), WithinAbs(2.0, 1e-15));
  CHECK(density(DelayKernel::erlang(2, 1.0, 1.0), 0.5) == 0.0);
  try {
    density(DelayKernel::dirac(1.0), 1.0);
    FAIL("expected NoDensity");
  } catch (const AnalysisError& e) {
    CHECK(kind_is(e, ErrorKind::NoDensity));
  }
}

TEST_CASE("construction rejects bad shapes", "[kernels]") {
  CHECK_THROWS_AS(DelayKernel::tent(0.5, 1.0), AnalysisError);  // neutral regime
  CHECK_THROWS_AS(DelayKernel::erlang(0, 1.0), AnalysisError);
  CHECK_THROWS_AS(DelayKernel::erlang(1, -1.0), AnalysisError);
  CHECK_THROWS_AS(DelayKernel::dirac(-1.0), AnalysisError);
  CHECK_NOTHROW(DelayKernel::tent(1.0, 1.0));
}

TEST_CASE("densities integrate to one", "[kernels]") {
  for (const DelayKernel& k : {DelayKernel::erlang(1, 2.0), DelayKernel::erlang(3, 0.7, 1.2),
                               DelayKernel::tent(2.0, 1.0), DelayKernel::tent(0.5, 0.5)}) {
    CHECK_THAT(std::real(laplace_by_quadrature(k, 0.0)), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("Laplace transforms in closed form", "[kernels]") {
  for (const DelayKernel& k : {DelayKernel::dirac(1.3), DelayKernel::erlang(2, 0.5, 1.0), DelayKernel::tent(2.0, 0.5)}) {
    CHECK(std::abs(laplace(k, 0.0) - 1.0) < 1e-15);
  }
  CHECK(std::abs(laplace(DelayKernel::erlang(2, 1.0), 1.0) - 0.25) < 1e-15);
  // g(i pi) = 4 / pi^2 and exp(-i pi) = -1
  const cdouble tent = laplace(DelayKernel::tent(1.0, 1.0), cdouble(0.0, std::numbers::pi));
  CHECK(std::abs(tent + 4.0 / (std::numbers::pi * std::numbers::pi)) < 1e-14);
  CHECK(std::abs(tent - laplace_by_quadrature(DelayKernel::tent(1.0, 1.0), cdouble(0.0, std::numbers::pi))) < 1e-10);
  CHECK(std::abs(laplace(DelayKernel::dirac(2.0), cdouble(0.0, 1.0)) - std::exp(cdouble(0.0, -2.0))) < 1e-15);
  try {
    laplace(DelayKernel::erlang(2, 1.5), -1.5);
    FAIL("expected PoleError");
  } catch (const AnalysisError& e) {
    CHECK(kind_is(e, ErrorKind::PoleError));
  }
}

TEST_CASE("Laplace transforms match adaptive quadrature", "[kernels]") {
  const cdouble grid[] = {0.0, 1.0, -1.0, cdouble(0, 1), cdouble(0, -1), cdouble(1, 1), cdouble(0, 5)};
  const DelayKernel kernels[] = {DelayKernel::erlang(1, 2.0), DelayKernel::erlang(3, 1.5, 0.7),
                                 DelayKernel::erlang(5, 4.0, 0.0), DelayKernel::tent(2.0, 1.0),
                                 DelayKernel::tent(0.8, 0.3), DelayKernel::tent(1.0, 1.0)};
  for (const auto& k : kernels) {
    for (cdouble lam : grid) {
      INFO(k.describe() << " lambda=" << lam);
      CHECK(std::abs(laplace(k, lam) - laplace_by_quadrature(k, lam)) < 1e-8);
    }
  }
}

TEST_CASE("tent transform near the removable singularity", "[kernels]") {
  // g(z) = 2 (cosh z - 1) / z^2 evaluated in long double as the reference
  for (double mag : {1e-6, 1e-5, 5e-5, 2e-4, 1e-3}) {
    for (double ang : {0.0, 0.7, std::numbers::pi / 2}) {
      const std::complex<long double> z = std::polar<long double>(mag, ang);
      const std::complex<long double> ref = 1.0L + z * z / 12.0L + z * z * z * z / 360.0L + std::pow(z, 6) / 20160.0L;
      const cdouble got = tent_shape(cdouble(static_cast<double>(z.real()), static_cast<double>(z.imag())));
      CHECK(std::abs(got - cdouble(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))) < 1e-15);
    }
  }
  CHECK(tent_shape_real(0.0) == 1.0);
  CHECK_THAT(tent_shape_real(2.0 * std::numbers::pi), WithinAbs(0.0, 1e-16));
  for (double x : {1e-4, 1e-2, 0.3, 2.0, 7.0}) {
    const double h = 1e-5 * std::max(1.0, x);
    const double fd = (tent_shape_real(x + h) - tent_shape_real(x - h)) / (2 * h);
    CHECK_THAT(tent_shape_real_deriv(x), WithinAbs(fd, 1e-8));
  }
}

TEST_CASE("transforms on the imaginary axis are bounded by one", "[kernels]") {
  for (const DelayKernel& k : {DelayKernel::erlang(2, 0.5, 1.0), DelayKernel::tent(2.0, 0.5), DelayKernel::dirac(0.3)}) {
    for (int j = 0; j <= 400; ++j) {
      const double w = -50.0 + 0.25 * j;
      CHECK(std::abs(laplace(k, cdouble(0.0, w))) <= 1.0 + 1e-14);
    }
  }
}

TEST_CASE("tent kernel tends to a discrete delay", "[kernels]") {
  const cdouble lam(0.4, 2.0);
  const double sigma = 1.5;
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double err = std::abs(laplace(DelayKernel::tent(sigma, eps), lam) - std::exp(-lam * sigma));
    if (prev > 0.0) CHECK_THAT(prev / err, WithinRel(100.0, 0.02));  // O(eps^2)
    prev = err;
  }
}

TEST_CASE("Erlang kernel with fixed mean tends to a discrete delay", "[kernels]") {
  const cdouble lam(0.2, 1.5);
  const double mean = 2.0;
  double prev = INFINITY;
  for (int m : {8, 32, 128}) {
    const double err = std::abs(laplace(DelayKernel::erlang(m, m / mean), lam) - std::exp(-lam * mean));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("moments", "[kernels]") {
  KernelMoments m = moments(DelayKernel::erlang(3, 2.0));
  CHECK_THAT(m.mean, WithinAbs(1.5, 1e-15));
  CHECK_THAT(m.variance, WithinAbs(0.75, 1e-15));
  CHECK_THAT(*m.cv, WithinAbs(std::sqrt(3.0) / 3.0, 1e-15));
  m = moments(DelayKernel::erlang(2, 2.0, 1.0));
  CHECK_THAT(m.mean, WithinAbs(2.0, 1e-15));
  CHECK_THAT(m.variance, WithinAbs(0.5, 1e-15));
  CHECK_THAT(*m.cv, WithinAbs(std::sqrt(2.0) / 4.0, 1e-15));
  m = moments(DelayKernel::tent(2.0, 1.0));
  CHECK_THAT(m.mean, WithinAbs(2.0, 1e-15));
  CHECK_THAT(std::sqrt(m.variance), WithinAbs(1.0 / std::sqrt(6.0), 1e-15));
  CHECK(*moments(DelayKernel::tent(1.0, 1.0)).cv <= 1.0);
  m = moments(DelayKernel::dirac(3.0));
  CHECK(m.variance == 0.0);
  CHECK(*m.cv == 0.0);
  CHECK_FALSE(moments(DelayKernel::dirac(0.0)).cv.has_value());
}

TEST_CASE("quadrature support", "[kernels]") {
  Support s = quadrature_support(DelayKernel::tent(3.0, 1.0), 1e-10);
  CHECK(s.lo == 2.0);
  CHECK(s.hi == 4.0);
  s = quadrature_support(DelayKernel::dirac(5.0), 1e-10);
  CHECK(s.lo == 5.0);
  CHECK(s.hi == 5.0);
  s = quadrature_support(DelayKernel::erlang(1, 1.0), std::exp(-10.0));
  CHECK(s.lo == 0.0);
  CHECK_THAT(s.hi, WithinRel(10.0, 1e-8));
  s = quadrature_support(DelayKernel::erlang(4, 2.0, 1.0), 1e-10);
  CHECK_THAT(erlang_upper_tail(4, 2.0 * (s.hi - 1.0)), WithinRel(1e-10, 1e-6));
}
