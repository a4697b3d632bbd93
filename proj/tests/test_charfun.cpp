#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "angio/charfun.hpp"
#include "angio/error.hpp"

using namespace angio;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams with_rates(double beta, double gamma) {
  // alpha = 0 so that beta = r; a_H plays no role in the linearisation
  ModelParams p;
  p.r = beta;
  p.b = 1.5 * gamma / beta;
  p.mu = 0.0;
  p.a_H = 1.0;
  p.alpha = 0.0;
  return p;
}

// Hand-written Erlang characteristic function.
cdouble erlang_W(const ModelParams& p, int m1, int m2, double a, double sigma, cdouble l) {
  const DerivedRates d = derived_rates(p);
  const cdouble e = std::exp(-l * sigma);
  const cdouble l1 = std::pow(a / (a + l), m1) * e;
  const cdouble l2 = std::pow(a / (a + l), m2) * e;
  return l * l + l * (p.r * l1 + p.alpha * p.b * l2) + d.gamma * l1;
}

cdouble tent_W(const ModelParams& p, double sigma, double eps, cdouble l) {
  const DerivedRates d = derived_rates(p);
  const cdouble z = l * eps;
  const cdouble g = std::abs(z) < 1e-3 ? 1.0 + z * z / 12.0 + z * z * z * z / 360.0 : 2.0 * (std::cosh(z) - 1.0) / (z * z);
  return l * l + (l * d.beta + d.gamma) * g * std::exp(-l * sigma);
}

}  // namespace

TEST_CASE("W at the origin and in the ODE limit", "[charfun]") {
  const ModelParams p = ModelParams::hahnfeldt(0.6, 1.0);
  const DerivedRates d = derived_rates(p);
  const CharFunction tent(p, DelayKernel::tent(1.0, 0.4), DelayKernel::erlang(2, 3.0, 0.5));
  CHECK(std::abs(eval_W(tent, 0.0) - d.gamma) < 1e-14);
  const CharFunction ode(p, DelayKernel::dirac(0.0), DelayKernel::dirac(0.0));
  for (cdouble l : {cdouble(1, 0), cdouble(0.3, -2), cdouble(-1, 4)}) {
    CHECK(std::abs(ode(l) - (l * l + l * d.beta + d.gamma)) < 1e-12);
  }
}

TEST_CASE("W hand evaluation for exponential kernels", "[charfun]") {
  const ModelParams p = with_rates(2.0, 1.0);
  const CharFunction cf(p, DelayKernel::erlang(1, 1.0), DelayKernel::erlang(1, 1.0));
  CHECK_THAT(std::real(cf(1.0)), WithinAbs(2.5, 1e-14));
}

TEST_CASE("W agrees with the closed forms at random points", "[charfun]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const ModelParams p = ModelParams::hahnfeldt(0.4, 2.0);
  for (int shift = 0; shift < 2; ++shift) {
    const double sigma = shift ? 0.35 : 0.0;
    const CharFunction cf(p, DelayKernel::erlang(2, 1.3, sigma), DelayKernel::erlang(3, 1.3, sigma));
    const CharFunction tf(p, DelayKernel::tent(0.9, 0.4), DelayKernel::tent(0.9, 0.4));
    int n = 0;
    while (n < 100) {
      const cdouble l(u(rng), u(rng));
      if (std::abs(l) > 10.0 || std::abs(l + 1.3) < 0.2) continue;
      ++n;
      const cdouble ref = erlang_W(p, 2, 3, 1.3, sigma, l);
      CHECK(std::abs(cf(l) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
      const cdouble tref = tent_W(p, 0.9, 0.4, l);
      CHECK(std::abs(tf(l) - tref) <= 1e-10 * std::max(1.0, std::abs(tref)));
    }
  }
}

TEST_CASE("reduced polynomial matches the displayed forms", "[charfun]") {
  const ModelParams p = with_rates(2.0, 1.0);
  const Polynomial q2 = erlang_reduced_poly(p, 2, 2, 1.0);
  const std::vector<double> expect2{1, 2, 1, 2, 1};
  REQUIRE(q2.degree() == 4);
  for (int k = 0; k <= 4; ++k) CHECK_THAT(q2.coeff(k), WithinAbs(expect2[k], 1e-14));
  const Polynomial q1 = erlang_reduced_poly(p, 1, 1, 1.0);
  const std::vector<double> expect1{1, 2, 1, 1};  // gamma, beta, a, 1
  for (int k = 0; k <= 3; ++k) CHECK_THAT(q1.coeff(k), WithinAbs(expect1[k], 1e-14));

  // m = 3 quintic: lambda^2 (a+lambda)^3 + a^3 (beta lambda + gamma)
  const ModelParams h = ModelParams::hahnfeldt(1.0, 0.0);
  const DerivedRates d = derived_rates(h);
  const double a = 0.7;
  const Polynomial q3 = erlang_reduced_poly(h, 3, 3, a);
  const Polynomial ref3 = Polynomial::monomial(2) * Polynomial::binomial_power(a, 1.0, 3) +
                          std::pow(a, 3) * Polynomial{d.gamma, d.beta};
  for (int k = 0; k <= 5; ++k) CHECK_THAT(q3.coeff(k), WithinAbs(ref3.coeff(k), 1e-12));
}

TEST_CASE("reduced polynomial cross-evaluates against W", "[charfun]") {
  const cdouble l(0.7, 0.3);
  const std::pair<int, int> cases[] = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1}, {1, 3}, {4, 2}};
  for (double alpha : {0.0, 0.5, 1.0}) {
    const ModelParams p = ModelParams::hahnfeldt(alpha, 1.0);
    for (const auto& [m1, m2] : cases) {
      const double a = 1.7;
      const int M = std::max(m1, m2);
      const Polynomial q = erlang_reduced_poly(p, m1, m2, a);
      const CharFunction cf(p, DelayKernel::erlang(m1, a), DelayKernel::erlang(m2, a));
      const cdouble ref = cf(l) * std::pow(a + l, M);
      CHECK(std::abs(q(l) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
      for (const auto& z : q.roots()) {
        // a root at -a comes from the common factor (a + lambda), not from W
        if (std::abs(z + a) < 1e-6) {
          CHECK(std::abs(q(z)) < 1e-8);
          continue;
        }
        CHECK(std::abs(cf(z) * std::pow(a + z, M)) < 1e-8);
      }
    }
  }
}

TEST_CASE("reduced polynomial rejects shifted or mismatched kernels", "[charfun]") {
  const ModelParams p = ModelParams::hahnfeldt();
  CHECK_THROWS_AS(erlang_reduced_poly(p, DelayKernel::erlang(1, 1.0, 0.1), DelayKernel::erlang(1, 1.0)), AnalysisError);
  CHECK_THROWS_AS(erlang_reduced_poly(p, DelayKernel::erlang(1, 1.0), DelayKernel::erlang(1, 2.0)), AnalysisError);
  CHECK_THROWS_AS(erlang_reduced_poly(p, DelayKernel::tent(1.0, 0.5), DelayKernel::erlang(1, 1.0)), AnalysisError);
  CHECK_NOTHROW(erlang_reduced_poly(p, DelayKernel::erlang(2, 1.0), DelayKernel::erlang(1, 1.0)));
}

TEST_CASE("shifted D", "[charfun]") {
  const ModelParams p = ModelParams::hahnfeldt(0.7, 0.5);
  const DerivedRates d = derived_rates(p);
  const cdouble l(0.4, 1.1);
  const Polynomial q = erlang_reduced_poly(p, 2, 1, 0.9);
  CHECK(std::abs(erlang_shifted_D(p, 2, 1, 0.9, 0.0, l) - q(l)) < 1e-12);
  CHECK_THAT(std::real(erlang_shifted_D(p, 2, 1, 0.9, 0.3, 0.0)), WithinRel(d.gamma * 0.81, 1e-14));
  const cdouble i(0.0, 1.0);
  const ModelParams r = with_rates(2.0, 1.0);
  const cdouble hand = i * i * (1.0 + i) + (i * 2.0 + 1.0) * std::exp(-i);
  CHECK(std::abs(erlang_shifted_D(r, 1, 1, 1.0, 1.0, i) - hand) < 1e-14);
  const CharFunction cf(r, DelayKernel::erlang(1, 1.0, 1.0), DelayKernel::erlang(1, 1.0, 1.0));
  CHECK(std::abs(cf(i) * (1.0 + i) - hand) < 1e-14);
}

TEST_CASE("auxiliary function for Erlang kernels", "[charfun]") {
  const ModelParams p = with_rates(2.0, 1.0);
  const AuxFunction f = aux_F_erlang(p, 1, 1, 1.0);
  CHECK(f.tag() == AuxCase::ErlangEqualM);
  const Polynomial ref = Polynomial{0, 0, 1} * Polynomial{1, 1} - Polynomial{1, 4};
  for (int k = 0; k <= 3; ++k) CHECK_THAT(f.poly_u().coeff(k), WithinAbs(ref.coeff(k), 1e-14));

  const ModelParams h = ModelParams::hahnfeldt(1.0, 0.0);
  const DerivedRates d = derived_rates(h);
  const double a = 1.3;
  const AuxFunction f21 = aux_F_erlang(h, 2, 1, a);
  CHECK(f21.tag() == AuxCase::Erlang21);
  CHECK_THAT(f21.poly_u().coeff(3), WithinRel(2 * a * a, 1e-14));
  CHECK_THAT(f21.poly_u().coeff(0), WithinRel(-d.gamma * d.gamma * std::pow(a, 4), 1e-14));
  CHECK(aux_F_erlang(h, 1, 2, a).tag() == AuxCase::Erlang12);
  CHECK(aux_F_erlang(h, 1, 3, a).tag() == AuxCase::ErlangGeneral);

  for (int m = 1; m <= 3; ++m) {
    CHECK_THAT(aux_F_erlang(h, m, m, a)(0.0), WithinRel(-std::pow(a, 2 * m) * d.gamma * d.gamma, 1e-14));
  }
}

TEST_CASE("explicit auxiliary forms equal the squared modulus", "[charfun]") {
  // F(w) = |P(iw)|^2 - |N(iw)|^2 from the split, for every case
  const std::pair<int, int> cases[] = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1}, {1, 3}, {3, 2}};
  for (double alpha : {0.0, 0.3, 1.0}) {
    const ModelParams p = ModelParams::hahnfeldt(alpha, 2.0);
    for (const auto& [m1, m2] : cases) {
      const double a = 0.8;
      const ErlangSplit s = erlang_split(p, m1, m2, a);
      const AuxFunction f = aux_F_erlang(p, m1, m2, a);
      for (double w : {0.1, 0.7, 1.9, 4.0}) {
        const cdouble iw(0.0, w);
        const double ref = std::norm(s.P(iw)) - std::norm(s.N(iw));
        CHECK_THAT(f(w), WithinAbs(ref, 1e-9 * std::max(1.0, std::abs(ref))));
      }
    }
  }
}

TEST_CASE("every simple root of F admits a crossing delay", "[charfun]") {
  const std::pair<int, int> cases[] = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1}};
  for (double alpha : {0.0, 1.0}) {
    const ModelParams p = ModelParams::hahnfeldt(alpha, 1.0);
    for (const auto& [m1, m2] : cases) {
      const double a = 2.5;
      const ErlangSplit s = erlang_split(p, m1, m2, a);
      for (const AuxRoot& root : aux_F_erlang(p, m1, m2, a).positive_roots()) {
        if (root.multiple) continue;
        const cdouble iw(0.0, root.omega);
        const cdouble z = -s.P(iw) / s.N(iw);
        double sigma = std::fmod(-std::arg(z) + 4 * std::numbers::pi, 2 * std::numbers::pi) / root.omega;
        const cdouble D = erlang_shifted_D(p, m1, m2, a, sigma, iw);
        CHECK(std::abs(D) < 1e-8 * std::max(1.0, std::abs(s.P(iw))));
      }
    }
  }
}

TEST_CASE("tent real and imaginary parts", "[charfun]") {
  const ModelParams p = ModelParams::hahnfeldt(1.0, 0.0);
  const DerivedRates d = derived_rates(p);
  WParts w = tent_W_parts(p, 1.0, 0.5, 0.0);
  CHECK_THAT(w.re, WithinAbs(d.gamma, 1e-15));
  CHECK(w.im == 0.0);
  const double om = 2 * std::numbers::pi / 0.5;
  w = tent_W_parts(p, 1.0, 0.5, om);
  CHECK_THAT(w.re, WithinAbs(-om * om, 1e-12));
  CHECK_THAT(w.im, WithinAbs(0.0, 1e-12));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const double eps = 0.05 + 2.0 * u(rng);
    const double sigma = eps + 3.0 * u(rng);
    const double om2 = 20.0 * u(rng);
    const CharFunction cf(p, DelayKernel::tent(sigma, eps), DelayKernel::tent(sigma, eps));
    const cdouble ref = cf(cdouble(0.0, om2));
    const WParts got = tent_W_parts(p, sigma, eps, om2);
    CHECK(std::abs(got.re - ref.real()) < 1e-12 * std::max(1.0, om2 * om2));
    CHECK(std::abs(got.im - ref.imag()) < 1e-12 * std::max(1.0, om2 * om2));
  }
}

TEST_CASE("tent auxiliary function", "[charfun]") {
  const ModelParams p = ModelParams::hahnfeldt(1.0, 0.0);
  const DerivedRates d = derived_rates(p);
  const AuxFunction f = aux_F_tent(p, 0.5);
  CHECK(f.tag() == AuxCase::Tent);
  CHECK_THAT(f(0.0), WithinAbs(-d.gamma * d.gamma, 1e-15));
  const double om = 2 * std::numbers::pi / 0.5;
  CHECK_THAT(f(om), WithinRel(std::pow(om, 4), 1e-12));
  const auto roots = f.positive_roots();
  REQUIRE_FALSE(roots.empty());
  for (const AuxRoot& r : roots) {
    CHECK(std::abs(f(r.omega)) < 1e-8 * std::pow(r.omega, 4));
    // the phase equation gives a delay with W(i w0) = 0, and Re^2 + Im^2 vanishes there
    const cdouble iw(0.0, r.omega);
    const cdouble z = -iw * iw / ((iw * d.beta + d.gamma) * tent_shape(iw * 0.5));
    const double sigma = std::fmod(-std::arg(z) + 4 * std::numbers::pi, 2 * std::numbers::pi) / r.omega;
    const WParts w = tent_W_parts(p, sigma, 0.5, r.omega);
    CHECK(std::hypot(w.re, w.im) < 1e-8 * std::max(1.0, r.omega * r.omega));
  }
  CHECK(f.search_limit() >= 2.0 * (d.beta + std::sqrt(d.gamma)));
}
