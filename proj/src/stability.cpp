#include "angio/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "angio/error.hpp"

namespace angio {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_0_2pi(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

void require_margin(const ModelParams& params) {
  params.validate();
  if (params.b < params.mu) {
    fail(ErrorKind::NoPositiveSteadyState, "b < mu: no positive steady state");
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Boundary: return "Boundary";
  }
  return "unknown";
}

std::string_view to_string(SigmaStatus s) {
  switch (s) {
    case SigmaStatus::Switch: return "Switch";
    case SigmaStatus::UnstableAtZero: return "UnstableAtZero";
    case SigmaStatus::BoundaryAtZero: return "BoundaryAtZero";
    case SigmaStatus::NoCrossing: return "NoCrossing";
  }
  return "unknown";
}

std::string_view to_string(SwitchGuarantee g) {
  switch (g) {
    case SwitchGuarantee::MainCondition: return "main-condition";
    case SwitchGuarantee::VerA: return "ver-a";
    case SwitchGuarantee::None: return "none";
  }
  return "unknown";
}

StabilityReport routh_hurwitz_stable(const Polynomial& poly) {
  if (poly.is_zero()) fail(ErrorKind::DegenerateInput, "Routh-Hurwitz on the zero polynomial");

  std::vector<double> c(poly.coeffs().rbegin(), poly.coeffs().rend());  // descending
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  bool degenerate = false;
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * cmax) {
    c.pop_back();  // root at lambda = 0
    degenerate = true;
  }
  if (c.front() < 0.0) {
    for (double& v : c) v = -v;
  }
  const int n = static_cast<int>(c.size()) - 1;
  StabilityReport report;
  if (n == 0) {
    report.verdict = degenerate ? Verdict::Boundary : Verdict::Stable;
    if (!degenerate) report.rhp_root_count = 0;
    return report;
  }

  const size_t width = static_cast<size_t>(n / 2 + 1);
  std::vector<std::vector<double>> R(static_cast<size_t>(n) + 1, std::vector<double>(width + 1, 0.0));
  for (int k = 0; 2 * k <= n; ++k) R[0][static_cast<size_t>(k)] = c[static_cast<size_t>(2 * k)];
  for (int k = 0; 2 * k + 1 <= n; ++k) R[1][static_cast<size_t>(k)] = c[static_cast<size_t>(2 * k + 1)];

  for (int i = 1; i <= n; ++i) {
    auto& row = R[static_cast<size_t>(i)];
    const auto& prev = R[static_cast<size_t>(i - 1)];
    double scale = 0.0;
    for (double v : prev) scale = std::max(scale, std::abs(v));
    double row_max = 0.0;
    for (double v : row) row_max = std::max(row_max, std::abs(v));
    const double tol = 1e-12 * std::max(scale, row_max);
    if (row_max <= tol) {
      // Vanishing row: differentiate the auxiliary polynomial built from the row above.
      const int order = n - (i - 1);
      for (size_t k = 0; k < width; ++k) row[k] = prev[k] * (order - 2.0 * static_cast<double>(k));
      degenerate = true;
    } else if (std::abs(row[0]) <= tol) {
      row[0] = 1e-10 * std::max(scale, row_max);
      degenerate = true;
    }
    if (i == n) break;
    auto& next = R[static_cast<size_t>(i + 1)];
    for (size_t k = 0; k < width; ++k) {
      next[k] = (row[0] * prev[k + 1] - prev[0] * row[k + 1]) / row[0];
    }
  }

  int changes = 0;
  for (int i = 1; i <= n; ++i) {
    if ((R[static_cast<size_t>(i)][0] > 0.0) != (R[static_cast<size_t>(i - 1)][0] > 0.0)) ++changes;
  }
  if (changes > 0) {
    report.verdict = Verdict::Unstable;
    report.rhp_root_count = changes;
  } else if (degenerate) {
    report.verdict = Verdict::Boundary;
  } else {
    report.verdict = Verdict::Stable;
    report.rhp_root_count = 0;
  }
  return report;
}

int companion_rhp_count(const Polynomial& poly, double tol) {
  int count = 0;
  for (const auto& z : poly.roots()) {
    if (z.real() > tol * std::max(1.0, std::abs(z))) ++count;
  }
  return count;
}

double companion_axis_distance(const Polynomial& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& z : poly.roots()) d = std::min(d, std::abs(z.real()) / std::max(1.0, std::abs(z)));
  return d;
}

CriticalA critical_a_nonshifted(const ModelParams& params, int m1, int m2) {
  require_margin(params);
  const auto [beta, gamma] = derived_rates(params);
  const double ab = params.alpha * params.b;
  const double r = params.r;
  auto from_value = [](double v) { return CriticalA{v <= 0.0, std::max(v, 0.0)}; };

  if (m1 == 1 && m2 == 1) return from_value(gamma / beta);
  if (m1 == 2 && m2 == 2) return from_value(0.5 * beta + 2.0 * gamma / beta);
  if (m1 == 2 && m2 == 1) return from_value(0.5 * beta + 2.0 * gamma / beta - ab);
  if (m1 == 3 && m2 == 3) {
    const Polynomial cubic{-gamma * gamma, 3.0 * gamma * beta, -3.0 * (8.0 * gamma + 3.0 * beta * beta),
                           8.0 * beta};
    double largest = 0.0;
    for (double root : cubic.positive_real_roots()) largest = std::max(largest, root);
    return from_value(std::max(largest, 9.0 * beta / 8.0));
  }
  if (m1 == 1 && m2 == 2) {
    // Second Hurwitz determinant of the quartic; its positivity implies the first.
    if (gamma == 0.0) return from_value(0.5 * (ab - r));
    const Polynomial cubic{-gamma * gamma, -2.0 * ab * gamma, 2.0 * r * beta - beta * beta - 2.0 * gamma,
                           2.0 * beta};
    const auto roots = cubic.positive_real_roots();
    if (roots.size() != 1) {
      fail(ErrorKind::ConditionFailure, "(1,2) threshold polynomial has no unique positive root");
    }
    return from_value(roots.front());
  }
  fail(ErrorKind::Unsupported, "closed-form threshold only for (1,1), (2,2), (3,3), (1,2), (2,1)");
}

CriticalA critical_a_scan(const ModelParams& params, int m1, int m2, double a_lo, double a_hi) {
  require_margin(params);
  if (!(a_lo > 0.0) || !(a_hi > a_lo)) fail(ErrorKind::InvalidParameter, "need 0 < a_lo < a_hi");
  auto stable = [&](double a) {
    return routh_hurwitz_stable(erlang_reduced_poly(params, m1, m2, a)).verdict == Verdict::Stable;
  };
  if (!stable(a_hi)) fail(ErrorKind::ConditionFailure, "not stable at the upper end of the a range");
  const int n = 600;
  const double ratio = std::pow(a_hi / a_lo, 1.0 / n);
  int last_unstable = -1;
  for (int i = 0; i < n; ++i) {
    if (!stable(a_lo * std::pow(ratio, i))) last_unstable = i;
  }
  if (last_unstable < 0) return CriticalA{true, 0.0};
  double lo = a_lo * std::pow(ratio, last_unstable);
  double hi = a_lo * std::pow(ratio, last_unstable + 1);
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? hi : lo) = mid;
  }
  return CriticalA{false, 0.5 * (lo + hi)};
}

Crossing discrete_delay_crossing(const ModelParams& params) {
  require_margin(params);
  const auto [beta, gamma] = derived_rates(params);
  const double b2 = beta * beta;
  const double w = std::sqrt(0.5 * (b2 + std::sqrt(b2 * b2 + 4.0 * gamma * gamma)));
  return {std::atan2(beta * w, gamma) / w, w};
}

CriticalSigma critical_sigma_erlang(const ModelParams& params, int m1, int m2, double a) {
  require_margin(params);
  CriticalSigma out;
  const StabilityReport at_zero = routh_hurwitz_stable(erlang_reduced_poly(params, m1, m2, a));
  if (at_zero.verdict == Verdict::Unstable) {
    out.status = SigmaStatus::UnstableAtZero;
    return out;
  }
  if (at_zero.verdict == Verdict::Boundary) {
    out.status = SigmaStatus::BoundaryAtZero;
    return out;
  }
  const AuxFunction F = aux_F_erlang(params, m1, m2, a);
  out.aux_case = F.tag();
  const ErlangSplit split = erlang_split(params, m1, m2, a);
  double best = std::numeric_limits<double>::infinity();
  for (const AuxRoot& root : F.positive_roots()) {
    const cdouble iw(0.0, root.omega);
    const cdouble z = -split.P(iw) / split.N(iw);  // = exp(-i w sigma)
    CrossingCandidate cand{root.omega, root.slope, root.multiple,
                           wrap_0_2pi(-std::arg(z)) / root.omega};
    out.multiple_root = out.multiple_root || root.multiple;
    if (!root.multiple && root.slope > 0.0 && cand.sigma < best) {
      best = cand.sigma;
      out.sigma0 = cand.sigma;
      out.omega0 = cand.omega0;
    }
    out.candidates.push_back(cand);
  }
  out.status = std::isfinite(best) ? SigmaStatus::Switch : SigmaStatus::NoCrossing;
  return out;
}

int mikhailov_count(const std::function<cdouble(cdouble)>& W, double omega_max, int n, int steps) {
  if (!(omega_max > 0.0) || steps < 1 || n < 0) {
    fail(ErrorKind::InvalidParameter, "mikhailov_count needs omega_max > 0, steps >= 1, n >= 0");
  }
  auto at = [&](double w) {
    const cdouble v = W(cdouble(0.0, w));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorKind::NonConvergent, "characteristic function is not finite on the sweep");
    }
    if (std::abs(v) < 1e-9 * (1.0 + std::pow(w, n))) {
      fail(ErrorKind::OnAxisZero, "characteristic function vanishes on the imaginary axis near omega = " +
                                      std::to_string(w));
    }
    return v;
  };
  auto tail_ok = [&](double w) {
    for (double f : {1.0, 1.5, 2.0, 3.0, 5.0}) {
      const double wf = w * f;
      if (std::abs(W(cdouble(0.0, wf)) / std::pow(cdouble(0.0, wf), n) - 1.0) >= 0.5) return false;
    }
    return true;
  };
  for (int doublings = 0; !tail_ok(omega_max); ++doublings) {
    if (doublings > 40) fail(ErrorKind::NonConvergent, "no lambda^n dominance found on the sweep");
    omega_max *= 2.0;
  }

  std::function<double(double, cdouble, double, cdouble, int)> increment =
      [&](double w0, cdouble v0, double w1, cdouble v1, int depth) -> double {
    const double d = std::arg(v1 / v0);
    if (std::abs(d) <= kPi / 4.0) return d;
    if (depth > 40) fail(ErrorKind::NonConvergent, "argument sweep failed to resolve");
    const double wm = 0.5 * (w0 + w1);
    const cdouble vm = at(wm);
    return increment(w0, v0, wm, vm, depth + 1) + increment(wm, vm, w1, v1, depth + 1);
  };

  double delta = 0.0;
  double w0 = 0.0;
  cdouble v0 = at(0.0);
  for (int i = 1; i <= steps; ++i) {
    const double w1 = omega_max * static_cast<double>(i) / steps;
    const cdouble v1 = at(w1);
    delta += increment(w0, v0, w1, v1, 0);
    w0 = w1;
    v0 = v1;
  }
  delta += std::arg(std::pow(cdouble(0.0, omega_max), n) / v0);

  const double k = 0.5 * n - delta / kPi;
  const double kr = std::round(k);
  if (std::abs(k - kr) >= 0.1 || kr < 0.0) {
    fail(ErrorKind::NonConvergent, "argument change does not give an integer root count");
  }
  return static_cast<int>(kr);
}

double mikhailov_omega_max(const CharFunction& cf) {
  const auto [beta, gamma] = cf.rates();
  double scale = 1.0 + beta + std::sqrt(gamma);
  for (const DelayKernel* k : {&cf.kernel1(), &cf.kernel2()}) {
    if (const auto* e = k->as_erlang()) scale += e->a;
    if (const auto* t = k->as_tent()) scale += 1.0 / t->epsilon;
  }
  return 10.0 * scale;
}

int mikhailov_count(const CharFunction& cf, int steps) {
  return mikhailov_count([&](cdouble l) { return cf(l); }, mikhailov_omega_max(cf), 2, steps);
}

int mikhailov_count_erlang(const ModelParams& params, int m1, int m2, double a, double sigma,
                           int steps) {
  const ErlangSplit split = erlang_split(params, m1, m2, a);
  const auto [beta, gamma] = derived_rates(params);
  auto D = [&](cdouble l) { return split.P(l) + split.N(l) * std::exp(-l * sigma); };
  return mikhailov_count(D, 10.0 * (1.0 + a + beta + std::sqrt(gamma)), 2 + split.M, steps);
}

TentBounds tent_sufficient_bounds(const ModelParams& params) {
  params.validate();
  params.require_positive_steady_state();
  const auto [beta, gamma] = derived_rates(params);
  const double d = beta + std::sqrt(beta * beta + 4.0 * gamma);
  TentBounds out;
  out.sigma_stable_below = kPi / (d + gamma * kPi / beta);
  const double lo = beta / gamma;
  const double hi = kTwoPi / d;
  if (lo < hi) out.instability = std::make_pair(lo, hi);
  return out;
}

std::optional<SwitchSample> tent_switch_solve(const ModelParams& params, double epsilon,
                                              double omega_guess, double sigma_guess) {
  const auto [beta, gamma] = derived_rates(params);
  double w = omega_guess;
  double s = sigma_guess;

  auto residual = [&](double ww, double ss, double& re, double& im) {
    const WParts p = tent_W_parts(params, ss, epsilon, ww);
    re = p.re;
    im = p.im;
    return std::hypot(re, im);
  };

  double re = 0.0, im = 0.0;
  double norm = residual(w, s, re, im);
  for (int it = 0; it < 60; ++it) {
    if (norm < 1e-10) return SwitchSample{epsilon, s, w};
    const double c = std::cos(w * s);
    const double sn = std::sin(w * s);
    const double A = gamma * c + beta * w * sn;
    const double B = beta * w * c - gamma * sn;
    const double g = tent_shape_real(epsilon * w);
    const double dg = epsilon * tent_shape_real_deriv(epsilon * w);
    const double dA_dw = beta * sn + s * B;
    const double dB_dw = beta * c - s * A;
    const double j11 = -2.0 * w + dg * A + g * dA_dw;
    const double j12 = g * w * B;
    const double j21 = dg * B + g * dB_dw;
    const double j22 = -g * w * A;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const double dw = (re * j22 - im * j12) / det;
    const double ds = (j11 * im - j21 * re) / det;

    double step = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const double wn = w - step * dw;
      const double sn2 = s - step * ds;
      if (wn > 0.0 && sn2 >= 0.0) {
        double ren = 0.0, imn = 0.0;
        const double nn = residual(wn, sn2, ren, imn);
        if (nn < norm) {
          w = wn;
          s = sn2;
          re = ren;
          im = imn;
          norm = nn;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  if (norm < 1e-10) return SwitchSample{epsilon, s, w};
  return std::nullopt;
}

namespace {

// Advances a converged solution to epsilon = target, halving the step on failure.
SwitchSample continue_to(const ModelParams& params, SwitchSample cur, double target, double span) {
  int retries = 0;
  double h = target - cur.epsilon;
  while (cur.epsilon < target) {
    const double cap = 0.1 * std::max(cur.sigma_cr, cur.epsilon);
    const double e = std::min({cur.epsilon + std::min(h, cap), target});
    const auto sol = tent_switch_solve(params, e, cur.omega0, cur.sigma_cr);
    if (sol) {
      cur = *sol;
      retries = 0;
      h = target - cur.epsilon;
      continue;
    }
    h = 0.5 * std::min(h, cap);
    if (++retries > 3 || h < 1e-4 * span) {
      fail(ErrorKind::ContinuationStall,
           "switch-curve continuation stalled near epsilon = " + std::to_string(cur.epsilon));
    }
  }
  return cur;
}

SwitchSample switch_seed(const ModelParams& params, double epsilon) {
  const Crossing d = discrete_delay_crossing(params);
  const auto sol = tent_switch_solve(params, epsilon, d.omega, d.sigma);
  if (!sol) fail(ErrorKind::ContinuationStall, "switch-curve seed from the discrete-delay limit failed");
  return *sol;
}

}  // namespace

SwitchCurve tent_switch_curve(const ModelParams& params, std::span<const double> epsilon_grid) {
  require_margin(params);
  if (epsilon_grid.empty()) fail(ErrorKind::InvalidParameter, "empty epsilon grid");
  for (size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0) || (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))) {
      fail(ErrorKind::InvalidParameter, "epsilon grid must be positive and increasing");
    }
  }
  const Crossing d = discrete_delay_crossing(params);
  const double span = epsilon_grid.back();
  SwitchSample cur = switch_seed(params, std::min(epsilon_grid.front(), 1e-6 * d.sigma));

  SwitchCurve curve;
  for (double eps : epsilon_grid) {
    cur = continue_to(params, cur, eps, span);
    cur.epsilon = eps;
    if (cur.sigma_cr < eps) {
      curve.neutral_excluded.push_back(eps);
    } else {
      curve.samples.push_back(cur);
    }
  }
  return curve;
}

SwitchEndpoints tent_switch_endpoints(const ModelParams& params) {
  require_margin(params);
  const Crossing d = discrete_delay_crossing(params);
  SwitchEndpoints out;
  out.small_eps = switch_seed(params, 1e-6 * d.sigma);

  SwitchSample lo = out.small_eps;
  const double span = 100.0 * d.sigma;
  while (true) {
    const double target = lo.epsilon + 0.02 * lo.sigma_cr;
    if (target > span) fail(ErrorKind::NonConvergent, "switch curve never meets sigma = epsilon");
    const SwitchSample hi = continue_to(params, lo, target, span);
    if (hi.sigma_cr <= hi.epsilon) {
      double elo = lo.epsilon, ehi = hi.epsilon;
      SwitchSample best = lo;
      for (int it = 0; it < 80 && ehi - elo > 1e-13 * ehi; ++it) {
        const double mid = 0.5 * (elo + ehi);
        const SwitchSample m = continue_to(params, best, mid, span);
        if (m.sigma_cr > m.epsilon) {
          elo = mid;
          best = m;
        } else {
          ehi = mid;
        }
      }
      out.neutral_end = best;
      return out;
    }
    lo = hi;
  }
}

std::optional<SwitchSample> tent_switch_direct(const ModelParams& params, double epsilon) {
  require_margin(params);
  const auto [beta, gamma] = derived_rates(params);
  const AuxFunction F = aux_F_tent(params, epsilon);
  std::optional<SwitchSample> best;
  for (const AuxRoot& root : F.positive_roots()) {
    if (root.multiple || !(root.slope > 0.0)) continue;
    const double w = root.omega;
    const double g = tent_shape_real(epsilon * w);
    if (g == 0.0) continue;
    const cdouble z = (w * w) / (cdouble(gamma, beta * w) * g);  // = exp(-i w sigma)
    double sigma = wrap_0_2pi(-std::arg(z)) / w;
    while (sigma < epsilon) sigma += kTwoPi / w;
    if (!best || sigma < best->sigma_cr) best = SwitchSample{epsilon, sigma, w};
  }
  return best;
}

Theorem4Flags check_theorem4_conditions(const ModelParams& params, double a) {
  require_margin(params);
  const auto [beta, gamma] = derived_rates(params);
  const double ab = params.alpha * params.b;
  const double ratio = 2.0 * gamma / (beta * beta);
  const double threshold = ab * std::min(1.0, ratio);
  Theorem4Flags f;
  f.alpha1 = 2.0 * ab * gamma - a * beta * beta;
  f.alpha2 = ab * ab - a * a;
  f.main_condition = a >= threshold;
  f.ver_a = a < threshold &&
            std::pow(a * a + 2.0 * ab * ab, 3) <
                27.0 * std::pow(2.0 * ab * gamma + a * (ab * ab - beta * beta), 2);
  f.notcontra = ab < beta && 1.0 < ratio;
  f.descartes_path = params.alpha == 0.0;
  f.guarantee = f.main_condition ? SwitchGuarantee::MainCondition
                : f.ver_a        ? SwitchGuarantee::VerA
                                 : SwitchGuarantee::None;
  return f;
}

int hopf_transversality(const std::function<double(double)>& F, double omega0) {
  if (!(omega0 > 0.0)) fail(ErrorKind::InvalidParameter, "crossing frequency must be positive");
  const double far = std::abs(F(1.5 * omega0));
  if (std::abs(F(omega0)) > 1e-6 * std::max(1.0, far)) {
    fail(ErrorKind::InvalidParameter, "omega0 is not a root of the auxiliary function");
  }
  const double h = 1e-6 * std::max(1.0, omega0);
  auto central = [&](double step) { return (F(omega0 + step) - F(omega0 - step)) / (2.0 * step); };
  const double d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  const double scale = std::max(1.0, far / (0.5 * omega0));
  if (std::abs(d) < 1e-8 * scale) {
    fail(ErrorKind::InconclusiveSign, "F' vanishes at the crossing frequency (multiple root)");
  }
  return d > 0.0 ? 1 : -1;
}

int hopf_transversality(const AuxFunction& F, double omega0) {
  return hopf_transversality([&](double w) { return F(w); }, omega0);
}

}  // namespace angio
