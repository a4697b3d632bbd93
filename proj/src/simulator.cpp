#include "angio/simulator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "angio/error.hpp"

namespace angio {

namespace {

constexpr double kBlowUp = 1e6;

struct Hermite {
  double h00, h10, h01, h11;
};

Hermite hermite(double th) {
  const double t2 = th * th;
  const double t3 = t2 * th;
  return {2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + th, -2.0 * t3 + 3.0 * t2, t3 - t2};
}

Hermite hermite_deriv(double th) {
  const double t2 = th * th;
  return {6.0 * t2 - 6.0 * th, 3.0 * t2 - 4.0 * th + 1.0, -6.0 * t2 + 6.0 * th, 3.0 * t2 - 2.0 * th};
}

// Gauss-Legendre rule on [-1, 1] from the eigen-decomposition of the Jacobi matrix.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  for (int k = 0; k < order; ++k) {
    rule.nodes.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    rule.weights.push_back(2.0 * v * v);
  }
  return rule;
}

using Weights = std::array<double, 6>;

// int_{ta}^{tb} f(tau) H_k(theta) dtau with theta = (tb - tau) / (tb - ta), split at kernel
// breakpoints. Entries 0..3 pair with the cubic Hermite basis, 4..5 with the linear one.
Weights interval_weights(const DelayKernel& kernel, const GaussRule& rule, double ta, double tb,
                         const std::vector<double>& breaks) {
  std::vector<double> cuts{ta};
  for (double b : breaks) {
    if (b > ta && b < tb) cuts.push_back(b);
  }
  cuts.push_back(tb);
  Weights w{};
  const double len = tb - ta;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double tau = mid + half * rule.nodes[q];
      const double f = density(kernel, tau) * half * rule.weights[q];
      if (f == 0.0) continue;
      const double th = (tb - tau) / len;
      const Hermite H = hermite(th);
      w[0] += f * H.h00;
      w[1] += f * H.h10;
      w[2] += f * H.h01;
      w[3] += f * H.h11;
      w[4] += f * (1.0 - th);
      w[5] += f * th;
    }
  }
  return w;
}

// Precomputed convolution weights for one kernel. Stage offsets c = 0, 1/2, 1 of a step.
struct ConvPlan {
  enum class Mode { Quadrature, Dirac } mode = Mode::Quadrature;
  double sigma = 0.0;
  std::array<int, 3> first{0, 0, 0};
  std::array<std::vector<Weights>, 3> w;
  std::array<Weights, 3> partial{};
  int max_lag = 0;  // largest node offset referenced
};

constexpr std::array<double, 3> kStageOffset{0.0, 0.5, 1.0};

ConvPlan make_plan(const DelayKernel& kernel, double dt, const SimConfig& cfg) {
  ConvPlan plan;
  if (const auto* d = kernel.as_dirac()) {
    plan.mode = ConvPlan::Mode::Dirac;
    plan.sigma = d->sigma;
    plan.max_lag = static_cast<int>(std::ceil(d->sigma / dt)) + 2;
    return plan;
  }
  const GaussRule rule = gauss_legendre(cfg.quad_order);
  const Support sup = quadrature_support(kernel, cfg.tail_tol);
  const std::vector<double> breaks = kernel.breakpoints();
  for (size_t ci = 0; ci < 3; ++ci) {
    const double c = kStageOffset[ci] * dt;
    double mass = 0.0;
    if (ci > 0) {
      plan.partial[ci] = interval_weights(kernel, rule, 0.0, c, breaks);
      mass += plan.partial[ci][0] + plan.partial[ci][2];
    }
    const int J = std::max(0, static_cast<int>(std::ceil((sup.hi - c) / dt)));
    int first = -1;
    for (int j = 0; j < J; ++j) {
      const double ta = c + j * dt;
      const double tb = ta + dt;
      if (tb <= sup.lo) {
        plan.w[ci].push_back(Weights{});
        continue;
      }
      if (first < 0) first = j;
      plan.w[ci].push_back(interval_weights(kernel, rule, ta, tb, breaks));
      mass += plan.w[ci].back()[0] + plan.w[ci].back()[2];
    }
    plan.first[ci] = std::max(first, 0);
    // Renormalise the truncated kernel so constant histories are reproduced exactly.
    for (auto& wj : plan.w[ci]) {
      for (double& v : wj) v /= mass;
    }
    for (double& v : plan.partial[ci]) v /= mass;
    plan.max_lag = std::max(plan.max_lag, J + 2);
  }
  return plan;
}

// Node storage for exp(k y) and its left/right time derivatives; index 0 is the
// earliest history node.
struct NodeSeries {
  std::vector<double> E, dL, dR;
};

struct StagePoint {
  double E = 1.0;
  double dE = 0.0;
};

double convolve(const ConvPlan& plan, size_t ci, long n, double dt, const NodeSeries& s,
                StagePoint stage) {
  const double c = kStageOffset[ci];
  if (plan.mode == ConvPlan::Mode::Dirac) {
    const double pos = static_cast<double>(n) + c - plan.sigma / dt;
    if (pos >= static_cast<double>(n) - 1e-12) {
      if (ci == 0) return s.E[static_cast<size_t>(n)];
      const double hc = c * dt;
      const double th = (pos - static_cast<double>(n)) / c;
      const Hermite H = hermite(th);
      const double v = H.h00 * s.E[static_cast<size_t>(n)] + H.h10 * hc * s.dR[static_cast<size_t>(n)] +
                       H.h01 * stage.E + H.h11 * hc * stage.dE;
      return v > 0.0 ? v : (1.0 - th) * s.E[static_cast<size_t>(n)] + th * stage.E;
    }
    const double fl = std::floor(pos);
    const auto L = static_cast<size_t>(fl);
    const double th = pos - fl;
    const Hermite H = hermite(th);
    const double v = H.h00 * s.E[L] + H.h10 * dt * s.dR[L] + H.h01 * s.E[L + 1] + H.h11 * dt * s.dL[L + 1];
    return v > 0.0 ? v : (1.0 - th) * s.E[L] + th * s.E[L + 1];
  }
  double sum = 0.0;
  const auto N = static_cast<size_t>(n);
  const double hc = c * dt;
  if (ci > 0) {
    const Weights& p = plan.partial[ci];
    sum += p[0] * s.E[N] + p[1] * hc * s.dR[N] + p[2] * stage.E + p[3] * hc * stage.dE;
  }
  const auto& w = plan.w[ci];
  const auto first = static_cast<size_t>(plan.first[ci]);
  for (size_t j = first; j < w.size(); ++j) {
    const size_t R = N - j;
    const size_t L = R - 1;
    const Weights& q = w[j];
    sum += q[0] * s.E[L] + q[1] * dt * s.dR[L] + q[2] * s.E[R] + q[3] * dt * s.dL[R];
  }
  if (sum > 0.0) return sum;
  // Hermite overshoot on an under-resolved spike of exp(y): fall back to the
  // positivity-preserving linear interpolant.
  sum = 0.0;
  if (ci > 0) sum += plan.partial[ci][4] * s.E[N] + plan.partial[ci][5] * stage.E;
  for (size_t j = first; j < w.size(); ++j) sum += w[j][4] * s.E[N - j - 1] + w[j][5] * s.E[N - j];
  return sum;
}

void check_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) fail(ErrorKind::ConfigError, "dt must be > 0");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) fail(ErrorKind::ConfigError, "T must be > 0");
  if (!(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0)) {
    fail(ErrorKind::ConfigError, "tail_tol must lie in (0, 1)");
  }
  if (cfg.quad_order < 1 || cfg.quad_order > 64) {
    fail(ErrorKind::ConfigError, "quad_order must lie in [1, 64]");
  }
}

bool escaped(double x, double y) {
  return !std::isfinite(x) || !std::isfinite(y) || std::abs(x) > kBlowUp || std::abs(y) > kBlowUp;
}

}  // namespace

History History::constant(double x0, double y0) { return from_samples({{0.0, x0, y0}}); }

History History::from_samples(std::vector<Sample> samples) {
  if (samples.empty()) fail(ErrorKind::InvalidParameter, "history needs at least one sample");
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
      fail(ErrorKind::InvalidParameter, "history values must be finite");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      fail(ErrorKind::InvalidParameter, "history samples must be strictly increasing in t");
    }
  }
  if (samples.back().t != 0.0) fail(ErrorKind::InvalidParameter, "history must end at t = 0");
  History h;
  const size_t n = samples.size();
  h.slopes_.assign(n, State{});
  auto slope = [&](size_t i0, double w0, double w1, double w2) {
    return State{w0 * samples[i0].x + w1 * samples[i0 + 1].x + w2 * samples[i0 + 2].x,
                 w0 * samples[i0].y + w1 * samples[i0 + 1].y + w2 * samples[i0 + 2].y};
  };
  if (n == 2) {
    const double dt = samples[1].t - samples[0].t;
    const State d{(samples[1].x - samples[0].x) / dt, (samples[1].y - samples[0].y) / dt};
    h.slopes_ = {d, d};
  } else if (n >= 3) {
    // Three-point derivatives on a non-uniform grid: one-sided at the ends.
    for (size_t i = 1; i + 1 < n; ++i) {
      const double h1 = samples[i].t - samples[i - 1].t;
      const double h2 = samples[i + 1].t - samples[i].t;
      h.slopes_[i] = slope(i - 1, -h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2)));
    }
    double h1 = samples[1].t - samples[0].t, h2 = samples[2].t - samples[1].t;
    h.slopes_[0] = slope(0, -(2 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2)));
    h1 = samples[n - 2].t - samples[n - 3].t;
    h2 = samples[n - 1].t - samples[n - 2].t;
    h.slopes_[n - 1] = slope(n - 3, h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (h1 + 2 * h2) / (h2 * (h1 + h2)));
  }
  h.samples_ = std::move(samples);
  return h;
}

History History::from_function(const std::function<State(double)>& phi, double lookback, double dt) {
  if (!(lookback >= 0.0) || !(dt > 0.0)) fail(ErrorKind::InvalidParameter, "need lookback >= 0, dt > 0");
  const int n = std::max(1, static_cast<int>(std::ceil(lookback / dt)));
  std::vector<Sample> s;
  for (int k = n; k >= 0; --k) {
    const double t = (k == 0) ? 0.0 : -lookback * k / n;
    const State v = phi(t);
    s.push_back({t, v.x, v.y});
  }
  if (lookback == 0.0) s.erase(s.begin(), s.end() - 1);
  return from_samples(std::move(s));
}

State History::operator()(double t) const {
  if (t <= samples_.front().t) return {samples_.front().x, samples_.front().y};
  if (t >= samples_.back().t) return {samples_.back().x, samples_.back().y};
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const Sample& s) { return v < s.t; });
  const size_t R = static_cast<size_t>(it - samples_.begin());
  const size_t L = R - 1;
  const double len = samples_[R].t - samples_[L].t;
  const Hermite H = hermite((t - samples_[L].t) / len);
  return {H.h00 * samples_[L].x + H.h10 * len * slopes_[L].x + H.h01 * samples_[R].x + H.h11 * len * slopes_[R].x,
          H.h00 * samples_[L].y + H.h10 * len * slopes_[L].y + H.h01 * samples_[R].y + H.h11 * len * slopes_[R].y};
}

State History::derivative(double t) const {
  if (samples_.size() < 2 || t < samples_.front().t) return {0.0, 0.0};
  if (t >= samples_.back().t) return slopes_.back();
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const Sample& s) { return v < s.t; });
  const size_t R = static_cast<size_t>(it - samples_.begin());
  const size_t L = R - 1;
  const double len = samples_[R].t - samples_[L].t;
  const Hermite H = hermite_deriv((t - samples_[L].t) / len);
  return {(H.h00 * samples_[L].x + H.h01 * samples_[R].x) / len + H.h10 * slopes_[L].x + H.h11 * slopes_[R].x,
          (H.h00 * samples_[L].y + H.h01 * samples_[R].y) / len + H.h10 * slopes_[L].y + H.h11 * slopes_[R].y};
}

double max_resolved_dt(const DelayKernel& kernel1, const DelayKernel& kernel2) {
  double scale = std::numeric_limits<double>::infinity();
  for (const DelayKernel* k : {&kernel1, &kernel2}) {
    if (const auto* d = k->as_dirac()) {
      if (d->sigma > 0.0) scale = std::min(scale, d->sigma);
    } else if (const auto* e = k->as_erlang()) {
      scale = std::min(scale, 1.0 / e->a);
      if (e->sigma > 0.0) scale = std::min(scale, e->sigma);
    } else if (const auto* t = k->as_tent()) {
      scale = std::min({scale, t->epsilon, t->sigma});
    }
  }
  return scale / 20.0;
}

State Trajectory::at(double t) const {
  if (samples.empty()) fail(ErrorKind::DegenerateInput, "empty trajectory");
  if (t <= samples.front().t) return {samples.front().x, samples.front().y};
  if (t >= samples.back().t) return {samples.back().x, samples.back().y};
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const TrajectorySample& s) { return v < s.t; });
  const auto& R = *it;
  const auto& L = *(it - 1);
  const double len = R.t - L.t;
  const Hermite H = hermite((t - L.t) / len);
  return {H.h00 * L.x + H.h10 * len * L.dx + H.h01 * R.x + H.h11 * len * R.dx,
          H.h00 * L.y + H.h10 * len * L.dy + H.h01 * R.y + H.h11 * len * R.dy};
}

std::vector<OriginalSample> Trajectory::original(const SteadyState& steady) const {
  std::vector<OriginalSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back({s.t, steady.p_e * std::exp(s.x), steady.q_e * std::exp(s.x - s.y)});
  }
  return out;
}

Trajectory simulate(const ModelParams& params, const GrowthFunction& h, const DelayKernel& kernel1,
                    const DelayKernel& kernel2, const History& initial, const SimConfig& cfg) {
  params.validate();
  check_config(cfg);
  const double dt = cfg.dt;
  if (dt > max_resolved_dt(kernel1, kernel2) * (1.0 + 1e-12)) {
    fail(ErrorKind::ConfigError, "dt must not exceed min(epsilon, 1/a, sigma) / 20");
  }
  const ConvPlan plan1 = make_plan(kernel1, dt, cfg);
  const ConvPlan plan2 = make_plan(kernel2, dt, cfg);
  const double alpha = params.alpha;
  const long K = std::max(plan1.max_lag, plan2.max_lag);
  const long steps = static_cast<long>(std::ceil(cfg.T / dt - 1e-9));

  NodeSeries s1, s2;
  for (NodeSeries* s : {&s1, &s2}) {
    s->E.reserve(static_cast<size_t>(K + steps + 1));
    s->dL.reserve(s->E.capacity());
    s->dR.reserve(s->E.capacity());
  }
  for (long k = -K; k <= 0; ++k) {
    const double t = static_cast<double>(k) * dt;
    const State v = initial(t);
    const State d = initial.derivative(t);
    const double e1 = std::exp(v.y), e2 = std::exp(alpha * v.y);
    s1.E.push_back(e1);
    s1.dL.push_back(e1 * d.y);
    s1.dR.push_back(e1 * d.y);
    s2.E.push_back(e2);
    s2.dL.push_back(alpha * e2 * d.y);
    s2.dR.push_back(alpha * e2 * d.y);
  }

  auto rhs = [&](size_t ci, long n, double x, double y, double slope) {
    const double e1 = std::exp(y), e2 = std::exp(alpha * y);
    const double c1 = convolve(plan1, ci, n, dt, s1, {e1, e1 * slope});
    const double c2 = convolve(plan2, ci, n, dt, s2, {e2, alpha * e2 * slope});
    return rhs_rescaled(params, h, c1, c2, x, y);
  };

  Trajectory traj;
  traj.samples.reserve(static_cast<size_t>(steps + 1));
  const State v0 = initial(0.0);
  double x = v0.x, y = v0.y;
  for (long step = 0; step < steps; ++step) {
    const long n = K + step;
    const auto N = static_cast<size_t>(n);
    Rates k1, k2, k3, k4;
    try {
      k1 = rhs(0, n, x, y, 0.0);
      s1.dR[N] = s1.E[N] * k1.dy;
      s2.dR[N] = alpha * s2.E[N] * k1.dy;
      if (step > 0) {
        s1.dL[N] = s1.dR[N];
        s2.dL[N] = s2.dR[N];
      }
      traj.samples.push_back({step * dt, x, y, k1.dx, k1.dy});
      k2 = rhs(1, n, x + 0.5 * dt * k1.dx, y + 0.5 * dt * k1.dy, k1.dy);
      k3 = rhs(1, n, x + 0.5 * dt * k2.dx, y + 0.5 * dt * k2.dy, k2.dy);
      k4 = rhs(2, n, x + dt * k3.dx, y + dt * k3.dy, k3.dy);
    } catch (const AnalysisError& e) {
      // A stage convolution left the domain of h: the swing is no longer resolved.
      if (e.kind() != ErrorKind::DomainError) throw;
      traj.blowup_time = step * dt;
      return traj;
    }
    x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    y += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);

    if (escaped(x, y)) {
      traj.blowup_time = (step + 1) * dt;
      return traj;
    }
    const double e1 = std::exp(y), e2 = std::exp(alpha * y);
    s1.E.push_back(e1);
    s1.dL.push_back(e1 * k4.dy);
    s1.dR.push_back(e1 * k4.dy);
    s2.E.push_back(e2);
    s2.dL.push_back(alpha * e2 * k4.dy);
    s2.dR.push_back(alpha * e2 * k4.dy);
    if (step + 1 == steps) traj.samples.push_back({(step + 1) * dt, x, y, k4.dx, k4.dy});
  }
  return traj;
}

Trajectory simulate_linear_chain(const ModelParams& params, const GrowthFunction& h, int m1, int m2,
                                 double a, const History& initial, const SimConfig& cfg) {
  params.validate();
  check_config(cfg);
  if (m1 < 1 || m2 < 1 || !(a > 0.0)) fail(ErrorKind::InvalidParameter, "need m1, m2 >= 1 and a > 0");
  const double alpha = params.alpha;
  const size_t n1 = static_cast<size_t>(m1), n2 = static_cast<size_t>(m2);
  const size_t dim = 2 + n1 + n2;

  // Chain variables start at the Erlang(j, a) averages of the initial history.
  std::vector<double> v(dim, 0.0);
  const State s0 = initial(0.0);
  v[0] = s0.x;
  v[1] = s0.y;
  const GaussRule rule = gauss_legendre(cfg.quad_order);
  auto average = [&](int j, double k) {
    const DelayKernel g = DelayKernel::erlang(j, a);
    const double hi = quadrature_support(g, cfg.tail_tol).hi;
    const int panels = 400;
    double num = 0.0, mass = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double lo = hi * p / panels, up = hi * (p + 1) / panels;
      const double mid = 0.5 * (lo + up), half = 0.5 * (up - lo);
      for (size_t q = 0; q < rule.nodes.size(); ++q) {
        const double tau = mid + half * rule.nodes[q];
        const double f = density(g, tau) * half * rule.weights[q];
        num += f * std::exp(k * initial(-tau).y);
        mass += f;
      }
    }
    return num / mass;
  };
  for (size_t j = 0; j < n1; ++j) v[2 + j] = average(static_cast<int>(j) + 1, 1.0);
  for (size_t j = 0; j < n2; ++j) v[2 + n1 + j] = average(static_cast<int>(j) + 1, alpha);

  auto f = [&](const std::vector<double>& u) {
    std::vector<double> du(dim);
    const Rates r = rhs_rescaled(params, h, u[1 + n1], u[1 + n1 + n2], u[0], u[1]);
    du[0] = r.dx;
    du[1] = r.dy;
    const double e1 = std::exp(u[1]), e2 = std::exp(alpha * u[1]);
    for (size_t j = 0; j < n1; ++j) du[2 + j] = a * ((j == 0 ? e1 : u[1 + j]) - u[2 + j]);
    for (size_t j = 0; j < n2; ++j) {
      du[2 + n1 + j] = a * ((j == 0 ? e2 : u[1 + n1 + j]) - u[2 + n1 + j]);
    }
    return du;
  };

  const double dt = cfg.dt;
  const long steps = static_cast<long>(std::ceil(cfg.T / dt - 1e-9));
  Trajectory traj;
  traj.samples.reserve(static_cast<size_t>(steps + 1));
  std::vector<double> tmp(dim);
  for (long step = 0; step < steps; ++step) {
    std::vector<double> k1, k2, k3, k4;
    try {
      k1 = f(v);
      traj.samples.push_back({step * dt, v[0], v[1], k1[0], k1[1]});
      for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
      k2 = f(tmp);
      for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
      k3 = f(tmp);
      for (size_t i = 0; i < dim; ++i) tmp[i] = v[i] + dt * k3[i];
      k4 = f(tmp);
    } catch (const AnalysisError& e) {
      if (e.kind() != ErrorKind::DomainError) throw;
      traj.blowup_time = step * dt;
      return traj;
    }
    for (size_t i = 0; i < dim; ++i) v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (escaped(v[0], v[1])) {
      traj.blowup_time = (step + 1) * dt;
      return traj;
    }
    if (step + 1 == steps) traj.samples.push_back({(step + 1) * dt, v[0], v[1], k4[0], k4[1]});
  }
  return traj;
}

std::string_view to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Converging: return "Converging";
    case TrajectoryKind::Oscillating: return "Oscillating";
    case TrajectoryKind::Diverging: return "Diverging";
    case TrajectoryKind::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double cv_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double e : v) ss += (e - m) * (e - m);
  return std::sqrt(ss / static_cast<double>(v.size())) / std::abs(m);
}

}  // namespace

Classification classify_trajectory(const Trajectory& traj, double window) {
  if (!(window > 0.0)) fail(ErrorKind::InvalidParameter, "window must be > 0");
  if (traj.blowup_time) return {TrajectoryKind::Diverging, 0.0, 0.0};
  if (traj.samples.size() < 2) fail(ErrorKind::DegenerateInput, "trajectory too short to classify");
  const double t_end = traj.t_end();
  if (t_end - traj.samples.front().t < 3.0 * window * (1.0 - 1e-12)) {
    fail(ErrorKind::InvalidParameter, "trajectory must span at least three windows");
  }

  auto envelope = [&](double from, double to) {
    double sup = 0.0;
    for (const auto& s : traj.samples) {
      if (s.t >= from && s.t <= to) sup = std::max(sup, std::hypot(s.x, s.y));
    }
    return sup;
  };
  const double e1 = envelope(t_end - window, t_end);
  const double e2 = envelope(t_end - 2.0 * window, t_end - window);
  const double e3 = envelope(t_end - 3.0 * window, t_end - 2.0 * window);
  if (e1 < 1e-4) return {TrajectoryKind::Converging, 0.0, 0.0};
  // Envelope shrinking geometrically across the last three windows: damped, not sustained.
  if (e1 < 0.95 * e2 && e2 < 0.95 * e3) return {TrajectoryKind::Converging, 0.0, 0.0};

  std::vector<const TrajectorySample*> win;
  for (const auto& s : traj.samples) {
    if (s.t >= t_end - window) win.push_back(&s);
  }
  double mean = 0.0;
  for (const auto* s : win) mean += s->x;
  mean /= static_cast<double>(win.size());
  std::vector<double> up;
  std::vector<size_t> up_idx;
  for (size_t i = 1; i < win.size(); ++i) {
    const double a = win[i - 1]->x - mean, b = win[i]->x - mean;
    if (a < 0.0 && b >= 0.0) {
      up.push_back(win[i - 1]->t + (win[i]->t - win[i - 1]->t) * (-a) / (b - a));
      up_idx.push_back(i);
    }
  }
  if (up.size() >= 3) {
    std::vector<double> periods, amps;
    for (size_t k = 1; k < up.size(); ++k) {
      periods.push_back(up[k] - up[k - 1]);
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (size_t i = up_idx[k - 1]; i <= up_idx[k]; ++i) {
        lo = std::min(lo, win[i]->x);
        hi = std::max(hi, win[i]->x);
      }
      amps.push_back(0.5 * (hi - lo));
    }
    const double amp = mean_of(amps);
    if (amp > 1e-6 && cv_of(periods) < 0.05 && cv_of(amps) < 0.05) {
      return {TrajectoryKind::Oscillating, mean_of(periods), amp};
    }
  }

  if (e3 < e2 && e2 < e1) return {TrajectoryKind::Diverging, 0.0, 0.0};
  return {TrajectoryKind::Inconclusive, 0.0, 0.0};
}

}  // namespace angio
