#include "angio/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "angio/error.hpp"

namespace angio {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::binomial_power(double c0, double c1, int n) {
  Polynomial out{1.0};
  const Polynomial base{c0, c1};
  for (int i = 0; i < n; ++i) out = out * base;
  return out;
}

Polynomial Polynomial::monomial(int degree, double coeff) {
  std::vector<double> c(static_cast<size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

double Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<size_t>(k)];
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

int Polynomial::sign_changes() const {
  int changes = 0;
  double prev = 0.0;
  for (double c : coeffs_) {
    if (c == 0.0) continue;
    if (prev != 0.0 && (c > 0.0) != (prev > 0.0)) ++changes;
    prev = c;
  }
  return changes;
}

std::vector<std::complex<double>> Polynomial::roots() const {
  if (is_zero()) fail(ErrorKind::DegenerateInput, "roots of the zero polynomial");
  const int n = degree();
  if (n == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  companion.diagonal(-1).setOnes();
  for (int k = 0; k < n; ++k) companion(k, n - 1) = -coeffs_[static_cast<size_t>(k)] / leading();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NonConvergent, "companion matrix eigenvalue iteration failed");
  }
  std::vector<std::complex<double>> out(solver.eigenvalues().data(),
                                        solver.eigenvalues().data() + n);
  return out;
}

std::vector<double> Polynomial::positive_real_roots(double imag_tol) const {
  std::vector<double> out;
  const Polynomial d = derivative();
  for (const auto& z : roots()) {
    if (std::abs(z.imag()) > imag_tol * std::max(1.0, std::abs(z))) continue;
    if (!(z.real() > 0.0)) continue;
    // A couple of Newton steps to clean up the eigenvalue estimate.
    double x = z.real();
    for (int it = 0; it < 3; ++it) {
      const double dx = d(x);
      if (dx == 0.0) break;
      const double step = (*this)(x) / dx;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * x) break;
      x -= step;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<double> c(std::max(p.coeffs_.size(), q.coeffs_.size()), 0.0);
  for (size_t k = 0; k < p.coeffs_.size(); ++k) c[k] += p.coeffs_[k];
  for (size_t k = 0; k < q.coeffs_.size(); ++k) c[k] += q.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-1.0) * q; }

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return Polynomial{};
  std::vector<double> c(p.coeffs_.size() + q.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < p.coeffs_.size(); ++i) {
    for (size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

}  // namespace angio
