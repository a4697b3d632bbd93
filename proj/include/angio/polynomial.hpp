#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace angio {

/// Real polynomial, coefficients in ascending degree. Trailing (leading-degree)
/// zeros are trimmed on construction.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  /// (c0 + c1 x)^n
  static Polynomial binomial_power(double c0, double c1, int n);
  static Polynomial monomial(int degree, double coeff = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(int k) const;
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial derivative() const;

  /// Number of sign changes between consecutive nonzero coefficients.
  int sign_changes() const;

  /// All roots, from the eigenvalues of the companion matrix.
  std::vector<std::complex<double>> roots() const;

  /// Real roots in (0, inf), ascending; imaginary parts below imag_tol (relative
  /// to the root magnitude) count as real.
  std::vector<double> positive_real_roots(double imag_tol = 1e-8) const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(double s, const Polynomial& p);

 private:
  void trim();
  std::vector<double> coeffs_;
};

}  // namespace angio
