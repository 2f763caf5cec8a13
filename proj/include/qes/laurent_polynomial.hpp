#pragma once

#include <map>
#include <span>
#include <vector>

#include "qes/numerics.hpp"

namespace qes {

/// Finite sum of c_e z^e over integer exponents e (possibly negative).
///
/// Arithmetic is exact at the coefficient level: only coefficients that
/// are exactly zero are dropped. Relative pruning of round-off debris is an
/// explicit step (normalized()), because generating functions in the
/// q-families legitimately span many orders of magnitude.
class LaurentPolynomial {
 public:
  using Terms = std::map<int, Complex>;

  LaurentPolynomial() = default;
  explicit LaurentPolynomial(Terms terms);
  LaurentPolynomial(Complex constant);  // NOLINT: scalars promote implicitly

  static LaurentPolynomial monomial(int exponent, Complex coeff = 1.0);
  /// sum_i coeffs[i] z^{lowest + i}
  static LaurentPolynomial from_coefficients(std::span<const Complex> coeffs,
                                             int lowest = 0);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(int exponent) const;

  // Both throw DegenerateInput on the zero polynomial.
  int lowest_exponent() const;
  int highest_exponent() const;

  /// Dense coefficients for exponents lo..hi inclusive.
  std::vector<Complex> coefficients(int lo, int hi) const;
  double max_abs_coefficient() const;

  Complex evaluate(Complex z) const;
  LaurentPolynomial derivative() const;
  /// z -> s z, i.e. the coefficient of z^e is multiplied by s^e.
  LaurentPolynomial dilated(Complex s) const;
  /// Multiplication by z^k.
  LaurentPolynomial shifted(int k) const;
  /// Drops coefficients below rel * max_abs_coefficient().
  LaurentPolynomial normalized(double rel = 1e-14) const;

  LaurentPolynomial& operator+=(const LaurentPolynomial& rhs);
  LaurentPolynomial& operator-=(const LaurentPolynomial& rhs);
  LaurentPolynomial& operator*=(const LaurentPolynomial& rhs);
  LaurentPolynomial& operator*=(Complex s);

  friend LaurentPolynomial operator+(LaurentPolynomial lhs,
                                     const LaurentPolynomial& rhs) {
    return lhs += rhs;
  }
  friend LaurentPolynomial operator-(LaurentPolynomial lhs,
                                     const LaurentPolynomial& rhs) {
    return lhs -= rhs;
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& lhs,
                                     const LaurentPolynomial& rhs);
  friend LaurentPolynomial operator*(LaurentPolynomial lhs, Complex s) {
    return lhs *= s;
  }
  friend LaurentPolynomial operator*(Complex s, LaurentPolynomial rhs) {
    return rhs *= s;
  }
  LaurentPolynomial operator-() const;

 private:
  void add_term(int exponent, Complex value);
  Terms terms_;
};

LaurentPolynomial pow(const LaurentPolynomial& p, int k);

}  // namespace qes
