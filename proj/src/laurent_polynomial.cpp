#include "qes/laurent_polynomial.hpp"

#include <cmath>

namespace qes {

LaurentPolynomial::LaurentPolynomial(Terms terms) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

LaurentPolynomial::LaurentPolynomial(Complex constant) { add_term(0, constant); }

LaurentPolynomial LaurentPolynomial::monomial(int exponent, Complex coeff) {
  LaurentPolynomial p;
  p.add_term(exponent, coeff);
  return p;
}

LaurentPolynomial LaurentPolynomial::from_coefficients(std::span<const Complex> coeffs,
                                                       int lowest) {
  LaurentPolynomial p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    p.add_term(lowest + static_cast<int>(i), coeffs[i]);
  }
  return p;
}

void LaurentPolynomial::add_term(int exponent, Complex value) {
  if (value == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Complex LaurentPolynomial::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

int LaurentPolynomial::lowest_exponent() const {
  if (terms_.empty()) fail(ErrorKind::DegenerateInput, "zero polynomial has no degree");
  return terms_.begin()->first;
}

int LaurentPolynomial::highest_exponent() const {
  if (terms_.empty()) fail(ErrorKind::DegenerateInput, "zero polynomial has no degree");
  return terms_.rbegin()->first;
}

std::vector<Complex> LaurentPolynomial::coefficients(int lo, int hi) const {
  std::vector<Complex> out(hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0, Complex(0.0));
  for (const auto& [e, c] : terms_) {
    if (e >= lo && e <= hi) out[static_cast<std::size_t>(e - lo)] = c;
  }
  return out;
}

double LaurentPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Complex LaurentPolynomial::evaluate(Complex z) const {
  if (terms_.empty()) return 0.0;
  if (z == 0.0) {
    if (lowest_exponent() < 0) fail(ErrorKind::DegenerateInput, "negative power at z = 0");
    return coefficient(0);
  }
  // Horner over the dense range, then rescale by z^lo.
  const int lo = lowest_exponent();
  const int hi = highest_exponent();
  Complex acc = 0.0;
  for (int e = hi; e >= lo; --e) acc = acc * z + coefficient(e);
  return acc * std::pow(z, lo);
}

LaurentPolynomial LaurentPolynomial::derivative() const {
  LaurentPolynomial d;
  for (const auto& [e, c] : terms_) {
    if (e != 0) d.add_term(e - 1, c * static_cast<double>(e));
  }
  return d;
}

LaurentPolynomial LaurentPolynomial::dilated(Complex s) const {
  LaurentPolynomial d;
  for (const auto& [e, c] : terms_) d.add_term(e, c * std::pow(s, e));
  return d;
}

LaurentPolynomial LaurentPolynomial::shifted(int k) const {
  LaurentPolynomial d;
  for (const auto& [e, c] : terms_) d.terms_.emplace(e + k, c);
  return d;
}

LaurentPolynomial LaurentPolynomial::normalized(double rel) const {
  const double cutoff = rel * max_abs_coefficient();
  LaurentPolynomial d;
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) >= cutoff) d.terms_.emplace(e, c);
  }
  return d;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

LaurentPolynomial operator*(const LaurentPolynomial& lhs, const LaurentPolynomial& rhs) {
  LaurentPolynomial out;
  for (const auto& [e1, c1] : lhs.terms_) {
    for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, c1 * c2);
  }
  return out;
}

LaurentPolynomial& LaurentPolynomial::operator*=(const LaurentPolynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator*=(Complex s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial d = *this;
  for (auto& [e, c] : d.terms_) c = -c;
  return d;
}

LaurentPolynomial pow(const LaurentPolynomial& p, int k) {
  if (k < 0) fail(ErrorKind::InvalidParameter, "negative power of a Laurent polynomial");
  LaurentPolynomial r(1.0);
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

}  // namespace qes
