#include <doctest.h>

#include "qes/laurent_polynomial.hpp"
#include "qes/random.hpp"

using qes::Complex;
using qes::LaurentPolynomial;

namespace {

LaurentPolynomial random_laurent(qes::Rng& rng, int lo, int hi) {
  std::vector<Complex> c(hi - lo + 1);
  for (auto& x : c) x = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return LaurentPolynomial::from_coefficients(c, lo);
}

}  // namespace

TEST_CASE("construction and degree bounds") {
  const LaurentPolynomial p = LaurentPolynomial::monomial(-2, 3.0) + LaurentPolynomial::monomial(4, 1.5);
  CHECK(p.lowest_exponent() == -2);
  CHECK(p.highest_exponent() == 4);
  CHECK(p.coefficient(0) == Complex(0.0));
  CHECK(p.coefficient(-2) == Complex(3.0));
  CHECK_THROWS_AS(LaurentPolynomial().lowest_exponent(), qes::Error);
}

TEST_CASE("exact cancellation leaves the zero polynomial") {
  const LaurentPolynomial p = LaurentPolynomial::monomial(-1, 2.0) + LaurentPolynomial::monomial(3);
  CHECK((p - p).is_zero());
  CHECK((p + (-p)).is_zero());
}

TEST_CASE("multiplication agrees with pointwise evaluation") {
  qes::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const LaurentPolynomial a = random_laurent(rng, -3, 4);
    const LaurentPolynomial b = random_laurent(rng, -1, 6);
    const Complex z(rng.uniform(0.5, 1.5), rng.uniform(-1, 1));
    CHECK(std::abs((a * b).evaluate(z) - a.evaluate(z) * b.evaluate(z)) < 1e-12 * (1 + std::abs(a.evaluate(z) * b.evaluate(z))));
    CHECK(std::abs((a + b).evaluate(z) - a.evaluate(z) - b.evaluate(z)) < 1e-12);
  }
}

TEST_CASE("derivative, dilation and shift on monomials") {
  const LaurentPolynomial p = LaurentPolynomial::monomial(-2, 1.0) + LaurentPolynomial::monomial(3, 2.0);
  const LaurentPolynomial d = p.derivative();
  CHECK(d.coefficient(-3) == Complex(-2.0));
  CHECK(d.coefficient(2) == Complex(6.0));
  const LaurentPolynomial s = p.dilated(Complex(0.0, 2.0));
  CHECK(std::abs(s.coefficient(-2) - 1.0 / Complex(-4.0)) < 1e-15);
  CHECK(std::abs(s.coefficient(3) - 2.0 * Complex(0, -8.0)) < 1e-15);
  const LaurentPolynomial t = p.shifted(2);
  CHECK(t.lowest_exponent() == 0);
  CHECK(t.highest_exponent() == 5);
}

TEST_CASE("normalization drops only relatively tiny coefficients") {
  LaurentPolynomial p = LaurentPolynomial::monomial(0, 1.0) + LaurentPolynomial::monomial(1, 1e-15) +
                        LaurentPolynomial::monomial(2, 1e-13);
  const LaurentPolynomial n = p.normalized();
  CHECK(n.coefficient(1) == Complex(0.0));
  CHECK(n.coefficient(2) == Complex(1e-13));
  CHECK(n.terms().size() == 2);
}

TEST_CASE("pow matches repeated multiplication") {
  const LaurentPolynomial p = LaurentPolynomial(1.0) - LaurentPolynomial::monomial(1);
  const LaurentPolynomial p5 = pow(p, 5);
  CHECK(p5.coefficient(2) == Complex(10.0));
  CHECK(p5.coefficient(5) == Complex(-1.0));
  CHECK(pow(p, 0).coefficient(0) == Complex(1.0));
}
