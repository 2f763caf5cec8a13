#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qes/laurent_polynomial.hpp"
#include "qes/numerics.hpp"
#include "qes/random.hpp"

using qes::Complex;
using qes::LaurentPolynomial;
namespace nm = qes::numerics;

TEST_CASE("pochhammer: empty product, small values, vanishing factor") {
  CHECK(nm::pochhammer(Complex(3.7, -1.2), 0) == Complex(1.0));
  CHECK(nm::pochhammer(2.0, 3) == 24.0);
  CHECK(nm::pochhammer(-3.0, 5) == 0.0);
}

TEST_CASE("pochhammer step identity is exact up to k = 64") {
  qes::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(-3, 3);
    for (int k = 0; k < 64; ++k) {
      CHECK(nm::pochhammer(a, k + 1) == nm::pochhammer(a, k) * (a + k));
    }
  }
}

TEST_CASE("q-pochhammer: definitions and the cyclotomic product") {
  CHECK(nm::q_pochhammer(0.3, 0.5, 0) == Complex(1.0));
  CHECK(std::abs(nm::q_pochhammer(0.5, 0.5, 2) - 0.375) < 1e-15);
  for (int N : {2, 3, 5, 8, 13, 31}) {
    const Complex q = std::polar(1.0, 2 * std::numbers::pi / N);
    CHECK(std::abs(nm::q_pochhammer(q, q, N - 1) - double(N)) < 1e-12 * N);
  }
}

TEST_CASE("q-pochhammer recursion in the base") {
  qes::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex d(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    const Complex q(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
    const int k = rng.integer(1, 20);
    const Complex lhs = nm::q_pochhammer(d, q, k);
    const Complex rhs = (1.0 - d) * nm::q_pochhammer(d * q, q, k - 1);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(std::abs(lhs), 1e-300));
  }
}

TEST_CASE("truncated hypergeometric sum") {
  std::vector<Complex> zeros(5, 0.0);
  CHECK(nm::truncated_hypergeometric_sum(zeros) == Complex(1.0));
  std::vector<Complex> first{Complex(0.25, 1.0), 0.0, 0.0};
  CHECK(nm::truncated_hypergeometric_sum(first) == Complex(1.25, 1.0));
  std::vector<Complex> bad{1.0, Complex(INFINITY, 0.0)};
  CHECK_THROWS_AS(nm::truncated_hypergeometric_sum(bad), qes::Error);
}

TEST_CASE("truncated sum reproduces the first dual Hahn polynomial") {
  // Ratio for k = 1 of the 3F2 with n = 1: (-1)(-x)(x+g+d+1)/((g+1)(-N)).
  const double g = 1.0, d = 0.0;
  const int N = 4;
  const double x = 1.0;
  std::vector<Complex> r{Complex(-1.0 * -x * (x + g + d + 1) / ((g + 1) * -N))};
  CHECK(std::abs(nm::truncated_hypergeometric_sum(r) - 0.625) < 1e-15);
  CHECK(std::abs(oracle::dual_hahn_sum(1, 3.0, g, d, N) - 0.625) < 1e-15);
}

TEST_CASE("polynomial roots: roots of unity and z^2 - 1") {
  for (int N : {2, 3, 5, 9, 17}) {
    std::vector<Complex> c(N, 1.0);
    auto roots = nm::polynomial_roots(LaurentPolynomial::from_coefficients(c));
    std::vector<Complex> expected;
    for (int j = 1; j < N; ++j) expected.push_back(std::polar(1.0, 2 * std::numbers::pi * j / N));
    CHECK(oracle::multiset_distance(roots, expected) < 1e-12);
  }
  auto r = nm::polynomial_roots(LaurentPolynomial::monomial(2) - LaurentPolynomial(1.0));
  CHECK(oracle::multiset_distance(r, {1.0, -1.0}) < 1e-14);

  // 1 + z + ... + z^4 with rounding noise in the moduli: the hull of
  // log|c_k| splits into short segments, whose starting points used to collide.
  const std::vector<Complex> noisy{{0x1p+0, 0x0p+0},
                                   {0x1.0000000000001p+0, 0x1p-53},
                                   {0x1.ffffffffffffep-1, 0x1p-52},
                                   {0x1p+0, -0x1p-51},
                                   {0x1.fffffffffffffp-1, -0x1.8p-52}};
  std::vector<Complex> fifth;
  for (int j = 1; j < 5; ++j) fifth.push_back(std::polar(1.0, 2 * std::numbers::pi * j / 5));
  CHECK(oracle::multiset_distance(nm::polynomial_roots(LaurentPolynomial::from_coefficients(noisy)), fifth) < 1e-12);
}

TEST_CASE("polynomial roots: zero roots factor out; constants are degenerate") {
  auto r = nm::polynomial_roots(LaurentPolynomial::monomial(3) - LaurentPolynomial::monomial(2, 2.0));
  CHECK(oracle::multiset_distance(r, {0.0, 0.0, 2.0}) < 1e-14);
  try {
    nm::polynomial_roots(LaurentPolynomial(3.0));
    FAIL("expected degenerate-input");
  } catch (const qes::Error& e) {
    CHECK(e.kind() == qes::ErrorKind::DegenerateInput);
  }
  CHECK_THROWS_AS(nm::polynomial_roots(LaurentPolynomial::monomial(-1)), qes::Error);
}

TEST_CASE("root finding followed by monic reconstruction returns the input") {
  qes::Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int deg = rng.integer(1, 24);
    std::vector<Complex> c(deg + 1);
    for (auto& x : c) x = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const LaurentPolynomial p = LaurentPolynomial::from_coefficients(c);
    LaurentPolynomial rebuilt(1.0);
    for (Complex z : nm::polynomial_roots(p)) rebuilt *= LaurentPolynomial::monomial(1) - LaurentPolynomial(z);
    const Complex lead = c.back();
    double worst = 0.0;
    for (int k = 0; k <= deg; ++k) {
      worst = std::max(worst, std::abs(rebuilt.coefficient(k) - c[k] / lead) /
                                  std::max(1.0, std::abs(c[k] / lead)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("proportionality deviation and Richardson derivatives") {
  std::vector<Complex> u{1.0, Complex(2, 1), 3.0};
  std::vector<Complex> v;
  for (Complex x : u) v.push_back(x * Complex(0.3, -2.0));
  CHECK(nm::proportionality_deviation(u, v) < 1e-15);
  v[0] += 0.1;
  CHECK(nm::proportionality_deviation(u, v) > 1e-3);

  auto f = [](Complex z) { return std::exp(2.0 * z) * z; };
  const Complex z(0.3, 0.4);
  const auto d = nm::central_derivatives(f, z, 1e-2);
  const Complex e = std::exp(2.0 * z);
  CHECK(std::abs(d.first - e * (1.0 + 2.0 * z)) < 1e-10);
  CHECK(std::abs(d.second - e * (4.0 + 4.0 * z)) < 1e-9);
}
