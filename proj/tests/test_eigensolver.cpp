#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qes/eigensolver.hpp"
#include "qes/eigensolver_extended.hpp"
#include "qes/random.hpp"

using qes::Complex;
using qes::TridiagonalOperator;
namespace eig = qes::eig;

namespace {

TridiagonalOperator random_complex(qes::Rng& rng, std::size_t n) {
  TridiagonalOperator t(n);
  auto draw = [&] { return Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)); };
  for (auto& x : t.main()) x = draw();
  for (auto& x : t.sub()) x = draw();
  for (auto& x : t.super()) x = draw();
  return t;
}

TridiagonalOperator random_symmetric(qes::Rng& rng, std::size_t n) {
  TridiagonalOperator t(n);
  for (auto& x : t.main()) x = rng.uniform(-2, 2);
  for (std::size_t i = 0; i + 1 < n; ++i) t.sub()[i] = t.super()[i] = rng.uniform(-1, 1);
  return t;
}

}  // namespace

TEST_CASE("characteristic polynomial of small matrices") {
  TridiagonalOperator one({}, {Complex(2.5)}, {});
  const auto p1 = eig::characteristic_polynomial(one);
  CHECK(p1.coefficient(0) == Complex(2.5));
  CHECK(p1.coefficient(1) == Complex(-1.0));

  TridiagonalOperator two({-1.0}, {1.0, 1.0}, {-1.0});
  const auto p2 = eig::characteristic_polynomial(two);
  CHECK(p2.coefficient(0) == Complex(0.0));
  CHECK(p2.coefficient(1) == Complex(-2.0));
  CHECK(p2.coefficient(2) == Complex(1.0));
}

TEST_CASE("characteristic polynomial agrees with a dense determinant") {
  qes::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_complex(rng, 1 + trial);
    const auto p = eig::characteristic_polynomial(t);
    const Complex lam(rng.uniform(-1, 1), rng.uniform(-1, 1));
    Eigen::MatrixXcd m = t.to_dense();
    m.diagonal().array() -= lam;
    const Complex det = oracle::dense_determinant(m);
    CHECK(std::abs(p.evaluate(lam) - det) < 1e-12 * (1 + std::abs(det)));
  }
}

TEST_CASE("diagonal matrices return their diagonal") {
  TridiagonalOperator real_diag({0.0, 0.0}, {3.0, -1.0, 2.0}, {0.0, 0.0});
  auto ev = eig::eigenvalues(real_diag);
  CHECK(eig::select_path(real_diag) == eig::SolverPath::SymmetricBisection);
  REQUIRE(ev.size() == 3);
  CHECK(std::abs(ev[0] - (-1.0)) < 1e-15);
  CHECK(std::abs(ev[1] - 2.0) < 1e-15);
  CHECK(std::abs(ev[2] - 3.0) < 1e-15);

  TridiagonalOperator cdiag({0.0}, {Complex(1, 1), Complex(0, -2)}, {0.0});
  CHECK(oracle::multiset_distance(eig::eigenvalues(cdiag), {Complex(1, 1), Complex(0, -2)}) < 1e-15);
}

TEST_CASE("three-site flux matrix has spectrum zero and plus or minus root six") {
  const double s = std::sqrt(3.0);
  TridiagonalOperator h({-s, s}, {0.0, 0.0, 0.0}, {-s, s});
  const auto ev = eig::eigenvalues(h);
  CHECK(eig::select_path(h) == eig::SolverPath::SymmetricBisection);
  CHECK(oracle::multiset_distance(ev, {-std::sqrt(6.0), 0.0, std::sqrt(6.0)}) < 1e-14);
}

TEST_CASE("path selection") {
  TridiagonalOperator sign_symmetric({2.0, 0.5}, {1.0, 0.0, -1.0}, {0.5, 3.0});
  CHECK(eig::select_path(sign_symmetric) == eig::SolverPath::SymmetricBisection);
  TridiagonalOperator opposite({2.0}, {1.0, 0.0}, {-0.5});
  CHECK(eig::select_path(opposite) == eig::SolverPath::ComplexQR);
  TridiagonalOperator complex_entry({Complex(0, 1)}, {1.0, 0.0}, {1.0});
  CHECK(eig::select_path(complex_entry) == eig::SolverPath::ComplexQR);
  // One-sided coupling: block triangular, eigenvalues are the diagonal.
  TridiagonalOperator one_sided({0.0}, {1.0, 5.0}, {7.0});
  CHECK(oracle::multiset_distance(eig::eigenvalues(one_sided), {1.0, 5.0}) < 1e-14);
}

TEST_CASE("trace and determinant of oracle spectra") {
  qes::Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto t = trial % 2 ? random_complex(rng, rng.integer(1, 40)) : random_symmetric(rng, rng.integer(1, 40));
    const auto ev = eig::eigenvalues(t);
    Complex sum = 0.0, prod = 1.0, trace = 0.0;
    for (Complex x : ev) sum += x, prod *= x;
    for (Complex x : t.main()) trace += x;
    double mag = 0.0;
    for (Complex x : t.main()) mag += std::abs(x);
    CHECK(std::abs(sum - trace) <= 1e-10 * std::max(1.0, mag));
    const Complex det = eig::determinant(t);
    CHECK(std::abs(prod - det) <= 1e-8 * std::max(std::abs(det), 1e-300));
  }
}

TEST_CASE("bisection and characteristic roots agree on symmetric input") {
  qes::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_symmetric(rng, rng.integer(1, 12));
    const auto bis = eig::eigenvalues(t, eig::SolverPath::SymmetricBisection);
    const auto roots = eig::eigenvalues(t, eig::SolverPath::CharacteristicRoots);
    const auto qr = eig::eigenvalues(t, eig::SolverPath::ComplexQR);
    CHECK(oracle::multiset_distance(bis, roots) < 1e-10);
    CHECK(oracle::multiset_distance(bis, qr) < 1e-10);
    for (std::size_t i = 1; i < bis.size(); ++i) CHECK(bis[i - 1].real() <= bis[i].real());
  }
}

TEST_CASE("dimension above the oracle limit is rejected") {
  TridiagonalOperator big(eig::kMaxDimension + 1);
  CHECK_THROWS_AS(eig::eigenvalues(big), qes::Error);
}

TEST_CASE("eigenvectors: basis vectors for diagonal input, residual bound in general") {
  TridiagonalOperator d({0.0, 0.0}, {3.0, -1.0, 2.0}, {0.0, 0.0});
  const auto v = eig::eigenvector(d, -1.0);
  CHECK(std::abs(v[1] - 1.0) < 1e-15);
  CHECK(std::abs(v[0]) < 1e-12);
  CHECK(std::abs(v[2]) < 1e-12);

  qes::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_complex(rng, rng.integer(2, 30));
    for (Complex lam : eig::eigenvalues(t)) {
      const auto w = eig::eigenvector(t, lam);
      CHECK(eig::eigenpair_residual(t, lam, w) <= 1e-8);
      CHECK(oracle::max_abs(w) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("compare_spectra pairing and pass flag") {
  std::vector<Complex> a{1.0, Complex(0, 2), -3.0};
  auto same = eig::compare_spectra(a, a, 1e-9);
  CHECK(same.passed);
  CHECK(same.max_distance() == 0.0);

  std::vector<Complex> b{-3.0 + 1e-12, 1.0, Complex(1e-12, 2)};
  CHECK(eig::compare_spectra(a, b, 1e-9).passed);

  std::vector<Complex> c{1.0, Complex(0, 2), -2.0};
  auto shifted = eig::compare_spectra(a, c, 1e-9);
  CHECK_FALSE(shifted.passed);
  CHECK(shifted.max_distance() == doctest::Approx(1.0));

  std::vector<Complex> shorter{1.0};
  CHECK_THROWS_AS(eig::compare_spectra(a, shorter, 1e-9), qes::Error);
}

TEST_CASE("quad-precision refinement reproduces well-conditioned spectra") {
  qes::Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = random_complex(rng, 12);
    eig::ExtendedTridiagonal e;
    for (Complex x : t.sub()) e.sub.emplace_back(x.real(), x.imag());
    for (Complex x : t.main()) e.main.emplace_back(x.real(), x.imag());
    for (Complex x : t.super()) e.super.emplace_back(x.real(), x.imag());
    CHECK(oracle::multiset_distance(eig::eigenvalues_extended(e), eig::eigenvalues(t)) < 1e-12);
  }
}
