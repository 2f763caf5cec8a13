#include <doctest.h>

#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "qes/eigensolver.hpp"
#include "qes/q_hahn.hpp"

using qes::Complex;
using qes::LaurentPolynomial;
using namespace qes::q_hahn;
namespace eig = qes::eig;
namespace nm = qes::numerics;

namespace {

const Complex kI(0.0, 1.0);
const std::vector<Complex> kGeneralQ{0.3, 0.85, 1.3, Complex(0.5, 0.4)};

double spectrum_distance(const QHahnParams& p) {
  const auto closed = spectrum_closed_form_q(p);
  const auto found = eig::eigenvalues(build_q_matrix(p));
  return eig::compare_spectra(closed, found, 0.0).max_distance() / (1.0 + oracle::max_abs(closed));
}

std::vector<Complex> coefficients_of(const LaurentPolynomial& f, int N) { return f.coefficients(0, N - 1); }

std::vector<int> coprime_to(int N) {
  std::vector<int> s;
  for (int k = 1; k < N; ++k) {
    if (std::gcd(k, N) == 1) s.push_back(k);
  }
  return s;
}

}  // namespace

TEST_CASE("parameter validity in both regimes") {
  CHECK(QHahnParams::root_of_unity(5, 2, 0.7, 0.2).is_valid());
  CHECK_THROWS_AS(QHahnParams::root_of_unity(6, 2, 0.7, 0.2), qes::Error);
  CHECK_THROWS_AS(QHahnParams::root_of_unity(1, 1, 0.7, 0.2), qes::Error);
  // ab = 1 makes (ab;q)_1 vanish.
  CHECK_FALSE(QHahnParams::root_of_unity(5, 1, 2.0, 0.5).is_valid());
  CHECK_FALSE(QHahnParams::general(0.85, 4, 2.0, 0.5).is_valid());
  // b a^{-1} q^{1-N} q^j = 1 for j = 1.
  const Complex q = 0.85;
  CHECK_FALSE(QHahnParams::general(q, 4, 1.0, std::pow(q, 2)).is_valid());
  // A root of unity of order below N cannot serve as general q.
  CHECK_FALSE(QHahnParams::general(-1.0, 4, 0.9, 0.3).is_valid());
  const auto p = QHahnParams::general(q, 4, 0.9, 0.3);
  CHECK(std::abs(p.a * p.c - std::pow(q, -3)) < 1e-14);
  CHECK_THROWS_AS(build_q_matrix_root_of_unity(p), qes::Error);
  CHECK_THROWS_AS(build_q_matrix_general(QHahnParams::root_of_unity(5, 2, 0.7, 0.2)), qes::Error);
}

TEST_CASE("recurrence coefficients close the truncated matrices") {
  const auto r = QHahnParams::root_of_unity(7, 3, Complex(0.7, 0.2), Complex(0.1, -0.3));
  CHECK(std::abs(r.A(r.N - 1)) < 1e-14);
  CHECK(r.C(0) == Complex(0.0));
  CHECK(std::abs(r.C(r.N)) < 1e-14);
  const auto g = QHahnParams::general(Complex(0.5, 0.4), 6, Complex(0.9, 0.4), 0.3);
  CHECK(std::abs(g.A(g.N - 1)) < 1e-14 * std::abs(g.A(0)));
  CHECK(g.C(0) == Complex(0.0));
  const auto t = build_q_matrix_general(g);
  const auto m = build_q_matrix_general(g).transposed();
  for (int n = 0; n + 1 < g.N; ++n) {
    CHECK(t(n + 1, n) == g.A(n));
    CHECK(m(n + 1, n) == g.C(n + 1));
  }
}

TEST_CASE("continuous dual q-Hahn values: recurrence against the series") {
  const auto p = QHahnParams::root_of_unity(5, 1, 0.7, 0.2);
  const Complex t(0.8, 0.3);
  CHECK(cdqh_polynomial(0, t, p) == Complex(1.0));
  const Complex two_x = t + 1.0 / t;
  const Complex one_step = (two_x - p.diagonal(0)) / p.A(0);
  CHECK(std::abs(cdqh_polynomial(1, t, p) - one_step) < 1e-12);
  CHECK(std::abs(cdqh_sum(1, t, p) - one_step) < 1e-12);

  qes::Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = rng.integer(2, 9);
    const auto rou = random_root_of_unity(rng, N, coprime_to(N).front());
    const Complex q = kGeneralQ[trial % kGeneralQ.size()];
    const auto gen = random_general(rng, q, rng.integer(2, 10));
    for (const auto& par : {rou, gen}) {
      const Complex tt = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 6.283));
      for (int n = 0; n < par.N; ++n) {
        const Complex rec = cdqh_polynomial(n, tt, par);
        const Complex sum = cdqh_sum(n, tt, par);
        CHECK(std::abs(rec - sum) <= 1e-10 * std::max(1.0, std::abs(sum)));
      }
    }
  }
  // The double-precision series oracle, where it is well conditioned.
  for (int N : {3, 5, 7}) {
    const auto par = random_root_of_unity(rng, N, 1);
    for (int n = 0; n < N; ++n) {
      const Complex ref = oracle::cdqh_sum(n, t, par.a, par.b, par.c, par.q);
      CHECK(std::abs(cdqh_polynomial(n, t, par) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("q-difference symbols: simple values") {
  const auto p = QHahnParams::root_of_unity(5, 2, Complex(0.6, 0.1), 0.0);
  const auto op = q_difference_coefficients_root_of_unity(p);
  CHECK(op.gamma.max_abs_coefficient() == 0.0);
  CHECK(std::abs(op.alpha.evaluate(1.0) - (p.a + 1.0 / p.a)) < 1e-15);
  const auto g = QHahnParams::general(0.85, 4, 0.9, 0.0);
  CHECK(q_difference_coefficients_general(g).gamma.max_abs_coefficient() == 0.0);
}

TEST_CASE("operator matrices equal the recurrence matrices") {
  qes::Rng rng(31);
  for (int N : {2, 3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      const auto p = random_root_of_unity(rng, N, S);
      const auto op = q_difference_operator(p);
      const auto M = build_q_matrix_root_of_unity(p);
      CHECK(qes::max_abs_difference(op.matrix(N), M) <= 1e-12 * M.max_abs_entry());
      CHECK(op.leakage(N) <= 1e-12);
    }
  }
  for (Complex q : kGeneralQ) {
    for (int N = 2; N <= 16; ++N) {
      const auto p = random_general(rng, q, N);
      const auto op = q_difference_operator(p);
      const auto M = build_q_matrix_general(p);
      CHECK(qes::max_abs_difference(op.matrix(N), M) <= 1e-12 * M.max_abs_entry());
      // Applied to the all-ones polynomial the operator reproduces column sums
      // of its matrix, i.e. row sums of the recurrence matrix.
      std::vector<Complex> ones(N, 1.0);
      const auto image = op.apply(LaurentPolynomial::from_coefficients(ones));
      const auto expected = M.apply(ones);
      for (int k = 0; k < N; ++k) {
        CHECK(std::abs(image.coefficient(k) - expected[k]) <= 1e-12 * M.max_abs_entry());
      }
    }
  }
}

TEST_CASE("matrix construction rejects an operator that leaves the span") {
  auto p = QHahnParams::root_of_unity(5, 1, 0.7, 0.2);
  auto op = q_difference_coefficients_root_of_unity(p);
  op.alpha += LaurentPolynomial::monomial(1, 0.5);
  CHECK(op.leakage(5) > 1e-3);
  CHECK_THROWS_AS(op.matrix(5), qes::Error);
}

TEST_CASE("closed-form spectrum at roots of unity") {
  const auto p3 = QHahnParams::root_of_unity(3, 1, 0.7, 0.2);
  CHECK(spectrum_closed_form_q(p3)[0] == p3.a + 1.0 / p3.a);
  CHECK(spectrum_distance(p3) <= 1e-9);
  CHECK(spectrum_distance(QHahnParams::root_of_unity(5, 2, Complex(0.6, 0.1), 0.3)) <= 1e-9);

  qes::Rng rng(37);
  double worst = 0.0;
  for (int N : {3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      for (int trial = 0; trial < 20; ++trial) {
        worst = std::max(worst, spectrum_distance(random_root_of_unity(rng, N, S)));
      }
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("flux point a = i q^{1/2}, b = 0 gives 2 sin(2 pi k / N)") {
  for (int N : {3, 5, 7, 9, 11}) {
    for (int S : coprime_to(N)) {
      const auto base = QHahnParams::root_of_unity(N, S, 1.0, 0.0);
      const auto p = QHahnParams::root_of_unity(N, S, kI * base.sqrt_q(), 0.0);
      std::vector<Complex> sines;
      for (int k = 0; k < N; ++k) sines.push_back(2.0 * std::sin(2.0 * std::numbers::pi * k / N));
      CHECK(oracle::multiset_distance(spectrum_closed_form_q(p), sines) <= 1e-12);
    }
  }
}

TEST_CASE("closed-form spectrum for general q") {
  CHECK(spectrum_distance(QHahnParams::general(0.85, 4, 0.9, 0.3)) <= 1e-9);
  qes::Rng rng(41);
  for (Complex q : kGeneralQ) {
    double worst = 0.0;
    for (int N = 2; N <= 16; ++N) {
      for (int trial = 0; trial < 4; ++trial) worst = std::max(worst, spectrum_distance(random_general(rng, q, N)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("root-of-unity generating functions") {
  const auto p = QHahnParams::root_of_unity(7, 2, Complex(0.75, 0.3), Complex(0.2, 0.1));
  const auto f0 = generating_function_q_root_of_unity(0, p);
  for (int k = 0; k < p.N; ++k) CHECK(std::abs(f0.coefficient(k) - 1.0) < 1e-14);
  CHECK(f0.highest_exponent() == p.N - 1);

  qes::Rng rng(43);
  for (int N : {3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      const auto par = random_root_of_unity(rng, N, S);
      const Eigen::MatrixXcd M = build_q_matrix_root_of_unity(par).to_dense();
      for (int m = 0; m < N; ++m) {
        const auto f = generating_function_q_root_of_unity(m, par);
        CHECK(f.highest_exponent() <= N - 1);
        const auto v = oracle::nearest_eigenvector(M, two_x(m, par));
        CHECK(nm::proportionality_deviation(coefficients_of(f, N), v) <= 1e-9);
        // The double sum over polynomial values, term by term.
        const Complex t = par.a * std::pow(par.q, m);
        std::vector<Complex> series(N);
        for (int n = 0; n < N; ++n) series[n] = oracle::cdqh_sum(n, t, par.a, par.b, par.c, par.q);
        CHECK(nm::proportionality_deviation(coefficients_of(f, N), series) <= 1e-9);
        CHECK(nm::proportionality_deviation(coefficients_of(f, N),
                                            coefficients_of(generating_function_q_root_of_unity_sum(m, par), N)) <=
              1e-9);
      }
    }
  }
}

TEST_CASE("zeros of the b = 0 generating functions") {
  const auto p = QHahnParams::root_of_unity(5, 1, 0.8, 0.0);
  auto expected0 = zeros_b0(0, p);
  for (int j = 1; j < 5; ++j) CHECK(oracle::multiset_distance({std::pow(p.q, j)}, {expected0[j - 1]}) < 1e-14);
  const auto last = zeros_b0(4, p);
  for (int j = 2; j <= 5; ++j) CHECK(std::abs(last[j - 2] - std::pow(p.q, j) / (p.a * p.a)) < 1e-14);
  CHECK_THROWS_AS(zeros_b0(1, QHahnParams::root_of_unity(5, 1, 0.8, 0.1)), qes::Error);

  qes::Rng rng(47);
  double worst = 0.0;
  for (int N = 2; N <= 9; ++N) {
    for (int S : coprime_to(N)) {
      const auto par = random_root_of_unity(rng, N, S, true);
      for (int m = 0; m < N; ++m) {
        const auto f = generating_function_q_root_of_unity(m, par);
        const auto roots = oracle::companion_roots(coefficients_of(f, N));
        worst = std::max(worst, oracle::multiset_distance(zeros_b0(m, par), roots));
      }
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("quantum-group generators rebuild the root-of-unity operator") {
  const Complex w = std::polar(1.0, std::numbers::pi / 6.0);
  const auto g = build_uq_generators(3, w);
  CHECK((g.A * g.D - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  const auto example = uq_sl2_decomposition_check(QHahnParams::root_of_unity(3, 1, 0.8, 0.1));
  CHECK(example.deviation <= 1e-9);
  CHECK(example.branch == "principal");

  // With b = 0 the A^4 term drops out: the operator is linear in b.
  const auto p0 = QHahnParams::root_of_unity(5, 2, 0.8, 0.0);
  const auto p1 = QHahnParams::root_of_unity(5, 2, 0.8, 1e-3);
  const Complex w5 = std::polar(1.0, std::numbers::pi * 2 / 10.0);
  const Eigen::MatrixXcd d = (uq_assembled_operator(p1, w5) - uq_assembled_operator(p0, w5)) / 1e-3;
  const Eigen::MatrixXcd d2 =
      (uq_assembled_operator(QHahnParams::root_of_unity(5, 2, 0.8, 2e-3), w5) - uq_assembled_operator(p0, w5)) /
      2e-3;
  CHECK((d - d2).cwiseAbs().maxCoeff() < 1e-9);

  qes::Rng rng(53);
  for (int N : {2, 3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto r = uq_sl2_decomposition_check(random_root_of_unity(rng, N, S));
        CHECK(r.deviation <= 1e-9);
      }
    }
  }
}

TEST_CASE("general-q generating functions") {
  const auto p = QHahnParams::general(0.85, 4, 0.9, 0.3);
  CHECK(std::abs(generating_function_q_general(0, p).evaluate(0.0) - 1.0) < 1e-15);
  const Eigen::MatrixXcd M = build_q_matrix_general(p).to_dense();
  for (int m = 0; m < p.N; ++m) {
    const auto f = generating_function_q_general(m, p);
    if (m >= 1) CHECK(std::abs(f.evaluate(1.0)) < 1e-13 * f.max_abs_coefficient());
    CHECK(nm::proportionality_deviation(coefficients_of(f, p.N),
                                        oracle::nearest_eigenvector(M, two_x(m, p))) <= 1e-9);
  }

  qes::Rng rng(59);
  for (Complex q : kGeneralQ) {
    for (int N = 2; N <= 16; ++N) {
      const auto par = random_general(rng, q, N);
      for (int m = 0; m < N; ++m) {
        const auto f = generating_function_q_general(m, par);
        // Little q-Jacobi form assembled from the oracle series.
        const auto pc = oracle::little_q_jacobi_coefficients(N - 1 - m, par.b / par.a * std::pow(q, -N),
                                                              par.a * par.a * std::pow(q, 2 * m), q);
        LaurentPolynomial P = LaurentPolynomial::from_coefficients(pc).dilated(std::pow(q, -m - 1) / (par.a * par.a));
        for (int j = 0; j < m; ++j) P *= LaurentPolynomial(LaurentPolynomial::Terms{{0, 1.0}, {1, -std::pow(q, j)}});
        CHECK((f - P).max_abs_coefficient() <= 1e-10 * f.max_abs_coefficient());
        CHECK(little_q_jacobi_deviation(m, par) <= 1e-10);
      }
    }
  }
}

TEST_CASE("general-q generating function as a sum over normalized polynomials") {
  // The series cancels like |q|^{-n^2/2}; N <= 10 keeps it within quad range
  // for every q used here.
  qes::Rng rng(61);
  for (Complex q : kGeneralQ) {
    const int top = std::abs(q) >= 0.85 ? 16 : 10;
    for (int N = 2; N <= top; ++N) {
      const auto par = random_general(rng, q, N);
      for (int m = 0; m < N; ++m) {
        CHECK(nm::proportionality_deviation(coefficients_of(generating_function_q_general(m, par), N),
                                            coefficients_of(generating_function_q_general_sum(m, par), N)) <=
              1e-9);
      }
    }
  }
}

TEST_CASE("q-difference residuals of the generating functions") {
  qes::Rng rng(67);
  double worst = 0.0;
  for (int N : {2, 3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      const auto par = random_root_of_unity(rng, N, S);
      for (int m = 0; m < N; ++m) worst = std::max(worst, q_difference_residual(m, par));
    }
  }
  for (Complex q : kGeneralQ) {
    for (int N = 2; N <= 16; ++N) {
      const auto par = random_general(rng, q, N);
      for (int m = 0; m < N; ++m) worst = std::max(worst, q_difference_residual(m, par));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("dual q-Hahn recurrence and the parameter correspondence") {
  const auto p = QHahnParams::general(0.9, 5, 0.8, 0.5);
  const auto d = dual_qhahn_from(p);
  CHECK(std::abs(d.gamma_q - 0.8 * 0.5 / 0.9) < 1e-15);
  CHECK(std::abs(d.delta_q - 1.6) < 1e-15);
  CHECK(dual_qhahn_polynomial(0, 2, d) == Complex(1.0));
  CHECK(d.C(0) == Complex(0.0));
  CHECK(std::abs(d.A(d.N - 1)) < 1e-15);
  const Complex t = p.a * p.q;
  CHECK(std::abs(cdqh_polynomial(1, t, p) - dual_qhahn_polynomial(1, 1, d)) <= 1e-12);
  // mu(y) is a times 2x at t = a q^y.
  CHECK(std::abs(d.mu(1) - p.a * (t + 1.0 / t)) < 1e-14);
  CHECK_THROWS_AS(equivalence_check(QHahnParams::general(0.9, 5, 0.8, 0.0)), qes::Error);
  CHECK(equivalence_check(p) <= 1e-10);

  qes::Rng rng(71);
  for (Complex q : kGeneralQ) {
    for (int N = 2; N <= 10; ++N) {
      CHECK(equivalence_check(random_general(rng, q, N)) <= 1e-10);
    }
  }
}
