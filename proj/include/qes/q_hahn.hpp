#pragma once

// Continuous dual q-Hahn polynomials, their recurrence matrix M_q, and the
// second-order q-difference operators whose polynomial eigenfunctions are
// generating functions of those polynomials. Two regimes: q a primitive
// N-th root of unity with ac = q, and general q with ac = q^{1-N}.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qes/laurent_polynomial.hpp"
#include "qes/random.hpp"
#include "qes/tridiagonal.hpp"

namespace qes::q_hahn {

enum class QMode { RootOfUnity, General };

const char* to_string(QMode mode);

struct QHahnParams {
  Complex a, b, c, q;
  int N = 2;
  QMode mode = QMode::General;
  int S = 0;  // root-of-unity mode only

  /// q = exp(2 pi i S/N), c = q/a. Requires N >= 2, gcd(S, N) = 1.
  static QHahnParams root_of_unity(int N, int S, Complex a, Complex b);
  /// c = q^{1-N}/a.
  static QHahnParams general(Complex q, int N, Complex a, Complex b);

  /// Mode constraints plus nonvanishing denominators: (ab;q)_N, (q;q)_{N-1}
  /// and, for general q, (b a^{-1} q^{1-N}; q)_{N-1}. Factors within 1e-10
  /// of zero count as vanishing.
  bool is_valid() const;
  void validate() const;

  /// Recurrence coefficients A_n = a^{-1}(1-ab q^n)(1-ac q^n),
  /// C_n = a(1-q^n)(1-bc q^{n-1}).
  Complex A(int n) const;
  Complex C(int n) const;
  Complex diagonal(int n) const { return a + 1.0 / a - A(n) - C(n); }

  /// q^{1/2}: exp(pi i S/N) for roots of unity, principal sqrt otherwise.
  Complex sqrt_q() const;
};

/// 2x_m = a q^m + a^{-1} q^{-m}.
Complex two_x(int m, const QHahnParams& p);
std::vector<Complex> spectrum_closed_form_q(const QHahnParams& p);

/// Continuous dual q-Hahn polynomial p_n(x), 2x = t + 1/t, from its
/// terminating basic hypergeometric series.
Complex cdqh_sum(int n, Complex t, const QHahnParams& p);
/// p_0..p_{N-1} at 2x from the three-term recurrence.
std::vector<Complex> cdqh_sequence(Complex two_x, const QHahnParams& p);
Complex cdqh_polynomial(int n, Complex t, const QHahnParams& p);

/// N x N matrix of the recurrence: super_n = A_n, sub_{n-1} = C_n,
/// main_n = a + 1/a - A_n - C_n. Root-of-unity mode (C_N = 0 closes it).
TridiagonalOperator build_q_matrix_root_of_unity(const QHahnParams& p);
/// Transpose of the recurrence matrix (A_{N-1} = 0 closes it). General mode.
TridiagonalOperator build_q_matrix_general(const QHahnParams& p);
/// The matrix appropriate to p.mode.
TridiagonalOperator build_q_matrix(const QHahnParams& p);

/// Operator f(z) -> alpha(z) f(z) + beta(z) f(qz) + gamma(z) f(q^2 z).
struct QDifferenceOperator {
  LaurentPolynomial alpha, beta, gamma;
  Complex q;

  LaurentPolynomial apply(const LaurentPolynomial& f) const;
  /// Matrix on coefficient vectors of span{1, ..., z^{N-1}} (column k holds
  /// the image of z^k). Throws DegenerateInput if an image leaves the span
  /// by more than 1e-12 of the largest entry.
  TridiagonalOperator matrix(int N) const;
  /// Largest out-of-span coefficient over the largest entry.
  double leakage(int N) const;
};

QDifferenceOperator q_difference_coefficients_root_of_unity(const QHahnParams& p);
QDifferenceOperator q_difference_coefficients_general(const QHahnParams& p);
QDifferenceOperator q_difference_operator(const QHahnParams& p);

/// f_m(z) = (qz;q)_{N-1-m} sum_{k<=m} (q^{-m};q)_k (b a^{-1} q^{-m};q)_k (a^2 q^m z)^k
///          / ((ab;q)_k (q;q)_k).
LaurentPolynomial generating_function_q_root_of_unity(int m, const QHahnParams& p);
/// sum_n z^n p_n(x_m), with p_n from the series (ac = q).
LaurentPolynomial generating_function_q_root_of_unity_sum(int m, const QHahnParams& p);

/// f_m(z) = (z;q)_m sum_{k<=N-1-m} (q^{m-N+1};q)_k (ab q^m;q)_k q^{-mk} z^k
///          / ((b a^{-1} q^{1-N};q)_k (q;q)_k a^{2k}).
LaurentPolynomial generating_function_q_general(int m, const QHahnParams& p);
/// sum_n z^n tilde_p_n(x_m): the normalized series polynomials.
LaurentPolynomial generating_function_q_general_sum(int m, const QHahnParams& p);

LaurentPolynomial generating_function_q(int m, const QHahnParams& p);

/// Little q-Jacobi polynomial P_n(x; alpha, beta | q) as a polynomial in x:
/// sum_k (q^{-n};q)_k (alpha beta q^{n+1};q)_k / ((alpha q;q)_k (q;q)_k) (qx)^k.
LaurentPolynomial little_q_jacobi(int n, Complex alpha, Complex beta, Complex q);

/// (z;q)_m P_{N-1-m}(z a^{-2} q^{-m-1}; b a^{-1} q^{-N}, a^2 q^{2m} | q).
LaurentPolynomial little_q_jacobi_form(int m, const QHahnParams& p);

/// Coefficientwise max |f_m - little_q_jacobi_form| over max |f_m|.
double little_q_jacobi_deviation(int m, const QHahnParams& p);

/// Closed-form zero multiset of f_m when b = 0 (root-of-unity mode).
std::vector<Complex> zeros_b0(int m, const QHahnParams& p);

/// Largest coefficient of alpha f + beta f(qz) + gamma f(q^2 z) - 2x_m f
/// over the largest coefficient among those four terms.
double q_difference_residual(int m, const QHahnParams& p);

struct UqGenerators {
  Eigen::MatrixXcd A, B, C, D;
};

/// Generators on span{1, ..., z^{N-1}} for a chosen fourth root w of q
/// (so q^{1/2} = w^2, q^{(N-1)/4} = w^{N-1}, T_+- = diag(w^{+-2k})).
UqGenerators build_uq_generators(int N, Complex w);

/// The quadratic expression in the generators that reproduces the
/// root-of-unity q-difference operator.
Eigen::MatrixXcd uq_assembled_operator(const QHahnParams& p, Complex w);

struct UqCheck {
  double deviation = 0.0;      // relative to the largest operator entry
  std::string branch;          // "principal" or "opposite"
  Complex sqrt_q;              // the q^{1/2} that was used
  double principal_deviation = 0.0;
};

/// Tries w = exp(pi i S/(2N)) first; if that misses 1e-9 it retries with the
/// opposite square root of q (w -> i w) and reports which one validates.
UqCheck uq_sl2_decomposition_check(const QHahnParams& p);

struct DualQHahnParams {
  Complex gamma_q, delta_q, q;
  int N = 2;

  Complex A(int n) const;
  Complex C(int n) const;
  Complex mu(int y) const;
  void validate() const;
};

/// p_0..p_{N-1} at mu(y).
std::vector<Complex> dual_qhahn_sequence(int y, const DualQHahnParams& p);
Complex dual_qhahn_polynomial(int n, int y, const DualQHahnParams& p);

/// gamma_q = ab/q, delta_q = a/b (general mode).
DualQHahnParams dual_qhahn_from(const QHahnParams& p);

/// Max over y = 0..N-1 of max_n |cdqh_n(t = a q^y) - dual_qhahn_n(y)|
/// relative to max_n |cdqh_n|. InvalidParameter when b = 0.
double equivalence_check(const QHahnParams& p);

/// Smallest pairwise distance between closed-form eigenvalues, relative to
/// 1 + max |2x_m|.
double spectral_separation(const QHahnParams& p);

/// Seeded draws. |a| in [0.6, 0.85] or [1.2, 1.6] with uniform argument,
/// |b| <= 0.5; redrawn until valid and separation >= 1e-3.
QHahnParams random_root_of_unity(Rng& rng, int N, int S, bool b_zero = false);
/// |a| in [0.7, 1.4], arg a in [0.3, 1.2]; redrawn until valid and
/// separated.
QHahnParams random_general(Rng& rng, Complex q, int N);

}  // namespace qes::q_hahn
