#pragma once

// Dual Hahn polynomials, the tridiagonal matrices of their recurrences, and
// the second-order differential operator whose polynomial eigenfunctions are
// their generating functions.

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "qes/laurent_polynomial.hpp"
#include "qes/random.hpp"
#include "qes/tridiagonal.hpp"

namespace qes::dual_hahn {

struct HahnParams {
  double gamma = 0.0;
  double delta = 0.0;
  int N = 1;

  /// N >= 1, finite parameters, and no factor of (gamma+1)_N or
  /// (-delta-N)_N within 1e-12 of zero.
  bool is_valid() const;
  /// Throws InvalidParameter with the offending condition.
  void validate() const;

  double A(int n) const { return (n - N) * (n + gamma + 1.0); }
  double C(int n) const { return n * (n - delta - N - 1.0); }
  /// lambda(m) = m(m + gamma + delta + 1).
  double lambda(int m) const { return m * (m + gamma + delta + 1.0); }
};

/// gamma, delta uniform on [lo, hi], redrawn until valid.
HahnParams random_params(Rng& rng, int N, double lo = -0.4, double hi = 3.0);

/// p_0..p_N at lam, from the three-term recurrence with p_{-1} = 0, p_0 = 1.
std::vector<Complex> dual_hahn_sequence(Complex lam, const HahnParams& p);
Complex dual_hahn_polynomial(int n, Complex lam, const HahnParams& p);

/// (N+1)-dimensional M: super_n = A_n, main_n = -(A_n + C_n), sub_{n-1} = C_n.
TridiagonalOperator build_recurrence_matrix(const HahnParams& p);

/// tilde_p_n = (-N)_n (gamma+1)_n / ((-delta-N)_n n!) p_n, n = 0..N: the
/// eigenvector of M^T at lam.
std::vector<Complex> build_transposed_polynomials(const HahnParams& p, Complex lam);

struct OdeCoefficients {
  LaurentPolynomial a, b, c;
};

/// D = a(z) d^2/dz^2 + b(z) d/dz + c(z) with
///   a = z(z-1)^2,
///   b = (gamma-N+2) z^2 - (gamma-delta-2N+2) z - (delta+N),
///   c = -N(gamma+1)(z-1).
OdeCoefficients differential_operator_coefficients(const HahnParams& p);
LaurentPolynomial apply_differential_operator(const HahnParams& p, const LaurentPolynomial& f);

/// Matrix of D on coefficient vectors in the basis 1, z, ..., z^N
/// (column k holds the coefficients of D z^k). Equals M^T.
Eigen::MatrixXcd differential_operator_matrix(const HahnParams& p);

std::vector<double> eigenvalues_closed_form(const HahnParams& p);

/// f_m(z) = (1-z)^m sum_{k=0}^{N-m} (m-N)_k (m+gamma+1)_k / ((-delta-N)_k k!) z^k.
LaurentPolynomial generating_function(int m, const HahnParams& p);
/// f_m(z) evaluated in the factored form above; near z = 1 this avoids the
/// cancellation inherent in the expanded coefficients.
Complex generating_function_value(int m, const HahnParams& p, Complex z);

/// Jacobi polynomial P_k^{(alpha,beta)}(x) by the standard three-term
/// recurrence; falls back to the binomial sum when a recurrence leading
/// factor vanishes (possible for the negative parameters used here).
Complex jacobi_polynomial(int k, double alpha, double beta, Complex x);

/// (N-m)!/(-N-delta)_{N-m} (1-z)^N P_{N-m}^{(-delta-N-1, -gamma-N-1)}((1+z)/(1-z)).
/// For m < 0 this is a nonpolynomial solution of the same equation.
Complex jacobi_form(int m, const HahnParams& p, Complex z);

/// (f_m(z), jacobi_form(m, p, z)); DegenerateInput at z = 1.
std::pair<Complex, Complex> jacobi_reduction_check(int m, const HahnParams& p, Complex z);

/// Largest coefficient of D f_m - lambda(m) f_m over the largest
/// coefficient of lambda(m) f_m. When lambda(m) = 0 the scale is the
/// largest coefficient among the three terms a f'', b f', c f.
double ode_residual(int m, const HahnParams& p);

/// |a g'' + b g' + c g - lambda(m) g| over the sum of the magnitudes of
/// those four terms, with g = jacobi_form(m, p, .) differentiated
/// numerically. Intended for m < 0, where g is not a polynomial.
double ode_pointwise_residual(int m, const HahnParams& p, Complex z);

struct Sl2Generators {
  Eigen::MatrixXcd plus, zero, minus;
};

/// J+ = z^2 d/dz - N z, J0 = z d/dz - N/2, J- = d/dz on span{1, ..., z^N}.
Sl2Generators build_sl2_generators(int N);

/// J+J0 - 2J+J- + J0J- + (gamma+1+N/2)J+ + (delta-gamma-2)J0
///   - (N/2+delta)J- + N(delta+gamma)/2.
Eigen::MatrixXcd sl2_assembled_operator(const HahnParams& p);

/// max |sl2_assembled_operator - differential_operator_matrix| over the
/// largest entry of the latter.
double sl2_decomposition_check(const HahnParams& p);

/// Quadratic q(k) = coeffs[0] + coeffs[1] k + coeffs[2] k^2.
using Quadratic = std::array<double, 3>;
double evaluate(const Quadratic& q, double k);

struct GeneralFamilySpec {
  Quadratic A{}, B{}, C{};
  int N = 1;
};

/// Rows c_k p_{k-1} + a_k p_k + b_k p_{k+1} with a_k = A(k), b_k = B(k),
/// c_k = C(k). Requires C(N+1) = B(-1) = 0 to 1e-12 (relative to the
/// largest coefficient).
TridiagonalOperator build_general_family(const GeneralFamilySpec& spec);

/// The instance reproducing M^T: A(k) = -(A_k + C_k), B(k) = C_{k+1},
/// C(k) = A_{k-1}.
GeneralFamilySpec dual_hahn_family(const HahnParams& p);

/// a_k + b_{k-1} + c_{k+1} = 0 for every k = 0..N, reading entries outside
/// the matrix as zero; tol is relative to the largest entry.
bool satisfies_askey_wilson(const TridiagonalOperator& t, double tol = 1e-12);

}  // namespace qes::dual_hahn
