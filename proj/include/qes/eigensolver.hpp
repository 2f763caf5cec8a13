#pragma once

// Numerical oracle for the spectra of tridiagonal operators. Every
// closed-form spectrum in the library is checked against these routines,
// which know nothing about the families that produced the matrix.

#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "qes/laurent_polynomial.hpp"
#include "qes/tridiagonal.hpp"

namespace qes::eig {

/// Largest dimension accepted by the oracle (desk scale).
inline constexpr std::size_t kMaxDimension = 64;

enum class SolverPath {
  SymmetricBisection,   // real, sign-symmetric: Sturm bisection
  ComplexQR,            // everything else: shifted QR on the balanced matrix
  CharacteristicRoots,  // roots of det(T - lambda I); small dimensions only
};

const char* to_string(SolverPath path);

/// det(T - lambda I) as a polynomial in lambda, built by the leading
/// principal minor recurrence.
LaurentPolynomial characteristic_polynomial(const TridiagonalOperator& t);

/// det(T), from the same recurrence evaluated at lambda = 0.
Complex determinant(const TridiagonalOperator& t);

/// Path chosen by eigenvalues(): bisection when T is real (entrywise
/// |Im| <= 1e-13 * scale) and every product sub[i]*super[i] is nonnegative,
/// since then T is diagonally similar to a real symmetric matrix.
SolverPath select_path(const TridiagonalOperator& t);

/// All eigenvalues. Real spectra from the bisection path come back sorted
/// ascending with zero imaginary parts.
std::vector<Complex> eigenvalues(const TridiagonalOperator& t);
std::vector<Complex> eigenvalues(const TridiagonalOperator& t, SolverPath path);

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

/// Eigenvalues of a real symmetric tridiagonal matrix by Sturm bisection.
std::vector<double> symmetric_eigenvalues(std::span<const double> diag,
                                          std::span<const double> off);

/// Diagonal similarity making |T(i,i+1)| = |T(i+1,i)|.
TridiagonalOperator balanced(const TridiagonalOperator& t);

/// Inverse iteration at shift lam*(1+1e-10)+1e-12. The result has unit max
/// norm (largest entry exactly 1) and eigenpair_residual <= 1e-8, else
/// SolverFailure after 50 sweeps.
std::vector<Complex> eigenvector(const TridiagonalOperator& t, Complex lam);

/// ||T v - lam v||_inf / (||T||_inf ||v||_inf).
double eigenpair_residual(const TridiagonalOperator& t, Complex lam, std::span<const Complex> v);

struct SpectrumReport {
  std::vector<Complex> closed_form;  // sorted (re, im) lexicographically
  std::vector<Complex> oracle;       // oracle[i] is the partner of closed_form[i]
  std::vector<double> pairing_distances;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json metadata = nlohmann::json::object();

  double max_distance() const;
  /// passed = every distance and max_residual within tolerance.
  void refresh_passed();
};

/// Lexicographic sort of the closed-form values, then greedy
/// nearest-neighbour pairing with the oracle values.
SpectrumReport compare_spectra(std::span<const Complex> closed, std::span<const Complex> oracle,
                               double tol);

}  // namespace qes::eig
