#pragma once

// Quad-precision eigenvalues for tridiagonal operators whose eigenvalues
// are too ill-conditioned for the double-precision oracle (the Hofstadter
// M matrix: condition numbers reach ~1e19 at N = 63).

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>
#include <span>
#include <vector>

#include "qes/tridiagonal.hpp"

namespace qes::eig {

using Real128 = boost::multiprecision::float128;
using Complex128 = boost::multiprecision::complex128;

struct ExtendedTridiagonal {
  std::vector<Complex128> sub, main, super;

  std::size_t dim() const { return main.size(); }
  TridiagonalOperator rounded() const;
};

/// Aberth-Ehrlich iteration on det(T - lambda I), evaluated (with its
/// derivative) by the minor recurrence in 113-bit arithmetic. Seeds are
/// perturbed apart if they coincide. Throws SolverFailure on
/// non-convergence.
std::vector<Complex128> aberth_eigenvalues(const ExtendedTridiagonal& t,
                                           std::span<const Complex> seeds);

/// Seeds from the double-precision QR path on the rounded matrix, refined
/// in quad precision, then rounded back.
std::vector<Complex> eigenvalues_extended(const ExtendedTridiagonal& t);

}  // namespace qes::eig
