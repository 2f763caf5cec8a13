#pragma once

// Scalar kernels shared by every spectral family: shifted factorials,
// q-shifted factorials, ratio-driven truncated series, and polynomial roots.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qes {

using Complex = std::complex<double>;

enum class ErrorKind {
  InvalidParameter,
  DegenerateInput,
  SolverFailure,
  LengthMismatch,
  QuadratureFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

class LaurentPolynomial;

namespace numerics {

/// Rising factorial (a)_k = a(a+1)...(a+k-1); (a)_0 = 1.
Complex pochhammer(Complex a, int k);
double pochhammer(double a, int k);

/// q-shifted factorial (d;q)_k = (1-d)(1-dq)...(1-dq^{k-1}); (d;q)_0 = 1.
Complex q_pochhammer(Complex d, Complex q, int k);

/// Terms t_0..t_n of a series with t_0 = 1 and t_k = t_{k-1} * ratios[k-1].
/// Throws InvalidParameter if any ratio is non-finite.
std::vector<Complex> hypergeometric_terms(std::span<const Complex> ratios);

/// Sum of the terms produced by hypergeometric_terms, accumulated in index
/// order.
Complex truncated_hypergeometric_sum(std::span<const Complex> ratios);

/// All complex roots (with multiplicity) of a polynomial with nonnegative
/// exponents, by Aberth-Ehrlich simultaneous iteration started from the
/// Newton polygon of the coefficient moduli.
std::vector<Complex> polynomial_roots(const LaurentPolynomial& p);

/// |p(z)| relative to sum_k |c_k| |z|^k, the natural backward-error scale.
double relative_polynomial_residual(const LaurentPolynomial& p, Complex z);

/// max_i |u_i - c v_i| / max_i |u_i| with c fixed by the largest |v_i|.
/// Zero when u and v are proportional; LengthMismatch on unequal sizes.
double proportionality_deviation(std::span<const Complex> u, std::span<const Complex> v);

struct Derivatives {
  Complex first;
  Complex second;
};

/// First and second derivatives of an analytic function by central
/// differences at steps h, h/2, h/4 with two Richardson extrapolations.
Derivatives central_derivatives(const std::function<Complex(Complex)>& f, Complex z, double h);

}  // namespace numerics
}  // namespace qes
