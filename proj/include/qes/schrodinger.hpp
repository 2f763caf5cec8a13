#pragma once

// The dual Hahn equation in Schrodinger form on y > 0:
//   -psi'' + V(y) psi = eps psi,
// with the explicit levels eps_m = -m(m + gamma + delta + 1) and
// eigenfunctions built from Jacobi polynomials in -cosh y.

#include <vector>

#include "qes/dual_hahn.hpp"

namespace qes::schrodinger {

using dual_hahn::HahnParams;

enum class Domain { FullLine, HalfLine };

const char* to_string(Domain d);

struct Grid {
  double y_min = 0.05;
  double y_max = 10.0;
  int n_points = 256;

  /// 0 < y_min < y_max, n_points >= 64.
  void validate() const;
  std::vector<double> points() const;
};

struct SchrodingerProblem {
  HahnParams params;
  Domain domain = Domain::HalfLine;
  Grid grid;

  void validate() const;
};

/// V(y) = {(g-d)(2N+g+d+2) cosh y + (N+g)^2 + (N+d)^2 + 2(2N+g+d) + 3/2} / (2 sinh^2 y)
///        + (1+g+d)^2/4. DegenerateInput at y = 0.
double potential(double y, const HahnParams& p);
/// (1+g+d)^2/4, the limit of V at infinity.
double potential_limit(const HahnParams& p);

/// eps_m = -m(m + gamma + delta + 1) = -lambda(m).
double energy(int m, const HahnParams& p);

/// Exponential decay rate of psi_m at infinity: m + (1+g+d)/2.
double decay_rate(int m, const HahnParams& p);

/// psi_m with c_m = 1, for y > 0 and m <= N (m < 0 allowed):
/// P_{N-m}^{(-d-N-1,-g-N-1)}(-cosh y) / [sqrt(sinh y) sinh^g(y/2) cosh^d(y/2) coth^N(y/2) (1-cosh y)^N].
/// Evaluated in log space, so large y does not overflow.
double eigenfunction_unnormalized(int m, double y, const HahnParams& p);

struct Integrability {
  bool full_line = false;
  bool half_line = false;
};

/// full_line: gamma + N < 0 and 2m + gamma + delta + 1 > 0.
/// half_line: gamma + N < -1/2 and gamma + delta + 1 > 0.
Integrability integrability_predicates(const HahnParams& p, int m);

/// int_0^inf psi_{m1} psi_{m2} dy with c = 1. Requires the full-line
/// predicate for both indices, which is exactly square integrability on
/// (0, inf) together with a vanishing boundary Wronskian at 0.
/// QuadratureFailure if the tail cannot be brought below 1e-12 by y = 200.
double inner_product(const HahnParams& p, int m1, int m2);

/// c_m making the norm over (0, inf) one when psi_m is square integrable
/// there; 1 otherwise.
double normalization_constant(int m, const HahnParams& p);
double eigenfunction(int m, double y, const HahnParams& p);

/// |-psi'' + (V - eps_m) psi| over |psi''| + |V psi| + |eps_m psi|, with psi''
/// from the 5-point stencil at h = 1e-3 and one Richardson step (h/2).
double fd_residual(int m, double y, const HahnParams& p);

/// Largest fd_residual over the interior points of the grid.
double max_fd_residual(int m, const SchrodingerProblem& problem);

/// |<psi_{m1}, psi_{m2}>| / (|psi_{m1}| |psi_{m2}|) on (0, inf).
double orthogonality_check(const HahnParams& p, int m1, int m2);

/// eps_N < eps_{N-1} < ... < eps_0 = 0. Requires gamma + delta + 1 > 0.
bool spectrum_ordering_check(const HahnParams& p);

struct Sample {
  double y = 0.0;
  double potential = 0.0;
  std::vector<double> psi;  // psi_0 .. psi_N
};

/// V and the normalized psi_0..psi_N on every grid point.
std::vector<Sample> sample(const SchrodingerProblem& problem);

}  // namespace qes::schrodinger
