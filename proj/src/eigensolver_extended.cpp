#include "qes/eigensolver_extended.hpp"

#include "qes/eigensolver.hpp"

#include <limits>

namespace qes::eig {

namespace {

Complex to_double(const Complex128& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// det(T - lam I) and its derivative in lam.
std::pair<Complex128, Complex128> det_and_derivative(const ExtendedTridiagonal& t,
                                                      const Complex128& lam) {
  Complex128 p_prev = 1;
  Complex128 d_prev = 0;
  Complex128 p = t.main[0] - lam;
  Complex128 d = -1;
  for (std::size_t k = 1; k < t.dim(); ++k) {
    const Complex128 diag = t.main[k] - lam;
    const Complex128 prod = t.sub[k - 1] * t.super[k - 1];
    Complex128 p_next = diag * p - prod * p_prev;
    Complex128 d_next = -p + diag * d - prod * d_prev;
    p_prev = p;
    d_prev = d;
    p = p_next;
    d = d_next;
  }
  return {p, d};
}

// The same recurrence on magnitudes; n * eps times this bounds the rounding
// error of det(T - lam I), so smaller determinants are numerically zero.
Real128 det_rounding_scale(const ExtendedTridiagonal& t, const Complex128& lam) {
  const Real128 mag = abs(lam);
  Real128 p_prev = 1;
  Real128 p = abs(t.main[0]) + mag;
  for (std::size_t k = 1; k < t.dim(); ++k) {
    const Real128 p_next = (abs(t.main[k]) + mag) * p + abs(t.sub[k - 1] * t.super[k - 1]) * p_prev;
    p_prev = p;
    p = p_next;
  }
  return p;
}

}  // namespace

TridiagonalOperator ExtendedTridiagonal::rounded() const {
  std::vector<Complex> s, m, u;
  for (const auto& x : sub) s.push_back(to_double(x));
  for (const auto& x : main) m.push_back(to_double(x));
  for (const auto& x : super) u.push_back(to_double(x));
  return TridiagonalOperator(std::move(s), std::move(m), std::move(u));
}

std::vector<Complex128> aberth_eigenvalues(const ExtendedTridiagonal& t,
                                           std::span<const Complex> seeds) {
  const std::size_t n = t.dim();
  if (n == 0) fail(ErrorKind::InvalidParameter, "empty matrix");
  if (t.sub.size() + 1 != n || t.super.size() + 1 != n) {
    fail(ErrorKind::LengthMismatch, "off-diagonals must have length dim-1");
  }
  if (seeds.size() != n) fail(ErrorKind::LengthMismatch, "one seed per eigenvalue required");

  double scale = 0.0;
  for (Complex s : seeds) scale = std::max(scale, std::abs(s));
  scale = std::max(scale, 1.0);

  std::vector<Complex128> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = seeds[i];
    for (std::size_t j = 0; j < i; ++j) {
      // Aberth needs distinct starting points.
      if (std::abs(s - to_double(z[j])) < 1e-10 * scale) {
        s += scale * 1e-6 * std::polar(1.0, 0.7 + 1.3 * static_cast<double>(i));
      }
    }
    z[i] = Complex128(s.real(), s.imag());
  }

  const Real128 tol("1e-30");
  const Real128 eps = std::numeric_limits<Real128>::epsilon();
  std::vector<bool> done(n, false);
  std::vector<Real128> last_step(n, std::numeric_limits<Real128>::infinity());
  for (int iter = 0; iter < 200; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      auto [p, d] = det_and_derivative(t, z[i]);
      Complex128 w = 0;
      if (abs(p) != 0) {
        Complex128 ratio = p / d;
        Complex128 sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i) sum += Complex128(1) / (z[i] - z[j]);
        }
        w = ratio / (Complex128(1) - ratio * sum);
      }
      const Real128 step = abs(w);
      // Inside the rounding noise of the determinant, steps stop shrinking;
      // that is as accurate as this precision allows.
      const bool in_noise = abs(p) <= 4 * Real128(n) * eps * det_rounding_scale(t, z[i]);
      if (in_noise && step >= last_step[i] / 2) {
        done[i] = true;
        continue;
      }
      z[i] -= w;
      last_step[i] = step;
      if (step <= tol * (1 + abs(z[i]))) done[i] = true;
      else all_done = false;
    }
    if (all_done) return z;
  }
  fail(ErrorKind::SolverFailure, "quad-precision Aberth iteration did not converge");
}

std::vector<Complex> eigenvalues_extended(const ExtendedTridiagonal& t) {
  const TridiagonalOperator r = t.rounded();
  std::vector<Complex> seeds = eigenvalues(r, SolverPath::ComplexQR);
  std::vector<Complex> out;
  for (const auto& z : aberth_eigenvalues(t, seeds)) out.push_back(to_double(z));
  return out;
}

}  // namespace qes::eig
