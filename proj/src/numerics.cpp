#include "qes/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qes/laurent_polynomial.hpp"

namespace qes {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

namespace numerics {

Complex pochhammer(Complex a, int k) {
  if (k < 0) fail(ErrorKind::InvalidParameter, "pochhammer length < 0");
  Complex r = 1.0;
  for (int j = 0; j < k; ++j) r *= a + static_cast<double>(j);
  return r;
}

double pochhammer(double a, int k) {
  if (k < 0) fail(ErrorKind::InvalidParameter, "pochhammer length < 0");
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= a + j;
  return r;
}

Complex q_pochhammer(Complex d, Complex q, int k) {
  if (k < 0) fail(ErrorKind::InvalidParameter, "q_pochhammer length < 0");
  Complex r = 1.0;
  Complex dq = d;
  for (int j = 0; j < k; ++j) {
    r *= 1.0 - dq;
    dq *= q;
  }
  return r;
}

std::vector<Complex> hypergeometric_terms(std::span<const Complex> ratios) {
  std::vector<Complex> terms;
  terms.reserve(ratios.size() + 1);
  terms.push_back(1.0);
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (!is_finite(ratios[k])) {
      fail(ErrorKind::InvalidParameter,
           "non-finite term ratio at index " + std::to_string(k + 1));
    }
    terms.push_back(terms.back() * ratios[k]);
  }
  return terms;
}

Complex truncated_hypergeometric_sum(std::span<const Complex> ratios) {
  Complex sum = 0.0;
  for (Complex t : hypergeometric_terms(ratios)) sum += t;
  return sum;
}

double relative_polynomial_residual(const LaurentPolynomial& p, Complex z) {
  double scale = 0.0;
  for (const auto& [e, c] : p.terms()) scale += std::abs(c) * std::pow(std::abs(z), e);
  if (scale == 0.0) return 0.0;
  return std::abs(p.evaluate(z)) / scale;
}

namespace {

// Initial approximations placed on circles whose radii come from the upper
// convex hull of (k, log|c_k|).
std::vector<Complex> newton_polygon_start(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  auto logabs = [&](int k) { return std::log(std::abs(c[k])); };
  for (int k = 0; k <= n; ++k) {
    if (c[k] == 0.0) continue;
    while (hull.size() >= 2) {
      int i = hull[hull.size() - 2];
      int j = hull.back();
      // drop j if it lies on or below the chord from i to k
      double cross = (j - i) * (logabs(k) - logabs(i)) - (k - i) * (logabs(j) - logabs(i));
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  std::vector<Complex> z;
  z.reserve(n);
  const double two_pi = 2.0 * std::numbers::pi;
  const double sigma = 0.7;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    int i = hull[h];
    int j = hull[h + 1];
    int m = j - i;
    double u = std::pow(std::abs(c[i]) / std::abs(c[j]), 1.0 / m);
    // Angles are indexed across the whole polygon so that no two starts
    // coincide when neighbouring segments have nearly equal radii.
    for (int t = 0; t < m; ++t) z.push_back(std::polar(u, two_pi * (i + t) / n + sigma));
  }
  return z;
}

}  // namespace

std::vector<Complex> polynomial_roots(const LaurentPolynomial& p) {
  if (p.is_zero()) fail(ErrorKind::DegenerateInput, "zero polynomial has no finite root set");
  const int lo = p.lowest_exponent();
  const int hi = p.highest_exponent();
  if (lo < 0) fail(ErrorKind::InvalidParameter, "polynomial_roots needs nonnegative exponents");
  if (hi == 0) fail(ErrorKind::DegenerateInput, "constant polynomial");

  std::vector<Complex> roots(static_cast<std::size_t>(lo), Complex(0.0));
  const std::vector<Complex> c = p.coefficients(lo, hi);
  const int n = hi - lo;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  std::vector<Complex> z = newton_polygon_start(c);
  std::vector<bool> done(n, false);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIterations = 1000;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      all_done = false;
      Complex val = c[n];
      Complex der = 0.0;
      double scale = std::abs(c[n]);
      const double az = std::abs(z[i]);
      for (int k = n - 1; k >= 0; --k) {
        der = der * z[i] + val;
        val = val * z[i] + c[k];
        scale = scale * az + std::abs(c[k]);
      }
      // Inside the rounding floor the step is still taken once: the
      // residual test alone can stop well short of the attainable accuracy.
      const bool at_floor = std::abs(val) <= 4.0 * eps * scale;
      if (at_floor && der == 0.0) {
        done[i] = true;
        continue;
      }
      Complex ratio = val / der;
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      Complex w = ratio / (1.0 - ratio * repulsion);
      if (!is_finite(w)) fail(ErrorKind::SolverFailure, "Aberth correction overflowed");
      z[i] -= w;
      if (at_floor || std::abs(w) <= 2.0 * eps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }

  const LaurentPolynomial reduced = LaurentPolynomial::from_coefficients(c);
  for (Complex r : z) {
    if (relative_polynomial_residual(reduced, r) > 1e-8) {
      fail(ErrorKind::SolverFailure, "root finder did not reach the residual target");
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace numerics
}  // namespace qes

namespace qes::numerics {

double proportionality_deviation(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) fail(ErrorKind::LengthMismatch, "vectors differ in length");
  std::size_t imax = 0;
  double umax = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    umax = std::max(umax, std::abs(u[i]));
  }
  if (v.empty() || v[imax] == 0.0 || umax == 0.0) {
    fail(ErrorKind::DegenerateInput, "proportionality of a zero vector");
  }
  const Complex c = u[imax] / v[imax];
  double dev = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(u[i] - c * v[i]));
  return dev / umax;
}

Derivatives central_derivatives(const std::function<Complex(Complex)>& f, Complex z, double h) {
  auto level = [&](double s) {
    const Complex fp = f(z + s), fm = f(z - s), f0 = f(z);
    return Derivatives{(fp - fm) / (2 * s), (fp - 2.0 * f0 + fm) / (s * s)};
  };
  Derivatives d[3] = {level(h), level(h / 2), level(h / 4)};
  // Errors are even in the step: eliminate h^2, then h^4.
  auto extrapolate = [](Complex a, Complex b, double factor) { return (factor * b - a) / (factor - 1); };
  Derivatives r1[2];
  for (int i = 0; i < 2; ++i) {
    r1[i] = {extrapolate(d[i].first, d[i + 1].first, 4), extrapolate(d[i].second, d[i + 1].second, 4)};
  }
  return {extrapolate(r1[0].first, r1[1].first, 16), extrapolate(r1[0].second, r1[1].second, 16)};
}

}  // namespace qes::numerics
