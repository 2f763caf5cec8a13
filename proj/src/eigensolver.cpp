#include "qes/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qes::eig {

const char* to_string(SolverPath path) {
  switch (path) {
    case SolverPath::SymmetricBisection: return "symmetric-bisection";
    case SolverPath::ComplexQR: return "complex-qr";
    case SolverPath::CharacteristicRoots: return "characteristic-roots";
  }
  return "unknown";
}

namespace {

void check_dimension(const TridiagonalOperator& t) {
  if (t.dim() > kMaxDimension) {
    fail(ErrorKind::InvalidParameter,
         "oracle dimension " + std::to_string(t.dim()) + " exceeds " +
             std::to_string(kMaxDimension));
  }
  if (!t.is_finite()) fail(ErrorKind::InvalidParameter, "operator has non-finite entries");
}

double row_sum_norm(const TridiagonalOperator& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    double s = std::abs(t.main()[i]);
    if (i > 0) s += std::abs(t.sub()[i - 1]);
    if (i + 1 < t.dim()) s += std::abs(t.super()[i]);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace

LaurentPolynomial characteristic_polynomial(const TridiagonalOperator& t) {
  check_dimension(t);
  const LaurentPolynomial lambda = LaurentPolynomial::monomial(1);
  LaurentPolynomial prev(1.0);
  LaurentPolynomial cur = LaurentPolynomial(t.main()[0]) - lambda;
  for (std::size_t k = 1; k < t.dim(); ++k) {
    LaurentPolynomial next = (LaurentPolynomial(t.main()[k]) - lambda) * cur -
                             LaurentPolynomial(t.sub()[k - 1] * t.super()[k - 1]) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Complex determinant(const TridiagonalOperator& t) {
  Complex prev = 1.0;
  Complex cur = t.main()[0];
  for (std::size_t k = 1; k < t.dim(); ++k) {
    Complex next = t.main()[k] * cur - t.sub()[k - 1] * t.super()[k - 1] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

SolverPath select_path(const TridiagonalOperator& t) {
  const double scale = std::max(t.max_abs_entry(), std::numeric_limits<double>::min());
  const double tol = 1e-13 * scale;
  for (const auto* d : {&t.sub(), &t.main(), &t.super()}) {
    for (Complex x : *d) {
      if (std::abs(x.imag()) > tol) return SolverPath::ComplexQR;
    }
  }
  for (std::size_t i = 0; i + 1 < t.dim(); ++i) {
    if (t.sub()[i].real() * t.super()[i].real() < -tol * tol) return SolverPath::ComplexQR;
  }
  return SolverPath::SymmetricBisection;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  const double pivmin = std::numeric_limits<double>::min() * 1e3;
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double b2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
    d = (diag[i] - x) - (i > 0 ? b2 / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

std::vector<double> symmetric_eigenvalues(std::span<const double> diag,
                                          std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) fail(ErrorKind::InvalidParameter, "empty matrix");
  if (off.size() + 1 != n) fail(ErrorKind::LengthMismatch, "off-diagonal length must be n-1");
  if (n == 1) return {diag[0]};

  // Gershgorin enclosure, widened slightly.
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double width = std::max({std::abs(lo), std::abs(hi), 1e-300});
  constexpr double eps = std::numeric_limits<double>::epsilon();
  lo -= 4 * eps * width * n + 1e-300;
  hi += 4 * eps * width * n + 1e-300;

  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = lo;
    double b = hi;
    for (int iter = 0; iter < 400; ++iter) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (b - a <= 2 * eps * std::max(std::abs(a), std::abs(b))) break;
      if (sturm_count(diag, off, mid) > k) b = mid;
      else a = mid;
    }
    values[k] = 0.5 * (a + b);
  }
  return values;
}

TridiagonalOperator balanced(const TridiagonalOperator& t) {
  TridiagonalOperator b = t;
  for (std::size_t i = 0; i + 1 < t.dim(); ++i) {
    double s = std::abs(t.sub()[i]);
    double u = std::abs(t.super()[i]);
    if (s == 0.0 || u == 0.0) continue;
    double r = std::sqrt(s / u);
    b.super()[i] *= r;
    b.sub()[i] /= r;
  }
  return b;
}

std::vector<Complex> eigenvalues(const TridiagonalOperator& t, SolverPath path) {
  check_dimension(t);
  switch (path) {
    case SolverPath::SymmetricBisection: {
      std::vector<double> diag(t.dim());
      std::vector<double> off(t.dim() - 1);
      for (std::size_t i = 0; i < t.dim(); ++i) diag[i] = t.main()[i].real();
      for (std::size_t i = 0; i + 1 < t.dim(); ++i) {
        double p = t.sub()[i].real() * t.super()[i].real();
        off[i] = p > 0 ? std::sqrt(p) : 0.0;
      }
      std::vector<Complex> out;
      for (double v : symmetric_eigenvalues(diag, off)) out.emplace_back(v, 0.0);
      return out;
    }
    case SolverPath::ComplexQR: {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(balanced(t).to_dense(), false);
      if (solver.info() != Eigen::Success) fail(ErrorKind::SolverFailure, "QR iteration did not converge");
      const auto& ev = solver.eigenvalues();
      return std::vector<Complex>(ev.data(), ev.data() + ev.size());
    }
    case SolverPath::CharacteristicRoots:
      try {
        return numerics::polynomial_roots(characteristic_polynomial(t));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SolverFailure) throw;
        fail(ErrorKind::SolverFailure, e.what());
      }
  }
  fail(ErrorKind::InvalidParameter, "unknown solver path");
}

std::vector<Complex> eigenvalues(const TridiagonalOperator& t) {
  check_dimension(t);
  return eigenvalues(t, select_path(t));
}

double eigenpair_residual(const TridiagonalOperator& t, Complex lam, std::span<const Complex> v) {
  std::vector<Complex> tv = t.apply(v);
  double r = 0.0;
  double vn = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    r = std::max(r, std::abs(tv[i] - lam * v[i]));
    vn = std::max(vn, std::abs(v[i]));
  }
  const double denom = row_sum_norm(t) * vn;
  return denom > 0 ? r / denom : r;
}

std::vector<Complex> eigenvector(const TridiagonalOperator& t, Complex lam) {
  check_dimension(t);
  const auto n = static_cast<Eigen::Index>(t.dim());
  const Complex shift = lam * (1.0 + 1e-10) + 1e-12;
  Eigen::MatrixXcd a = t.to_dense();
  a.diagonal().array() -= shift;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);

  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(1.0 + 0.01 * i, 0.001 * i);

  constexpr double kTarget = 1e-8;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Complex> best_v;
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::VectorXcd w = lu.solve(v);
    Eigen::Index imax = 0;
    w.cwiseAbs().maxCoeff(&imax);
    if (!is_finite(w(imax)) || w(imax) == 0.0) {
      fail(ErrorKind::SolverFailure, "inverse iteration broke down");
    }
    v = w / w(imax);
    std::vector<Complex> cand(v.data(), v.data() + n);
    double res = eigenpair_residual(t, lam, cand);
    if (res < best) {
      best = res;
      best_v = std::move(cand);
    } else if (best <= kTarget) {
      break;
    }
    if (best <= 1e-15) break;
  }
  if (!(best <= kTarget)) {
    fail(ErrorKind::SolverFailure, "inverse iteration residual target not met");
  }
  return best_v;
}

double SpectrumReport::max_distance() const {
  double m = 0.0;
  for (double d : pairing_distances) m = std::max(m, d);
  return m;
}

void SpectrumReport::refresh_passed() {
  passed = closed_form.size() == oracle.size() && max_residual <= tolerance;
  for (double d : pairing_distances) passed = passed && d <= tolerance;
}

SpectrumReport compare_spectra(std::span<const Complex> closed, std::span<const Complex> oracle,
                               double tol) {
  if (closed.size() != oracle.size()) {
    fail(ErrorKind::LengthMismatch, "spectra differ in length (" + std::to_string(closed.size()) +
                                        " vs " + std::to_string(oracle.size()) + ")");
  }
  SpectrumReport rep;
  rep.tolerance = tol;
  rep.closed_form.assign(closed.begin(), closed.end());
  std::sort(rep.closed_form.begin(), rep.closed_form.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<Complex> pool(oracle.begin(), oracle.end());
  for (Complex c : rep.closed_form) {
    auto it = std::min_element(pool.begin(), pool.end(), [c](Complex a, Complex b) {
      return std::abs(a - c) < std::abs(b - c);
    });
    rep.oracle.push_back(*it);
    rep.pairing_distances.push_back(std::abs(*it - c));
    pool.erase(it);
  }
  rep.refresh_passed();
  return rep;
}

}  // namespace qes::eig
