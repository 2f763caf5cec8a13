#include "qes/dual_hahn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qes/eigensolver_extended.hpp"

namespace qes::dual_hahn {

namespace {

constexpr double kFactorFloor = 1e-12;
// Recurrence steps whose leading factor is this close to zero lose accuracy;
// the binomial sum is used instead.
constexpr double kJacobiNearSingular = 0.5;

void check_m(int m, const HahnParams& p) {
  if (m < 0 || m > p.N) {
    fail(ErrorKind::InvalidParameter,
         "index m=" + std::to_string(m) + " outside 0.." + std::to_string(p.N));
  }
}

// Smallest |base + j|, j = 0..count-1.
double nearest_factor(double base, int count) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < count; ++j) best = std::min(best, std::abs(base + j));
  return best;
}

// Generalized binomial coefficient y(y-1)...(y-j+1)/j!.
double binomial(double y, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (y - i) / (i + 1);
  return r;
}

Complex jacobi_binomial_sum(int k, double alpha, double beta, Complex x) {
  const Complex lo = (x - 1.0) / 2.0;
  const Complex hi = (x + 1.0) / 2.0;
  Complex sum = 0.0;
  for (int s = 0; s <= k; ++s) {
    sum += binomial(k + alpha, k - s) * binomial(k + beta, s) * std::pow(lo, s) * std::pow(hi, k - s);
  }
  return sum;
}

}  // namespace

bool HahnParams::is_valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

void HahnParams::validate() const {
  if (N < 1) fail(ErrorKind::InvalidParameter, "N must be at least 1");
  if (!std::isfinite(gamma) || !std::isfinite(delta)) {
    fail(ErrorKind::InvalidParameter, "gamma and delta must be finite");
  }
  if (nearest_factor(gamma + 1.0, N) <= kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "(gamma+1)_k vanishes for some k <= N");
  }
  if (nearest_factor(-delta - N, N) <= kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "(-delta-N)_k vanishes for some k <= N");
  }
}

HahnParams random_params(Rng& rng, int N, double lo, double hi) {
  for (;;) {
    HahnParams p{rng.uniform(lo, hi), rng.uniform(lo, hi), N};
    if (p.is_valid()) return p;
  }
}

std::vector<Complex> dual_hahn_sequence(Complex lam, const HahnParams& p) {
  p.validate();
  std::vector<Complex> seq(p.N + 1);
  seq[0] = 1.0;
  Complex prev = 0.0;
  for (int n = 0; n < p.N; ++n) {
    seq[n + 1] = ((lam + p.A(n) + p.C(n)) * seq[n] - p.C(n) * prev) / p.A(n);
    prev = seq[n];
  }
  return seq;
}

Complex dual_hahn_polynomial(int n, Complex lam, const HahnParams& p) {
  check_m(n, p);
  return dual_hahn_sequence(lam, p)[n];
}

TridiagonalOperator build_recurrence_matrix(const HahnParams& p) {
  p.validate();
  TridiagonalOperator t(p.N + 1);
  for (int n = 0; n <= p.N; ++n) {
    t.main()[n] = -(p.A(n) + p.C(n));
    if (n < p.N) {
      t.super()[n] = p.A(n);
      t.sub()[n] = p.C(n + 1);
    }
  }
  return t;
}

std::vector<Complex> build_transposed_polynomials(const HahnParams& p, Complex lam) {
  std::vector<Complex> seq = dual_hahn_sequence(lam, p);
  // Running factor A_0...A_{n-1}/(C_1...C_n), which equals the Pochhammer
  // ratio; the C_n are nonzero for valid parameters.
  double factor = 1.0;
  for (int n = 1; n <= p.N; ++n) {
    factor *= p.A(n - 1) / p.C(n);
    seq[n] *= factor;
  }
  return seq;
}

OdeCoefficients differential_operator_coefficients(const HahnParams& p) {
  const double g = p.gamma, d = p.delta, N = p.N;
  const LaurentPolynomial z = LaurentPolynomial::monomial(1);
  const LaurentPolynomial zm1 = z - LaurentPolynomial(1.0);
  OdeCoefficients out;
  out.a = z * zm1 * zm1;
  out.b = LaurentPolynomial::monomial(2, g - N + 2) - LaurentPolynomial::monomial(1, g - d - 2 * N + 2) -
          LaurentPolynomial(d + N);
  out.c = Complex(-N * (g + 1)) * zm1;
  return out;
}

LaurentPolynomial apply_differential_operator(const HahnParams& p, const LaurentPolynomial& f) {
  const OdeCoefficients k = differential_operator_coefficients(p);
  const LaurentPolynomial df = f.derivative();
  return k.a * df.derivative() + k.b * df + k.c * f;
}

Eigen::MatrixXcd differential_operator_matrix(const HahnParams& p) {
  p.validate();
  const int n = p.N + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const LaurentPolynomial image = apply_differential_operator(p, LaurentPolynomial::monomial(k));
    // The z^{N+1} coefficient of D z^N cancels only up to rounding.
    const double tol = 1e-12 * std::max(1.0, image.max_abs_coefficient());
    for (const auto& [e, c] : image.terms()) {
      if (e >= 0 && e < n) {
        m(e, k) = c;
      } else if (std::abs(c) > tol) {
        fail(ErrorKind::DegenerateInput, "differential operator leaves span{1..z^N}");
      }
    }
  }
  return m;
}

std::vector<double> eigenvalues_closed_form(const HahnParams& p) {
  p.validate();
  std::vector<double> out;
  for (int m = 0; m <= p.N; ++m) out.push_back(p.lambda(m));
  return out;
}

LaurentPolynomial generating_function(int m, const HahnParams& p) {
  p.validate();
  check_m(m, p);
  // Expanding (1-z)^m against the series cancels binomial-sized terms, so
  // the convolution is carried in extended precision and rounded once.
  using Wide = long double;
  const int len = p.N - m + 1;
  std::vector<Wide> series(len);
  series[0] = 1;
  for (int k = 1; k < len; ++k) {
    series[k] = series[k - 1] * (Wide(m) - p.N + k - 1) * (Wide(m) + p.gamma + k) /
                ((Wide(-p.delta) - p.N + k - 1) * k);
  }
  std::vector<Wide> binom(m + 1);
  binom[0] = 1;
  for (int j = 1; j <= m; ++j) binom[j] = binom[j - 1] * (m - j + 1) / j;
  std::vector<Complex> coeffs(p.N + 1);
  for (int n = 0; n <= p.N; ++n) {
    Wide acc = 0;
    for (int j = std::max(0, n - len + 1); j <= std::min(m, n); ++j) {
      acc += (j % 2 ? -binom[j] : binom[j]) * series[n - j];
    }
    coeffs[n] = static_cast<double>(acc);
  }
  return LaurentPolynomial::from_coefficients(coeffs);
}

Complex generating_function_value(int m, const HahnParams& p, Complex z) {
  p.validate();
  check_m(m, p);
  // Near z = -1 the series cancels to about 1e-9 of its largest term at
  // N = 30, so terms and Horner steps are carried in quad precision.
  using eig::Complex128;
  using eig::Real128;
  const int len = p.N - m + 1;
  std::vector<Real128> terms(len);
  terms[0] = 1;
  for (int k = 1; k < len; ++k) {
    terms[k] = terms[k - 1] * (Real128(m) - p.N + k - 1) * (Real128(m) + p.gamma + k) /
               ((-Real128(p.delta) - p.N + k - 1) * k);
  }
  const Complex128 w(z.real(), z.imag());
  Complex128 sum = 0;
  for (int k = len - 1; k >= 0; --k) sum = sum * w + terms[k];
  const Complex128 value = pow(Complex128(1) - w, m) * sum;
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

Complex jacobi_polynomial(int k, double alpha, double beta, Complex x) {
  if (k < 0) fail(ErrorKind::InvalidParameter, "Jacobi degree must be nonnegative");
  if (k == 0) return 1.0;
  const double ab = alpha + beta;
  for (int n = 1; n < k; ++n) {
    if (std::abs(n + ab + 1) < kJacobiNearSingular || std::abs(2 * n + ab) < kJacobiNearSingular) {
      return jacobi_binomial_sum(k, alpha, beta, x);
    }
  }
  Complex prev = 1.0;
  Complex cur = (alpha + 1) + (ab + 2) * (x - 1.0) / 2.0;
  for (int n = 1; n < k; ++n) {
    const double s = 2 * n + ab;
    const double a1 = 2.0 * (n + 1) * (n + ab + 1) * s;
    const double a2 = (s + 1) * (alpha * alpha - beta * beta);
    const double a3 = s * (s + 1) * (s + 2);
    const double a4 = 2.0 * (n + alpha) * (n + beta) * (s + 2);
    const Complex next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

Complex jacobi_form(int m, const HahnParams& p, Complex z) {
  p.validate();
  if (m > p.N) fail(ErrorKind::InvalidParameter, "index m exceeds N");
  if (z == 1.0) fail(ErrorKind::DegenerateInput, "Jacobi form is singular at z = 1");
  const int k = p.N - m;
  const double denom = numerics::pochhammer(-p.N - p.delta, k);
  if (std::abs(denom) == 0.0) fail(ErrorKind::InvalidParameter, "(-N-delta)_{N-m} vanishes");
  const double pref = std::tgamma(k + 1.0) / denom;
  const Complex x = (1.0 + z) / (1.0 - z);
  return pref * std::pow(1.0 - z, p.N) *
         jacobi_polynomial(k, -p.delta - p.N - 1, -p.gamma - p.N - 1, x);
}

std::pair<Complex, Complex> jacobi_reduction_check(int m, const HahnParams& p, Complex z) {
  check_m(m, p);
  if (z == 1.0) fail(ErrorKind::DegenerateInput, "Jacobi form is singular at z = 1");
  return {generating_function_value(m, p, z), jacobi_form(m, p, z)};
}

double ode_residual(int m, const HahnParams& p) {
  const LaurentPolynomial f = generating_function(m, p);
  const OdeCoefficients k = differential_operator_coefficients(p);
  const LaurentPolynomial d1 = f.derivative();
  const LaurentPolynomial t2 = k.a * d1.derivative(), t1 = k.b * d1, t0 = k.c * f;
  const LaurentPolynomial lf = Complex(p.lambda(m)) * f;
  // When lambda(m) = 0, D f_m vanishes identically, so the scale is taken
  // from the individual terms of D f_m instead.
  const double scale = p.lambda(m) != 0.0
                           ? lf.max_abs_coefficient()
                           : std::max({t2.max_abs_coefficient(), t1.max_abs_coefficient(),
                                       t0.max_abs_coefficient()});
  const double r = (t2 + t1 + t0 - lf).max_abs_coefficient();
  return scale > 0 ? r / scale : r;
}

double ode_pointwise_residual(int m, const HahnParams& p, Complex z) {
  const OdeCoefficients k = differential_operator_coefficients(p);
  auto g = [&](Complex w) { return jacobi_form(m, p, w); };
  const double h = 1e-2 * std::min(1.0, std::abs(z - 1.0));
  const numerics::Derivatives d = numerics::central_derivatives(g, z, h);
  const Complex g0 = g(z);
  const Complex t1 = k.a.evaluate(z) * d.second;
  const Complex t2 = k.b.evaluate(z) * d.first;
  const Complex t3 = k.c.evaluate(z) * g0;
  const Complex t4 = p.lambda(m) * g0;
  const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  const double r = std::abs(t1 + t2 + t3 - t4);
  return scale > 0 ? r / scale : r;
}

Sl2Generators build_sl2_generators(int N) {
  if (N < 1) fail(ErrorKind::InvalidParameter, "N must be at least 1");
  const int n = N + 1;
  Sl2Generators g{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n),
                  Eigen::MatrixXcd::Zero(n, n)};
  for (int k = 0; k < n; ++k) {
    if (k + 1 < n) g.plus(k + 1, k) = static_cast<double>(k - N);
    g.zero(k, k) = k - N / 2.0;
    if (k > 0) g.minus(k - 1, k) = static_cast<double>(k);
  }
  return g;
}

Eigen::MatrixXcd sl2_assembled_operator(const HahnParams& p) {
  p.validate();
  const Sl2Generators j = build_sl2_generators(p.N);
  const double g = p.gamma, d = p.delta, N = p.N;
  const auto id = Eigen::MatrixXcd::Identity(p.N + 1, p.N + 1);
  return j.plus * j.zero - 2.0 * j.plus * j.minus + j.zero * j.minus + (g + 1 + N / 2) * j.plus +
         (d - g - 2) * j.zero - (N / 2 + d) * j.minus + (N * (d + g) / 2) * id;
}

double sl2_decomposition_check(const HahnParams& p) {
  const Eigen::MatrixXcd ode = differential_operator_matrix(p);
  const double diff = (sl2_assembled_operator(p) - ode).cwiseAbs().maxCoeff();
  const double scale = ode.cwiseAbs().maxCoeff();
  return scale > 0 ? diff / scale : diff;
}

double evaluate(const Quadratic& q, double k) { return q[0] + k * (q[1] + k * q[2]); }

TridiagonalOperator build_general_family(const GeneralFamilySpec& spec) {
  if (spec.N < 1) fail(ErrorKind::InvalidParameter, "N must be at least 1");
  double scale = 1.0;
  for (const auto* q : {&spec.A, &spec.B, &spec.C}) {
    for (double c : *q) scale = std::max(scale, std::abs(c));
  }
  if (std::abs(evaluate(spec.C, spec.N + 1)) > 1e-12 * scale) {
    fail(ErrorKind::InvalidParameter, "boundary condition C(N+1) = 0 violated");
  }
  if (std::abs(evaluate(spec.B, -1)) > 1e-12 * scale) {
    fail(ErrorKind::InvalidParameter, "boundary condition B(-1) = 0 violated");
  }
  TridiagonalOperator t(spec.N + 1);
  for (int k = 0; k <= spec.N; ++k) {
    t.main()[k] = evaluate(spec.A, k);
    if (k < spec.N) {
      t.super()[k] = evaluate(spec.B, k);
      t.sub()[k] = evaluate(spec.C, k + 1);
    }
  }
  return t;
}

GeneralFamilySpec dual_hahn_family(const HahnParams& p) {
  p.validate();
  const double g = p.gamma, d = p.delta, N = p.N;
  GeneralFamilySpec s;
  s.N = p.N;
  // A_k + C_k = (k-N)(k+g+1) + k(k-d-N-1) = 2k^2 + (g-d-2N)k - N(g+1)
  s.A = {N * (g + 1), -(g - d - 2 * N), -2.0};
  // B(k) = C_{k+1} = (k+1)(k-d-N)
  s.B = {-d - N, 1 - d - N, 1.0};
  // C(k) = A_{k-1} = (k-1-N)(k+g)
  s.C = {-(1 + N) * g, g - 1 - N, 1.0};
  return s;
}

bool satisfies_askey_wilson(const TridiagonalOperator& t, double tol) {
  const std::size_t n = t.dim();
  const double scale = std::max(t.max_abs_entry(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = t.main()[k];
    if (k >= 1) s += t.super()[k - 1];
    if (k + 1 < n) s += t.sub()[k];
    if (std::abs(s) > tol * scale) return false;
  }
  return true;
}

}  // namespace qes::dual_hahn
