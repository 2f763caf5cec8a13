#include "qes/q_hahn.hpp"

#include "qes/eigensolver_extended.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace qes::q_hahn {

namespace {

constexpr double kFactorFloor = 1e-10;
constexpr double kLeakageTolerance = 1e-12;
constexpr double kUqTolerance = 1e-9;
constexpr double kMinSeparation = 1e-3;

using std::numbers::pi;

// q^n. Roots of unity reduce the exponent first so that q^N is exactly 1.
Complex qpow(const QHahnParams& p, int n) {
  if (p.mode == QMode::RootOfUnity) {
    const long long e = ((static_cast<long long>(p.S) * n) % p.N + p.N) % p.N;
    return std::polar(1.0, 2.0 * pi * double(e) / p.N);
  }
  return std::pow(p.q, n);
}

// Series and recurrences for general q cancel heavily once |q|^{1-N} is
// large, so they run in quad precision and are rounded once.
using eig::Complex128;
using eig::Real128;

Complex128 widen(Complex z) { return {Real128(z.real()), Real128(z.imag())}; }
Complex narrow(const Complex128& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

Complex128 ipow(const Complex128& x, int n) {
  Complex128 r = 1, base = n < 0 ? Complex128(1) / x : x;
  for (int i = 0; i < std::abs(n); ++i) r *= base;
  return r;
}

struct WideParams {
  Complex128 a, b, c, q;
  int N;

  explicit WideParams(const QHahnParams& p) : a(widen(p.a)), b(widen(p.b)), N(p.N) {
    if (p.mode == QMode::RootOfUnity) {
      const Real128 angle =
          2 * boost::math::constants::pi<Real128>() * (((p.S % p.N) + p.N) % p.N) / p.N;
      q = Complex128(cos(angle), sin(angle));
      c = q / a;
    } else {
      q = widen(p.q);
      c = ipow(q, 1 - N) / a;
    }
  }
  Complex128 A(int n) const { return (1 - a * b * ipow(q, n)) * (1 - a * c * ipow(q, n)) / a; }
  Complex128 C(int n) const { return a * (1 - ipow(q, n)) * (1 - b * c * ipow(q, n - 1)); }
  Complex128 diagonal(int n) const { return a + 1 / a - A(n) - C(n); }
};

Complex128 wide_cdqh_sum(int n, const Complex128& t, const WideParams& w) {
  const Complex128 qn = ipow(w.q, -n);
  Complex128 term = 1, sum = 1, qk = 1;
  for (int k = 0; k < n; ++k) {
    term *= (1 - qn * qk) * (1 - w.a * t * qk) * (1 - w.a / t * qk) * w.q /
            ((1 - w.a * w.b * qk) * (1 - w.a * w.c * qk) * (1 - w.q * qk));
    sum += term;
    qk *= w.q;
  }
  return sum;
}

void check_m(int m, const QHahnParams& p) {
  if (m < 0 || m >= p.N) {
    fail(ErrorKind::InvalidParameter,
         "index m=" + std::to_string(m) + " outside 0.." + std::to_string(p.N - 1));
  }
}

// Smallest |1 - d q^j|, j = 0..count-1.
double nearest_factor(Complex d, Complex q, int count) {
  double best = std::numeric_limits<double>::infinity();
  Complex dq = d;
  for (int j = 0; j < count; ++j) {
    best = std::min(best, std::abs(1.0 - dq));
    dq *= q;
  }
  return best;
}

// (d z; q)_n as a polynomial in z.
LaurentPolynomial q_shifted_linear(Complex d, Complex q, int n) {
  LaurentPolynomial r(1.0);
  Complex dq = d;
  for (int j = 0; j < n; ++j) {
    r *= LaurentPolynomial(LaurentPolynomial::Terms{{0, 1.0}, {1, -dq}});
    dq *= q;
  }
  return r;
}

LaurentPolynomial laurent(Complex lower, Complex constant, Complex upper) {
  return LaurentPolynomial(LaurentPolynomial::Terms{{-1, lower}, {0, constant}, {1, upper}});
}

Eigen::MatrixXcd diagonal_powers(int N, Complex w) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(N, N);
  for (int k = 0; k < N; ++k) d(k, k) = std::pow(w, k);
  return d;
}

double uq_deviation(const QHahnParams& p, Complex w) {
  const Eigen::MatrixXcd target = q_difference_coefficients_root_of_unity(p).matrix(p.N).to_dense();
  const Eigen::MatrixXcd diff = uq_assembled_operator(p, w) - target;
  return diff.cwiseAbs().maxCoeff() / target.cwiseAbs().maxCoeff();
}

}  // namespace

const char* to_string(QMode mode) {
  return mode == QMode::RootOfUnity ? "root_of_unity" : "general";
}

QHahnParams QHahnParams::root_of_unity(int N, int S, Complex a, Complex b) {
  if (N < 2) fail(ErrorKind::InvalidParameter, "N must be at least 2");
  if (std::gcd(S, N) != 1) {
    fail(ErrorKind::InvalidParameter,
         "S=" + std::to_string(S) + " not coprime to N=" + std::to_string(N));
  }
  QHahnParams p;
  p.N = N;
  p.S = S;
  p.mode = QMode::RootOfUnity;
  p.q = std::polar(1.0, 2.0 * pi * double(((S % N) + N) % N) / N);
  p.a = a;
  p.b = b;
  p.c = p.q / a;
  return p;
}

QHahnParams QHahnParams::general(Complex q, int N, Complex a, Complex b) {
  QHahnParams p;
  p.N = N;
  p.mode = QMode::General;
  p.q = q;
  p.a = a;
  p.b = b;
  p.c = std::pow(q, 1 - N) / a;
  return p;
}

bool QHahnParams::is_valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

void QHahnParams::validate() const {
  if (N < 2) fail(ErrorKind::InvalidParameter, "N must be at least 2");
  if (!is_finite(a) || !is_finite(b) || !is_finite(q)) {
    fail(ErrorKind::InvalidParameter, "a, b, q must be finite");
  }
  if (std::abs(a) < kFactorFloor) fail(ErrorKind::InvalidParameter, "a must be nonzero");
  if (std::abs(q) < kFactorFloor) fail(ErrorKind::InvalidParameter, "q must be nonzero");
  if (mode == QMode::RootOfUnity) {
    if (std::gcd(S, N) != 1) fail(ErrorKind::InvalidParameter, "S not coprime to N");
    if (std::abs(1.0 - std::pow(q, N)) > 1e-10) {
      fail(ErrorKind::InvalidParameter, "q is not an N-th root of unity");
    }
  }
  // (q;q)_{N-1}: for general q this excludes roots of unity of order < N.
  if (nearest_factor(q, q, N - 1) <= kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "(q;q)_k vanishes for some k <= N-1");
  }
  if (nearest_factor(a * b, q, N) <= kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "(ab;q)_k vanishes for some k <= N");
  }
  if (mode == QMode::General &&
      nearest_factor(b / a * std::pow(q, 1 - N), q, N - 1) <= kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "(b a^{-1} q^{1-N};q)_k vanishes for some k <= N-1");
  }
}

Complex QHahnParams::A(int n) const {
  return (1.0 - a * b * std::pow(q, n)) * (1.0 - a * c * std::pow(q, n)) / a;
}

Complex QHahnParams::C(int n) const {
  return a * (1.0 - std::pow(q, n)) * (1.0 - b * c * std::pow(q, n - 1));
}

Complex QHahnParams::sqrt_q() const {
  if (mode == QMode::RootOfUnity) return std::polar(1.0, pi * double(((S % N) + N) % N) / N);
  return std::sqrt(q);
}

Complex two_x(int m, const QHahnParams& p) {
  const Complex t = p.a * qpow(p, m);
  return t + 1.0 / t;
}

std::vector<Complex> spectrum_closed_form_q(const QHahnParams& p) {
  p.validate();
  std::vector<Complex> out;
  for (int m = 0; m < p.N; ++m) out.push_back(two_x(m, p));
  return out;
}

Complex cdqh_sum(int n, Complex t, const QHahnParams& p) {
  p.validate();
  return narrow(wide_cdqh_sum(n, widen(t), WideParams(p)));
}

static std::vector<Complex128> wide_cdqh_sequence(const Complex128& x2, const WideParams& w) {
  std::vector<Complex128> out(w.N);
  out[0] = 1;
  Complex128 prev = 0;
  for (int n = 0; n + 1 < w.N; ++n) {
    out[n + 1] = ((x2 - w.diagonal(n)) * out[n] - w.C(n) * prev) / w.A(n);
    prev = out[n];
  }
  return out;
}

std::vector<Complex> cdqh_sequence(Complex two_x_value, const QHahnParams& p) {
  p.validate();
  std::vector<Complex> out;
  for (const Complex128& v : wide_cdqh_sequence(widen(two_x_value), WideParams(p))) {
    out.push_back(narrow(v));
  }
  return out;
}

Complex cdqh_polynomial(int n, Complex t, const QHahnParams& p) {
  p.validate();
  if (n < 0 || n >= p.N) fail(ErrorKind::InvalidParameter, "degree outside 0..N-1");
  const Complex128 wt = widen(t);
  return narrow(wide_cdqh_sequence(wt + 1 / wt, WideParams(p))[n]);
}

TridiagonalOperator build_q_matrix_root_of_unity(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  const int N = p.N;
  // Closure of the truncation: C_N = 0 because q^N = 1.
  if (std::abs(1.0 - std::pow(p.q, N)) > 1e-10) {
    fail(ErrorKind::InvalidParameter, "q^N differs from 1");
  }
  std::vector<Complex> sub(N - 1), main(N), super(N - 1);
  for (int n = 0; n < N; ++n) {
    main[n] = p.diagonal(n);
    if (n + 1 < N) {
      super[n] = p.A(n);
      sub[n] = p.C(n + 1);
    }
  }
  return {sub, main, super};
}

TridiagonalOperator build_q_matrix_general(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) fail(ErrorKind::InvalidParameter, "expected general q");
  const int N = p.N;
  std::vector<Complex> sub(N - 1), main(N), super(N - 1);
  for (int n = 0; n < N; ++n) {
    main[n] = p.diagonal(n);
    if (n + 1 < N) {
      sub[n] = p.A(n);
      super[n] = p.C(n + 1);
    }
  }
  return {sub, main, super};
}

TridiagonalOperator build_q_matrix(const QHahnParams& p) {
  return p.mode == QMode::RootOfUnity ? build_q_matrix_root_of_unity(p) : build_q_matrix_general(p);
}

LaurentPolynomial QDifferenceOperator::apply(const LaurentPolynomial& f) const {
  return alpha * f + beta * f.dilated(q) + gamma * f.dilated(q * q);
}

double QDifferenceOperator::leakage(int N) const {
  double scale = 0.0, leak = 0.0;
  for (int k = 0; k < N; ++k) {
    const LaurentPolynomial image = apply(LaurentPolynomial::monomial(k));
    for (const auto& [e, c] : image.terms()) {
      if (e < 0 || e >= N) {
        leak = std::max(leak, std::abs(c));
      } else {
        scale = std::max(scale, std::abs(c));
      }
    }
  }
  return scale > 0.0 ? leak / scale : leak;
}

TridiagonalOperator QDifferenceOperator::matrix(int N) const {
  const double leak = leakage(N);
  if (leak > kLeakageTolerance) {
    fail(ErrorKind::DegenerateInput,
         "q-difference operator leaves the polynomial span (relative leakage " +
             std::to_string(leak) + ")");
  }
  std::vector<Complex> sub(N - 1), main(N), super(N - 1);
  for (int k = 0; k < N; ++k) {
    const LaurentPolynomial image = apply(LaurentPolynomial::monomial(k));
    main[k] = image.coefficient(k);
    if (k > 0) super[k - 1] = image.coefficient(k - 1);
    if (k + 1 < N) sub[k] = image.coefficient(k + 1);
  }
  return {sub, main, super};
}

QDifferenceOperator q_difference_coefficients_root_of_unity(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  const Complex a = p.a, b = p.b, q = p.q;
  QDifferenceOperator op;
  op.q = q;
  op.alpha = laurent(1.0 / a, 0.0, a);
  op.beta = laurent(-(1.0 / a + b / q), a + 2.0 * b + q / a, -(a + b) * q);
  op.gamma = laurent(b / q, -b * (q + 1.0), b * q * q);
  return op;
}

QDifferenceOperator q_difference_coefficients_general(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) fail(ErrorKind::InvalidParameter, "expected general q");
  const Complex a = p.a, b = p.b, q = p.q;
  const Complex qmN = std::pow(q, -p.N);
  const Complex q1mN = std::pow(q, 1 - p.N);
  QDifferenceOperator op;
  op.q = q;
  op.alpha = laurent(a, 0.0, 1.0 / a);
  op.beta = laurent(-(a + b * qmN), a + b + b * qmN + q1mN / a, -(q1mN / a + b));
  op.gamma = laurent(b * qmN, -b * qmN * (q + 1.0), b * qmN * q);
  return op;
}

QDifferenceOperator q_difference_operator(const QHahnParams& p) {
  return p.mode == QMode::RootOfUnity ? q_difference_coefficients_root_of_unity(p)
                                      : q_difference_coefficients_general(p);
}

LaurentPolynomial generating_function_q_root_of_unity(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  check_m(m, p);
  const Complex q = p.q;
  const Complex qm = qpow(p, -m);
  const Complex x = p.a * p.a * qpow(p, m);
  std::vector<Complex> coeffs(m + 1);
  Complex term = 1.0, qk = 1.0;
  for (int k = 0; k <= m; ++k) {
    coeffs[k] = term;
    term *= (1.0 - qm * qk) * (1.0 - p.b / p.a * qm * qk) * x /
            ((1.0 - p.a * p.b * qk) * (1.0 - q * qk));
    qk *= q;
  }
  return q_shifted_linear(q, q, p.N - 1 - m) * LaurentPolynomial::from_coefficients(coeffs);
}

LaurentPolynomial generating_function_q_root_of_unity_sum(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  check_m(m, p);
  const WideParams w(p);
  const Complex128 t = w.a * ipow(w.q, m);
  std::vector<Complex> coeffs(p.N);
  for (int n = 0; n < p.N; ++n) coeffs[n] = narrow(wide_cdqh_sum(n, t, w));
  return LaurentPolynomial::from_coefficients(coeffs);
}

LaurentPolynomial generating_function_q_general(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) fail(ErrorKind::InvalidParameter, "expected general q");
  check_m(m, p);
  const Complex q = p.q;
  const Complex d1 = std::pow(q, m - p.N + 1);
  const Complex d2 = p.a * p.b * std::pow(q, m);
  const Complex e1 = p.b / p.a * std::pow(q, 1 - p.N);
  const Complex x = std::pow(q, -m) / (p.a * p.a);
  std::vector<Complex> coeffs(p.N - m);
  Complex term = 1.0, qk = 1.0;
  for (int k = 0; k < p.N - m; ++k) {
    coeffs[k] = term;
    term *= (1.0 - d1 * qk) * (1.0 - d2 * qk) * x / ((1.0 - e1 * qk) * (1.0 - q * qk));
    qk *= q;
  }
  return q_shifted_linear(1.0, q, m) * LaurentPolynomial::from_coefficients(coeffs);
}

LaurentPolynomial generating_function_q_general_sum(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) fail(ErrorKind::InvalidParameter, "expected general q");
  check_m(m, p);
  const WideParams w(p);
  const Complex128 t = w.a * ipow(w.q, m);
  const Complex128 q1mN = ipow(w.q, 1 - p.N);
  std::vector<Complex> coeffs(p.N);
  Complex128 norm = 1, qn = 1;
  for (int n = 0; n < p.N; ++n) {
    coeffs[n] = narrow(norm * wide_cdqh_sum(n, t, w));
    norm *= (1 - w.a * w.b * qn) * (1 - q1mN * qn) /
            (w.a * w.a * (1 - w.q * qn) * (1 - w.b / w.a * q1mN * qn));
    qn *= w.q;
  }
  return LaurentPolynomial::from_coefficients(coeffs);
}

LaurentPolynomial generating_function_q(int m, const QHahnParams& p) {
  return p.mode == QMode::RootOfUnity ? generating_function_q_root_of_unity(m, p)
                                      : generating_function_q_general(m, p);
}

LaurentPolynomial little_q_jacobi(int n, Complex alpha, Complex beta, Complex q) {
  if (n < 0) fail(ErrorKind::InvalidParameter, "degree must be nonnegative");
  const Complex qn = std::pow(q, -n);
  const Complex ab = alpha * beta * std::pow(q, n + 1);
  std::vector<Complex> coeffs(n + 1);
  Complex term = 1.0, qk = 1.0;
  for (int k = 0; k <= n; ++k) {
    coeffs[k] = term;
    const Complex den = (1.0 - alpha * q * qk) * (1.0 - q * qk);
    if (k < n && std::abs(den) <= kFactorFloor) {
      fail(ErrorKind::InvalidParameter, "little q-Jacobi denominator vanishes");
    }
    term *= (1.0 - qn * qk) * (1.0 - ab * qk) * q / den;
    qk *= q;
  }
  return LaurentPolynomial::from_coefficients(coeffs);
}

LaurentPolynomial little_q_jacobi_form(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) fail(ErrorKind::InvalidParameter, "expected general q");
  check_m(m, p);
  const Complex q = p.q;
  const LaurentPolynomial P = little_q_jacobi(p.N - 1 - m, p.b / p.a * std::pow(q, -p.N),
                                              p.a * p.a * std::pow(q, 2 * m), q);
  return q_shifted_linear(1.0, q, m) * P.dilated(std::pow(q, -m - 1) / (p.a * p.a));
}

double little_q_jacobi_deviation(int m, const QHahnParams& p) {
  const LaurentPolynomial f = generating_function_q_general(m, p);
  return (f - little_q_jacobi_form(m, p)).max_abs_coefficient() / f.max_abs_coefficient();
}

std::vector<Complex> zeros_b0(int m, const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  if (p.b != 0.0) fail(ErrorKind::InvalidParameter, "closed-form zeros need b = 0");
  check_m(m, p);
  const Complex ia2 = 1.0 / (p.a * p.a);
  std::vector<Complex> z;
  if (m == p.N - 1) {
    for (int j = 2; j <= p.N; ++j) z.push_back(ia2 * qpow(p, j));
    return z;
  }
  for (int j = m + 1; j <= p.N - 1; ++j) z.push_back(qpow(p, j));
  for (int j = -m + 1; j <= 0; ++j) z.push_back(ia2 * qpow(p, j));
  return z;
}

double q_difference_residual(int m, const QHahnParams& p) {
  const LaurentPolynomial f = generating_function_q(m, p);
  const QDifferenceOperator op = q_difference_operator(p);
  const LaurentPolynomial t1 = op.alpha * f;
  const LaurentPolynomial t2 = op.beta * f.dilated(op.q);
  const LaurentPolynomial t3 = op.gamma * f.dilated(op.q * op.q);
  const LaurentPolynomial t4 = two_x(m, p) * f;
  const LaurentPolynomial r = t1 + t2 + t3 - t4;
  double worst = 0.0;
  for (int e = -1; e <= p.N; ++e) worst = std::max(worst, std::abs(r.coefficient(e)));
  const double scale = std::max({t1.max_abs_coefficient(), t2.max_abs_coefficient(),
                                 t3.max_abs_coefficient(), t4.max_abs_coefficient()});
  return worst / scale;
}

UqGenerators build_uq_generators(int N, Complex w) {
  if (N < 2) fail(ErrorKind::InvalidParameter, "N must be at least 2");
  const Complex s = w * w;           // q^{1/2}
  const Complex r = std::pow(w, N - 1);  // q^{(N-1)/4}
  const Eigen::MatrixXcd Tp = diagonal_powers(N, s);
  const Eigen::MatrixXcd Tm = diagonal_powers(N, 1.0 / s);
  // z and z^{-1} on the span; each annihilates the monomial it would push out.
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(N, N), Zi = Eigen::MatrixXcd::Zero(N, N);
  for (int k = 0; k + 1 < N; ++k) {
    Z(k + 1, k) = 1.0;
    Zi(k, k + 1) = 1.0;
  }
  const Complex inv = 1.0 / (s - 1.0 / s);
  UqGenerators g;
  g.A = Tp / r;
  g.D = Tm * r;
  g.B = inv * Z * (r * r * Tm - Tp / (r * r));
  g.C = -inv * Zi * (Tm - Tp);
  return g;
}

Eigen::MatrixXcd uq_assembled_operator(const QHahnParams& p, Complex w) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  const int N = p.N;
  const UqGenerators g = build_uq_generators(N, w);
  const Complex q = std::pow(w, 4);
  const Complex s = w * w;
  const Complex r = std::pow(w, N - 1);
  const Complex a = p.a, b = p.b;
  const Eigen::MatrixXcd A2 = g.A * g.A;
  const Eigen::MatrixXcd mixed = b / (r * q) * g.C * g.A + a / (r * q) * g.B * g.D -
                                 b * r * g.B * g.A - r * q / a * g.C * g.D;
  const Eigen::MatrixXcd inner = -b * (1.0 + 1.0 / q) * A2 + (s - 1.0 / s) * mixed +
                                 (a + 2.0 * b + q / a) * r * r *
                                     Eigen::MatrixXcd::Identity(N, N);
  return A2 * inner;
}

UqCheck uq_sl2_decomposition_check(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::RootOfUnity) fail(ErrorKind::InvalidParameter, "q is not a root of unity");
  const Complex w = std::polar(1.0, pi * double(((p.S % p.N) + p.N) % p.N) / (2.0 * p.N));
  UqCheck out;
  out.principal_deviation = uq_deviation(p, w);
  out.deviation = out.principal_deviation;
  out.branch = "principal";
  out.sqrt_q = w * w;
  if (out.principal_deviation > kUqTolerance) {
    const Complex w2 = w * Complex(0.0, 1.0);
    const double d = uq_deviation(p, w2);
    if (d < out.principal_deviation) {
      out.deviation = d;
      out.branch = "opposite";
      out.sqrt_q = w2 * w2;
    }
  }
  return out;
}

Complex DualQHahnParams::A(int n) const {
  return (1.0 - std::pow(q, n - N + 1)) * (1.0 - gamma_q * std::pow(q, n + 1));
}

Complex DualQHahnParams::C(int n) const {
  return gamma_q * q * (1.0 - std::pow(q, n)) * (delta_q - std::pow(q, n - N));
}

Complex DualQHahnParams::mu(int y) const {
  return std::pow(q, -y) + gamma_q * delta_q * std::pow(q, y + 1);
}

void DualQHahnParams::validate() const {
  if (N < 2) fail(ErrorKind::InvalidParameter, "N must be at least 2");
  if (!is_finite(gamma_q) || !is_finite(delta_q) || !is_finite(q) || std::abs(q) < kFactorFloor) {
    fail(ErrorKind::InvalidParameter, "gamma, delta, q must be finite with q nonzero");
  }
  for (int n = 0; n + 1 < N; ++n) {
    if (std::abs(A(n)) <= kFactorFloor) {
      fail(ErrorKind::InvalidParameter, "dual q-Hahn A_n vanishes for n < N-1");
    }
  }
}

static std::vector<Complex128> wide_dual_qhahn_sequence(int y, const DualQHahnParams& p) {
  const Complex128 g = widen(p.gamma_q), d = widen(p.delta_q), q = widen(p.q);
  const int N = p.N;
  auto A = [&](int n) { return (1 - ipow(q, n - N + 1)) * (1 - g * ipow(q, n + 1)); };
  auto C = [&](int n) { return g * q * (1 - ipow(q, n)) * (d - ipow(q, n - N)); };
  const Complex128 mu = ipow(q, -y) + g * d * ipow(q, y + 1);
  const Complex128 base = 1 + g * d * q;
  std::vector<Complex128> out(N);
  out[0] = 1;
  Complex128 prev = 0;
  for (int n = 0; n + 1 < N; ++n) {
    out[n + 1] = ((mu - (base - A(n) - C(n))) * out[n] - C(n) * prev) / A(n);
    prev = out[n];
  }
  return out;
}

std::vector<Complex> dual_qhahn_sequence(int y, const DualQHahnParams& p) {
  p.validate();
  std::vector<Complex> out;
  for (const Complex128& v : wide_dual_qhahn_sequence(y, p)) out.push_back(narrow(v));
  return out;
}

Complex dual_qhahn_polynomial(int n, int y, const DualQHahnParams& p) {
  if (n < 0 || n >= p.N) fail(ErrorKind::InvalidParameter, "degree outside 0..N-1");
  return dual_qhahn_sequence(y, p)[n];
}

DualQHahnParams dual_qhahn_from(const QHahnParams& p) {
  p.validate();
  if (p.mode != QMode::General) {
    fail(ErrorKind::InvalidParameter, "dual q-Hahn correspondence uses ac = q^{1-N}");
  }
  if (p.b == 0.0) fail(ErrorKind::InvalidParameter, "dual q-Hahn correspondence needs b != 0");
  return {p.a * p.b / p.q, p.a / p.b, p.q, p.N};
}

double equivalence_check(const QHahnParams& p) {
  const DualQHahnParams d = dual_qhahn_from(p);
  d.validate();
  const WideParams w(p);
  double worst = 0.0;
  for (int y = 0; y < p.N; ++y) {
    // t = a q^y and 2x = t + 1/t are formed at the working precision of
    // both recurrences, so the comparison sees the maps and not the rounding of x.
    const Complex128 t = w.a * ipow(w.q, y);
    const std::vector<Complex128> lhs = wide_cdqh_sequence(t + 1 / t, w);
    const std::vector<Complex128> rhs = wide_dual_qhahn_sequence(y, d);
    Real128 diff = 0, scale = 0;
    for (int n = 0; n < p.N; ++n) {
      diff = std::max(diff, Real128(abs(lhs[n] - rhs[n])));
      scale = std::max(scale, Real128(abs(lhs[n])));
    }
    worst = std::max(worst, static_cast<double>(diff / scale));
  }
  return worst;
}

double spectral_separation(const QHahnParams& p) {
  const std::vector<Complex> s = spectrum_closed_form_q(p);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double scale = 1.0 + std::max(std::abs(s[i]), std::abs(s[j]));
      best = std::min(best, std::abs(s[i] - s[j]) / scale);
    }
  }
  return best;
}

QHahnParams random_root_of_unity(Rng& rng, int N, int S, bool b_zero) {
  for (;;) {
    const double mag = rng.uniform() < 0.5 ? rng.uniform(0.6, 0.85) : rng.uniform(1.2, 1.6);
    const Complex a = std::polar(mag, rng.uniform(0.0, 2.0 * pi));
    const Complex b = b_zero ? Complex(0.0) : std::polar(rng.uniform(0.0, 0.5), rng.uniform(0.0, 2.0 * pi));
    const QHahnParams p = QHahnParams::root_of_unity(N, S, a, b);
    if (p.is_valid() && spectral_separation(p) >= kMinSeparation) return p;
  }
}

QHahnParams random_general(Rng& rng, Complex q, int N) {
  for (;;) {
    const Complex a = std::polar(rng.uniform(0.7, 1.4), rng.uniform(0.3, 1.2));
    const Complex b = std::polar(rng.uniform(0.05, 0.5), rng.uniform(0.0, 2.0 * pi));
    const QHahnParams p = QHahnParams::general(q, N, a, b);
    if (p.is_valid() && spectral_separation(p) >= kMinSeparation) return p;
  }
}

}  // namespace qes::q_hahn
