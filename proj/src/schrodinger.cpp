#include "qes/schrodinger.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

namespace qes::schrodinger {

namespace {

constexpr double kFdStep = 1e-3;
constexpr double kInnerCutoff = 1e-6;   // eta: quadrature starts here
constexpr double kTailTolerance = 1e-12;
constexpr double kMaxCutoff = 200.0;

template <class R>
R log_sinh(R t) {
  using std::exp, std::log, std::log1p, std::sinh;
  return t > 20 ? t - log(R(2)) + log1p(-exp(-2 * t)) : log(sinh(t));
}
template <class R>
R log_cosh(R t) {
  using std::exp, std::log, std::log1p;
  return t + log1p(exp(-2 * t)) - log(R(2));
}

template <class R>
R binomial(R y, int j) {
  R r = 1;
  for (int i = 0; i < j; ++i) r *= (y - i) / (i + 1);
  return r;
}

void check_index(int m, const HahnParams& p) {
  if (m > p.N) fail(ErrorKind::InvalidParameter, "index m=" + std::to_string(m) + " exceeds N");
}

// psi_m with c_m = 1 in the working type R; callers check m and y.
template <class R>
R eigenfunction_in(int m, R y, const HahnParams& p) {
  using std::exp, std::log, std::abs, std::pow;
  const int k = p.N - m;
  const R alpha = -R(p.delta) - p.N - 1;
  const R beta = -R(p.gamma) - p.N - 1;
  // P_k(x) = x^k sum_s C(k+alpha, k-s) C(k+beta, s) u^s v^{k-s} with
  // x = -cosh y, u = (x-1)/(2x), v = (x+1)/(2x); u and v stay in [0, 1].
  const R sech = 2 * exp(-y) / (1 + exp(-2 * y));
  const R u = R(0.5) + sech / 2;
  const R v = R(0.5) - sech / 2;
  R scaled = 0;
  for (int s = 0; s <= k; ++s) scaled += binomial(k + alpha, k - s) * binomial(k + beta, s) * pow(u, s) * pow(v, k - s);
  if (scaled == 0) return 0;
  const R log_numerator = k * log_cosh(y) + log(abs(scaled));
  const R sign_numerator = R(k % 2 == 0 ? 1 : -1) * (scaled > 0 ? 1 : -1);

  const R h = y / 2;
  const R log_denominator = log_sinh(y) / 2 + R(p.gamma) * log_sinh(h) + R(p.delta) * log_cosh(h) +
                            p.N * (log_cosh(h) - log_sinh(h)) + p.N * (log(R(2)) + 2 * log_sinh(h));
  const R sign_denominator = p.N % 2 == 0 ? 1 : -1;  // (1 - cosh y)^N
  return sign_numerator * sign_denominator * exp(log_numerator - log_denominator);
}

template <class R>
R potential_in(R y, const HahnParams& p) {
  const R g = p.gamma, d = p.delta, N = p.N;
  const R a = (g - d) * (2 * N + g + d + 2);
  const R b = (N + g) * (N + g) + (N + d) * (N + d) + 2 * (2 * N + g + d) + R(1.5);
  // cosh/sinh^2 = coth/sinh; both factors stay finite for large |y|.
  const R inv = 1 / std::sinh(y);
  const R coth = 1 / std::tanh(y);
  const R s = 1 + g + d;
  return (a * coth * inv + b * inv * inv) / 2 + s * s / 4;
}

// Gauss-Kronrod on u = log y over [log eta, log Y], plus the leading-order
// contribution of [0, eta] where psi_{m1} psi_{m2} ~ y^{2s}.
double integrate_product(const HahnParams& p, int m1, int m2, double Y) {
  auto g = [&](double u) {
    const double y = std::exp(u);
    return eigenfunction_unnormalized(m1, y, p) * eigenfunction_unnormalized(m2, y, p) * y;
  };
  double error = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, std::log(kInnerCutoff), std::log(Y), 20, 1e-13, &error);
  if (!std::isfinite(body) || error > 1e-10 * std::max(std::abs(body), 1e-300) + 1e-300) {
    // Cancellation is expected for orthogonal pairs; judge the error
    // against the magnitude of the integrand instead.
    double l1 = 0.0;
    const double abs_body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double u) { return std::abs(g(u)); }, std::log(kInnerCutoff), std::log(Y), 20, 1e-13, &l1);
    if (!std::isfinite(body) || error > 1e-10 * abs_body) {
      fail(ErrorKind::QuadratureFailure, "quadrature error estimate " + std::to_string(error) + " too large");
    }
  }
  const double two_s_plus_one = -2.0 * (p.gamma + p.N);
  const double edge = eigenfunction_unnormalized(m1, kInnerCutoff, p) *
                      eigenfunction_unnormalized(m2, kInnerCutoff, p) * kInnerCutoff / two_s_plus_one;
  return body + edge;
}

// Smallest cutoff from 20, 40, ..., 200 at which the tail of |psi_m|^2,
// bounded by psi_m(Y)^2 / (2 kappa_m), falls below 1e-12 of the norm.
double cutoff_for(int m, const HahnParams& p) {
  const double kappa = decay_rate(m, p);
  for (double Y = 20.0;; Y = std::min(2.0 * Y, kMaxCutoff)) {
    const double edge = eigenfunction_unnormalized(m, Y, p);
    const double tail = edge * edge / (2.0 * kappa);
    if (tail <= kTailTolerance * integrate_product(p, m, m, Y)) return Y;
    if (Y >= kMaxCutoff) break;
  }
  fail(ErrorKind::QuadratureFailure,
       "tail of psi_" + std::to_string(m) + " not below 1e-12 by y = 200");
}

void require_integrable(const HahnParams& p, int m) {
  if (!integrability_predicates(p, m).full_line) {
    fail(ErrorKind::InvalidParameter,
         "psi_" + std::to_string(m) + " is not square integrable on (0, inf) for these parameters");
  }
}

}  // namespace

const char* to_string(Domain d) { return d == Domain::FullLine ? "full_line" : "half_line"; }

void Grid::validate() const {
  if (!(y_min > 0.0)) fail(ErrorKind::InvalidParameter, "grid must start at y_min > 0 (psi is singular at 0)");
  if (!(y_max > y_min)) fail(ErrorKind::InvalidParameter, "grid needs y_max > y_min");
  if (n_points < 64) fail(ErrorKind::InvalidParameter, "grid needs at least 64 points");
}

std::vector<double> Grid::points() const {
  validate();
  std::vector<double> ys(n_points);
  for (int i = 0; i < n_points; ++i) ys[i] = y_min + (y_max - y_min) * i / (n_points - 1);
  return ys;
}

void SchrodingerProblem::validate() const {
  params.validate();
  grid.validate();
}

double potential(double y, const HahnParams& p) {
  if (y == 0.0) fail(ErrorKind::DegenerateInput, "potential is singular at y = 0");
  return double(potential_in<double>(y, p));
}

double potential_limit(const HahnParams& p) {
  const double s = 1.0 + p.gamma + p.delta;
  return s * s / 4.0;
}

double energy(int m, const HahnParams& p) { return -p.lambda(m); }

double decay_rate(int m, const HahnParams& p) { return m + (1.0 + p.gamma + p.delta) / 2.0; }

double eigenfunction_unnormalized(int m, double y, const HahnParams& p) {
  p.validate();
  check_index(m, p);
  if (!(y > 0.0)) fail(ErrorKind::DegenerateInput, "eigenfunctions are evaluated for y > 0 only");
  return double(eigenfunction_in<double>(m, y, p));
}

Integrability integrability_predicates(const HahnParams& p, int m) {
  Integrability r;
  r.full_line = p.gamma + p.N < 0.0 && 2.0 * m + p.gamma + p.delta + 1.0 > 0.0;
  r.half_line = p.gamma + p.N < -0.5 && p.gamma + p.delta + 1.0 > 0.0;
  return r;
}

double inner_product(const HahnParams& p, int m1, int m2) {
  p.validate();
  check_index(m1, p);
  check_index(m2, p);
  require_integrable(p, m1);
  require_integrable(p, m2);
  const double Y = std::max(cutoff_for(m1, p), cutoff_for(m2, p));
  return integrate_product(p, m1, m2, Y);
}

double normalization_constant(int m, const HahnParams& p) {
  if (!integrability_predicates(p, m).full_line) return 1.0;
  return 1.0 / std::sqrt(inner_product(p, m, m));
}

double eigenfunction(int m, double y, const HahnParams& p) {
  return normalization_constant(m, p) * eigenfunction_unnormalized(m, y, p);
}

double fd_residual(int m, double y, const HahnParams& p) {
  p.validate();
  check_index(m, p);
  if (y <= 2.0 * kFdStep) fail(ErrorKind::InvalidParameter, "stencil would cross y = 0");
  // The stencil divides rounding error by h^2, so psi is sampled in
  // extended precision; near a node of psi every term of the residual is small.
  using R = long double;
  const R x = y;
  auto f = [&](R t) { return eigenfunction_in<R>(m, t, p); };
  auto second = [&](R h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
  };
  const R coarse = second(kFdStep);
  const R fine = second(R(kFdStep) / 2);
  const R d2 = fine + (fine - coarse) / 15;
  const R psi = f(x);
  const R v = potential_in<R>(x, p);
  const R eps = energy(m, p);
  const R residual = -d2 + (v - eps) * psi;
  const R scale = std::abs(d2) + std::abs(v * psi) + std::abs(eps * psi);
  return scale > 0 ? double(std::abs(residual) / scale) : 0.0;
}

double max_fd_residual(int m, const SchrodingerProblem& problem) {
  problem.validate();
  const std::vector<double> ys = problem.grid.points();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) worst = std::max(worst, fd_residual(m, ys[i], problem.params));
  return worst;
}

double orthogonality_check(const HahnParams& p, int m1, int m2) {
  const double n1 = inner_product(p, m1, m1);
  const double n2 = inner_product(p, m2, m2);
  return std::abs(inner_product(p, m1, m2)) / std::sqrt(n1 * n2);
}

bool spectrum_ordering_check(const HahnParams& p) {
  p.validate();
  if (!(p.gamma + p.delta + 1.0 > 0.0)) {
    fail(ErrorKind::InvalidParameter, "level ordering needs gamma + delta + 1 > 0");
  }
  if (energy(0, p) != 0.0) return false;
  for (int m = 0; m < p.N; ++m) {
    if (!(energy(m + 1, p) < energy(m, p))) return false;
  }
  return true;
}

std::vector<Sample> sample(const SchrodingerProblem& problem) {
  problem.validate();
  const HahnParams& p = problem.params;
  std::vector<double> c(p.N + 1);
  for (int m = 0; m <= p.N; ++m) c[m] = normalization_constant(m, p);
  std::vector<Sample> out;
  for (double y : problem.grid.points()) {
    Sample s{y, potential(y, p), {}};
    for (int m = 0; m <= p.N; ++m) s.psi.push_back(c[m] * eigenfunction_unnormalized(m, y, p));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qes::schrodinger
