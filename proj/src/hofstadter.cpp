#include "qes/hofstadter.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>

#include "qes/eigensolver.hpp"

namespace qes::hofstadter {

namespace {

using std::numbers::pi;

// 2 pi S k / N reduced mod 2 pi, so large k do not lose the phase.
double phase(const FluxSpec& f, int k) {
  const long long e = (static_cast<long long>(f.S) * k) % f.N;
  return 2.0 * pi * double(e) / f.N;
}

std::string format_17g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

bool FluxSpec::is_valid() const {
  return N >= 1 && N % 2 == 1 && S >= 1 && std::gcd(S, N) == 1;
}

void FluxSpec::validate() const {
  if (N < 1 || N % 2 == 0) {
    fail(ErrorKind::InvalidParameter, "flux denominator N=" + std::to_string(N) + " must be odd and positive");
  }
  if (S < 1 || std::gcd(S, N) != 1) {
    fail(ErrorKind::InvalidParameter,
         "flux numerator S=" + std::to_string(S) + " must be positive and coprime to N=" + std::to_string(N));
  }
}

Complex FluxSpec::q() const { return std::polar(1.0, 2.0 * pi * double(S % N) / N); }

TridiagonalOperator build_H(const FluxSpec& f) {
  f.validate();
  std::vector<Complex> off(f.N - 1);
  for (int n = 0; n + 1 < f.N; ++n) off[n] = -2.0 * std::sin(phase(f, n + 1));
  return {off, std::vector<Complex>(f.N, 0.0), off};
}

TridiagonalOperator build_M_hofstadter(const FluxSpec& f) {
  f.validate();
  std::vector<Complex> off(f.N - 1);
  for (int n = 0; n + 1 < f.N; ++n) off[n] = 1.0 - std::polar(1.0, phase(f, n + 1));
  return {off, std::vector<Complex>(f.N, 0.0), off};
}

eig::ExtendedTridiagonal build_M_extended(const FluxSpec& f) {
  f.validate();
  using eig::Complex128;
  using eig::Real128;
  const Real128 two_pi = 2 * boost::math::constants::pi<Real128>();
  eig::ExtendedTridiagonal t;
  t.main.assign(f.N, Complex128(0));
  for (int n = 0; n + 1 < f.N; ++n) {
    const Real128 angle = two_pi * ((static_cast<long long>(f.S) * (n + 1)) % f.N) / f.N;
    t.sub.push_back(Complex128(1 - cos(angle), -sin(angle)));
  }
  t.super = t.sub;
  return t;
}

double verify_H_identity(const FluxSpec& f) {
  const Eigen::MatrixXcd H = build_H(f).to_dense();
  const Eigen::MatrixXcd M = build_M_hofstadter(f).to_dense();
  const Eigen::MatrixXcd rebuilt = (M - M.adjoint()) / Complex(0.0, 1.0);
  return (H - rebuilt).cwiseAbs().maxCoeff();
}

std::vector<double> m_spectrum_closed_form(const FluxSpec& f) {
  f.validate();
  std::vector<double> s;
  for (int k = 0; k < f.N; ++k) s.push_back(2.0 * std::sin(2.0 * pi * k / f.N));
  return s;
}

std::vector<Complex> m_spectrum(const FluxSpec& f) { return eig::eigenvalues_extended(build_M_extended(f)); }

ButterflySweep butterfly_sweep(int N_max) {
  if (N_max < 1 || N_max > kMaxFluxDenominator) {
    fail(ErrorKind::InvalidParameter,
         "sweep limit must lie in 1.." + std::to_string(kMaxFluxDenominator));
  }
  ButterflySweep out;
  for (int N = 1; N <= N_max; N += 2) {
    for (int S = 1; S <= std::max(1, N - 1); ++S) {
      const FluxSpec f{N, S};
      if (!f.is_valid()) continue;
      try {
        for (Complex e : eig::eigenvalues(build_H(f), eig::SolverPath::SymmetricBisection)) {
          out.points.push_back({S, N, e.real()});
        }
      } catch (const Error& err) {
        out.failures.push_back({N, S, err.what()});
      }
    }
  }
  // Exact comparison of S/N as rationals, then by eigenvalue.
  std::sort(out.points.begin(), out.points.end(), [](const ButterflyPoint& x, const ButterflyPoint& y) {
    const long long lhs = static_cast<long long>(x.S) * y.N, rhs = static_cast<long long>(y.S) * x.N;
    if (lhs != rhs) return lhs < rhs;
    return x.eigenvalue < y.eigenvalue;
  });
  return out;
}

void write_butterfly_csv(const std::vector<ButterflyPoint>& points, std::ostream& out) {
  out << kButterflyHeader << '\n';
  for (const ButterflyPoint& p : points) {
    out << p.flux_numerator() << ',' << p.flux_denominator() << ',' << format_17g(p.flux_value()) << ','
        << format_17g(p.eigenvalue) << '\n';
  }
}

}  // namespace qes::hofstadter
