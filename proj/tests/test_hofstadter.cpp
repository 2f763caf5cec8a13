#include <doctest.h>

#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "qes/eigensolver.hpp"
#include "qes/hofstadter.hpp"
#include "qes/q_hahn.hpp"

using qes::Complex;
using namespace qes::hofstadter;
namespace eig = qes::eig;

namespace {

std::vector<FluxSpec> all_fluxes(int N_max) {
  std::vector<FluxSpec> out;
  for (int N = 1; N <= N_max; N += 2) {
    for (int S = 1; S <= std::max(1, N - 1); ++S) {
      if (FluxSpec{N, S}.is_valid()) out.push_back({N, S});
    }
  }
  return out;
}

std::vector<Complex> as_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("flux validity") {
  CHECK(FluxSpec{1, 1}.is_valid());
  CHECK(FluxSpec{9, 2}.is_valid());
  CHECK_FALSE(FluxSpec{4, 1}.is_valid());
  CHECK_FALSE(FluxSpec{9, 3}.is_valid());
  CHECK_FALSE(FluxSpec{5, 0}.is_valid());
  CHECK_THROWS_AS(build_H({6, 1}), qes::Error);
  CHECK_THROWS_AS(build_M_hofstadter({9, 6}), qes::Error);
}

TEST_CASE("H entries") {
  const auto H = build_H({3, 1});
  CHECK(std::abs(H(0, 1) + std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(H(1, 2) - std::sqrt(3.0)) < 1e-15);
  for (const FluxSpec& f : all_fluxes(21)) {
    const auto h = build_H(f);
    Complex trace = 0.0;
    for (int i = 0; i < f.N; ++i) {
      trace += h(i, i);
      for (int j = 0; j < f.N; ++j) {
        CHECK(h(i, j) == h(j, i));
        CHECK(h(i, j).imag() == 0.0);
      }
    }
    CHECK(trace == Complex(0.0));
  }
}

TEST_CASE("M entries and closure") {
  const FluxSpec f{7, 3};
  const Complex q = f.q();
  const auto M = build_M_hofstadter(f);
  CHECK(std::abs(1.0 - std::pow(q, 0)) == 0.0);
  CHECK(std::abs(1.0 - std::pow(q, f.N)) < 1e-14);
  for (int n = 0; n + 1 < f.N; ++n) {
    CHECK(std::abs(M(n, n + 1) - (1.0 - std::pow(q, n + 1))) < 1e-14);
    CHECK(M(n + 1, n) == M(n, n + 1));
    // Im(2(1 - q^{n+1})) is the corresponding entry of H.
    CHECK(std::abs(2.0 * M(n, n + 1).imag() - build_H(f)(n, n + 1).real()) < 1e-14);
  }
}

TEST_CASE("M is the q-Hahn matrix at a = i q^{1/2}, b = 0 after rescaling by powers of a") {
  for (const FluxSpec& f : all_fluxes(15)) {
    if (f.N < 2) continue;
    const auto base = qes::q_hahn::QHahnParams::root_of_unity(f.N, f.S, 1.0, 0.0);
    const auto p = qes::q_hahn::QHahnParams::root_of_unity(f.N, f.S, Complex(0.0, 1.0) * base.sqrt_q(), 0.0);
    const Eigen::MatrixXcd Mq = qes::q_hahn::build_q_matrix_root_of_unity(p).to_dense();
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(f.N, f.N);
    for (int n = 0; n < f.N; ++n) D(n, n) = std::pow(p.a, n);
    const Eigen::MatrixXcd rescaled = D.inverse() * Mq * D;
    CHECK((rescaled - build_M_hofstadter(f).to_dense()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("H = (M - M*)/i for every flux up to N = 63") {
  double worst = 0.0;
  for (const FluxSpec& f : all_fluxes(kMaxFluxDenominator)) worst = std::max(worst, verify_H_identity(f));
  CHECK(worst <= 1e-13);
  CHECK(verify_H_identity({3, 1}) <= 1e-13);
  CHECK(verify_H_identity({9, 2}) <= 1e-13);
}

TEST_CASE("spectrum of M is 2 sin(2 pi k/N)") {
  const auto small = m_spectrum({3, 1});
  CHECK(oracle::multiset_distance(small, {0.0, std::sqrt(3.0), -std::sqrt(3.0)}) < 1e-12);
  double worst = 0.0;
  for (const FluxSpec& f : all_fluxes(kMaxFluxDenominator)) {
    worst = std::max(worst, oracle::multiset_distance(m_spectrum(f), as_complex(m_spectrum_closed_form(f))));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("spectrum of H: real, traceless, bounded, symmetric under S -> N - S") {
  const auto h3 = eig::eigenvalues(build_H({3, 1}), eig::SolverPath::ComplexQR);
  const double r6 = std::sqrt(6.0);
  CHECK(oracle::multiset_distance(h3, {-r6, 0.0, r6}) < 1e-12);

  for (const FluxSpec& f : all_fluxes(kMaxFluxDenominator)) {
    const auto qr = eig::eigenvalues(build_H(f), eig::SolverPath::ComplexQR);
    double max_imag = 0.0;
    Complex sum = 0.0;
    for (Complex e : qr) {
      max_imag = std::max(max_imag, std::abs(e.imag()));
      sum += e;
      CHECK(std::abs(e.real()) <= 4.0 + 1e-12);
    }
    CHECK(max_imag <= 1e-12);
    CHECK(std::abs(sum) <= 1e-10 * f.N);
    const auto bis = eig::eigenvalues(build_H(f), eig::SolverPath::SymmetricBisection);
    CHECK(oracle::multiset_distance(qr, bis) <= 1e-10);
    if (f.N > 1) {
      const auto mirror = eig::eigenvalues(build_H({f.N, f.N - f.S}), eig::SolverPath::SymmetricBisection);
      CHECK(oracle::multiset_distance(bis, mirror) <= 1e-10);
    }
  }
}

TEST_CASE("butterfly sweep to N = 3") {
  const auto sweep = butterfly_sweep(3);
  CHECK(sweep.failures.empty());
  REQUIRE(sweep.points.size() == 7);
  // Flux 2S/N: 2/3 and 4/3 for N = 3, then 2 for N = 1.
  CHECK(sweep.points.back().N == 1);
  CHECK(sweep.points.back().eigenvalue == 0.0);
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    const auto& a = sweep.points[i - 1];
    const auto& b = sweep.points[i];
    CHECK((a.flux_value() < b.flux_value() || (a.flux_value() == b.flux_value() && a.eigenvalue <= b.eigenvalue)));
  }
  std::ostringstream csv;
  write_butterfly_csv(sweep.points, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "flux_numerator,flux_denominator,flux_value,eigenvalue");
  std::getline(lines, line);
  const std::string prefix = "2,3,0.66666666666666663,";
  REQUIRE(line.rfind(prefix, 0) == 0);
  CHECK(std::abs(std::stod(line.substr(prefix.size())) + std::sqrt(6.0)) < 1e-14);
  int rows = 1;
  std::string last;
  while (std::getline(lines, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 7);
  CHECK(last == "2,1,2,0");
  CHECK(csv.str().find('\r') == std::string::npos);
}

TEST_CASE("full butterfly sweep stays inside the spectral bound") {
  const auto sweep = butterfly_sweep(kMaxFluxDenominator);
  CHECK(sweep.failures.empty());
  std::size_t expected = 0;
  for (const FluxSpec& f : all_fluxes(kMaxFluxDenominator)) expected += f.N;
  CHECK(sweep.points.size() == expected);
  for (const auto& p : sweep.points) CHECK(std::abs(p.eigenvalue) <= 4.0);
  CHECK_THROWS_AS(butterfly_sweep(65), qes::Error);
  CHECK_THROWS_AS(butterfly_sweep(0), qes::Error);
}
