#include "qes/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "qes/hofstadter.hpp"
#include "qes/schrodinger.hpp"

namespace qes::cli {

namespace {

using dual_hahn::HahnParams;
using q_hahn::QHahnParams;

// Each criterion draws from its own stream, so running one criterion alone
// reproduces the draws of a full run.
Rng stream(const AcceptanceOptions& opt, std::uint64_t salt) { return Rng(opt.seed ^ (salt * 0x9E3779B97F4A7C15ull)); }

struct Worst {
  std::string name;
  double tolerance;
  double value = 0.0;

  void add(double v) { value = std::isnan(v) || std::isnan(value) ? NAN : std::max(value, v); }
  Measurement done() const { return {name, value, tolerance, std::isfinite(value) && value <= tolerance}; }
};

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (Complex z : v) m = std::max(m, std::abs(z));
  return m;
}

double relative_spectrum_distance(const std::vector<Complex>& closed, const std::vector<Complex>& oracle) {
  return eig::compare_spectra(closed, oracle, 0.0).max_distance() / (1.0 + max_abs(closed));
}

std::vector<int> coprime_to(int N) {
  std::vector<int> s;
  for (int k = 1; k < N; ++k) {
    if (std::gcd(k, N) == 1) s.push_back(k);
  }
  return s;
}

// Criteria 1-3 share one sweep: N = 1..32 with 100 draws each.
std::vector<HahnParams> hahn_sweep(const AcceptanceOptions& opt) {
  Rng rng = stream(opt, 1);
  std::vector<HahnParams> out;
  const int draws = opt.quick ? 10 : 100;
  for (int N = 1; N <= 32; ++N) {
    for (int t = 0; t < draws; ++t) out.push_back(dual_hahn::random_params(rng, N));
  }
  return out;
}

const std::vector<Complex> kGeneralQ{0.3, 0.85, 1.3, Complex(0.5, 0.4)};

CriterionResult dual_hahn_spectrum(const AcceptanceOptions& opt) {
  CriterionResult r{1, "dual Hahn spectrum m(m+gamma+delta+1) against the oracle", {}, {}, 0.0, {}};
  Worst w{"pairing / (1 + max|lambda|)", opt.tolerances["eigen"]};
  for (const HahnParams& p : hahn_sweep(opt)) {
    const auto closed = dual_hahn::eigenvalues_closed_form(p);
    w.add(relative_spectrum_distance({closed.begin(), closed.end()},
                                     eig::eigenvalues(dual_hahn::build_recurrence_matrix(p))));
  }
  r.measurements.push_back(w.done());
  return r;
}

CriterionResult ode_residuals(const AcceptanceOptions& opt) {
  CriterionResult r{2, "coefficient-level residual of the differential equation for every f_m", {}, {}, 0.0, {}};
  Worst w{"ode residual", opt.tolerances["ode"]};
  for (const HahnParams& p : hahn_sweep(opt)) {
    for (int m = 0; m <= p.N; ++m) w.add(dual_hahn::ode_residual(m, p));
  }
  r.measurements.push_back(w.done());
  return r;
}

CriterionResult jacobi_reduction(const AcceptanceOptions& opt) {
  CriterionResult r{3, "generating function against its Jacobi polynomial form", {}, {}, 0.0, {}};
  Worst w{"relative difference", opt.tolerances["jacobi"]};
  Rng rng = stream(opt, 3);
  for (const HahnParams& p : hahn_sweep(opt)) {
    for (int m = 0; m <= p.N; ++m) {
      for (int s = 0; s < 20; ++s) {
        Complex z;
        do {
          z = std::polar(rng.uniform(0, 2), rng.uniform(0, 2 * std::numbers::pi));
        } while (std::abs(z - 1.0) < 1e-3);
        const auto [f, j] = dual_hahn::jacobi_reduction_check(m, p, z);
        w.add(std::abs(f - j) / std::max(std::abs(f), 1e-300));
      }
    }
  }
  r.measurements.push_back(w.done());
  r.note = "20 complex z per (params, m), |z| < 2";
  return r;
}

CriterionResult sl2_decomposition(const AcceptanceOptions& opt) {
  CriterionResult r{4, "sl2 assembly equals the differential operator matrix, N <= 16", {}, {}, 0.0, {}};
  Worst w{"max entry gap / max entry", opt.tolerances["sl2"]};
  Rng rng = stream(opt, 4);
  const int draws = opt.quick ? 3 : 20;
  for (int N = 1; N <= 16; ++N) {
    for (int t = 0; t < draws; ++t) w.add(dual_hahn::sl2_decomposition_check(dual_hahn::random_params(rng, N)));
  }
  r.measurements.push_back(w.done());
  return r;
}

CriterionResult root_of_unity_spectrum(const AcceptanceOptions& opt) {
  CriterionResult r{5, "root-of-unity spectrum and b = 0 zero sets", {}, {}, 0.0, {}};
  Worst spec{"spectrum pairing / (1 + max|2x|)", opt.tolerances["eigen"]};
  Worst zeros{"zero-set pairing", opt.tolerances["zeros"]};
  Rng rng = stream(opt, 5);
  const int draws = opt.quick ? 3 : 20;
  for (int N : {3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      for (int t = 0; t < draws; ++t) {
        const QHahnParams p = q_hahn::random_root_of_unity(rng, N, S);
        spec.add(relative_spectrum_distance(q_hahn::spectrum_closed_form_q(p), eig::eigenvalues(q_hahn::build_q_matrix(p))));
        const QHahnParams z = q_hahn::random_root_of_unity(rng, N, S, true);
        for (int m = 0; m < N; ++m) {
          const auto roots = numerics::polynomial_roots(q_hahn::generating_function_q(m, z));
          zeros.add(eig::compare_spectra(q_hahn::zeros_b0(m, z), roots, 0.0).max_distance());
        }
      }
    }
  }
  r.measurements = {spec.done(), zeros.done()};
  return r;
}

CriterionResult uq_decomposition(const AcceptanceOptions& opt) {
  CriterionResult r{6, "U_q(sl2) assembly equals the root-of-unity operator", {}, {}, 0.0, {}};
  Worst w{"max entry gap / max entry", opt.tolerances["uq"]};
  Rng rng = stream(opt, 6);
  const int draws = opt.quick ? 3 : 20;
  int fallbacks = 0, total = 0;
  for (int N : {3, 5, 7, 9}) {
    for (int S : coprime_to(N)) {
      for (int t = 0; t < draws; ++t) {
        const auto c = q_hahn::uq_sl2_decomposition_check(q_hahn::random_root_of_unity(rng, N, S));
        w.add(c.deviation);
        fallbacks += c.branch != "principal";
        ++total;
      }
    }
  }
  r.measurements.push_back(w.done());
  r.note = std::to_string(fallbacks) + " of " + std::to_string(total) + " cases needed the opposite q^{1/2} branch";
  return r;
}

CriterionResult general_q(const AcceptanceOptions& opt) {
  CriterionResult r{7, "general-q spectrum, little q-Jacobi form, dual q-Hahn correspondence", {}, {}, 0.0, {}};
  Worst spec{"spectrum pairing / (1 + max|2x|)", opt.tolerances["general"]};
  Worst jacobi{"little q-Jacobi deviation", opt.tolerances["general"]};
  Worst equiv{"dual q-Hahn equivalence", opt.tolerances["equivalence"]};
  Rng rng = stream(opt, 7);
  const int draws = opt.quick ? 1 : 4;
  for (Complex q : kGeneralQ) {
    for (int N = 2; N <= 16; ++N) {
      for (int t = 0; t < draws; ++t) {
        const QHahnParams p = q_hahn::random_general(rng, q, N);
        spec.add(relative_spectrum_distance(q_hahn::spectrum_closed_form_q(p), eig::eigenvalues(q_hahn::build_q_matrix(p))));
        for (int m = 0; m < N; ++m) jacobi.add(q_hahn::little_q_jacobi_deviation(m, p));
        if (N <= 10) equiv.add(q_hahn::equivalence_check(p));
      }
    }
  }
  r.measurements = {spec.done(), jacobi.done(), equiv.done()};
  r.note =
      "q in {0.3, 0.85, 1.3, 0.5+0.4i}, N = 2..16; the equivalence runs to N = 10, beyond which the q = 0.3 "
      "series loses all digits in double precision";
  return r;
}

CriterionResult hofstadter_checks(const AcceptanceOptions& opt) {
  CriterionResult r{8, "Hofstadter identity, spectrum of M, real spectrum of H, butterfly rows", {}, {}, 0.0, {}};
  Worst identity{"|H - (M - M*)/i|", opt.tolerances["identity"]};
  Worst sines{"M spectrum vs 2 sin(2 pi k/N)", opt.tolerances["sine_spectrum"]};
  Worst real{"max |Im| of H spectrum", opt.tolerances["real"]};
  for (int N = 1; N <= hofstadter::kMaxFluxDenominator; N += 2) {
    for (int S = 1; S <= std::max(1, N - 1); ++S) {
      const hofstadter::FluxSpec f{N, S};
      if (!f.is_valid()) continue;
      identity.add(hofstadter::verify_H_identity(f));
      if (!opt.quick || N <= 31) {
        const auto closed = hofstadter::m_spectrum_closed_form(f);
        const std::vector<Complex> expected(closed.begin(), closed.end());
        sines.add(eig::compare_spectra(expected, hofstadter::m_spectrum(f), 0.0).max_distance());
      }
      double imag = 0.0;
      for (Complex e : eig::eigenvalues(hofstadter::build_H(f), eig::SolverPath::ComplexQR)) {
        imag = std::max(imag, std::abs(e.imag()));
      }
      real.add(imag);
    }
  }
  const auto sweep = hofstadter::butterfly_sweep(3);
  const bool rows_ok = sweep.points.size() == 7 && sweep.failures.empty();
  r.measurements = {identity.done(), sines.done(), real.done(),
                    {"butterfly rows for N_max = 3 (7 expected)", double(sweep.points.size()), 7.0, rows_ok}};
  return r;
}

CriterionResult schrodinger_checks(const AcceptanceOptions& opt) {
  using namespace schrodinger;
  CriterionResult r{9, "Schrodinger residual, orthogonality, asymptote of V", {}, {}, 0.0, {}};
  Worst fd_half{"fd residual, half line (-4.2, 4, 3)", opt.tolerances["fd"]};
  Worst fd_full{"fd residual, full line (-3.4, 4, 3)", opt.tolerances["fd"]};
  Worst fd_extra{"fd residual, (-4.2, 1.5, 3)", opt.tolerances["fd"]};
  Worst orth{"orthogonality of integrable pairs", opt.tolerances["orthogonality"]};
  Worst asym{"|V(50) - limit| / (1 + |limit|)", opt.tolerances["asymptote"]};

  const HahnParams half{-4.2, 4.0, 3};  // gamma + N < -1/2: half-line predicate
  const HahnParams full{-3.4, 4.0, 3};  // -1/2 <= gamma + N < 0: full-line predicate only
  const HahnParams extra{-4.2, 1.5, 3};
  const Grid grid{0.05, 10.0, 256};
  for (int m = 0; m <= 3; ++m) {
    fd_half.add(max_fd_residual(m, {half, Domain::HalfLine, grid}));
    fd_full.add(max_fd_residual(m, {full, Domain::FullLine, grid}));
    fd_extra.add(max_fd_residual(m, {extra, Domain::HalfLine, grid}));
  }
  int pairs = 0;
  for (const HahnParams& p : {half, full, extra, HahnParams{-4.0, 4.0, 3}}) {
    for (int m1 = 0; m1 <= p.N; ++m1) {
      for (int m2 = m1 + 1; m2 <= p.N; ++m2) {
        if (!integrability_predicates(p, m1).full_line || !integrability_predicates(p, m2).full_line) continue;
        orth.add(orthogonality_check(p, m1, m2));
        ++pairs;
      }
    }
    const double limit = potential_limit(p);
    asym.add(std::abs(potential(50.0, p) - limit) / (1.0 + std::abs(limit)));
  }
  r.measurements = {fd_half.done(), fd_full.done(), fd_extra.done(), orth.done(), asym.done()};
  r.note = std::to_string(pairs) + " integrable pairs";
  return r;
}

CriterionResult level_ordering(const AcceptanceOptions& opt) {
  CriterionResult r{10, "strict ordering of the explicit levels eps_N < ... < eps_0 = 0", {}, {}, 0.0, {}};
  int checked = 0, ordered = 0;
  for (const HahnParams& p : hahn_sweep(opt)) {
    if (!(p.gamma + p.delta + 1.0 > 0.0)) continue;
    ++checked;
    ordered += schrodinger::spectrum_ordering_check(p);
  }
  for (const HahnParams& p : {HahnParams{-4.2, 4.0, 3}, HahnParams{-4.0, 4.0, 3}, HahnParams{-3.4, 4.0, 3}}) {
    ++checked;
    ordered += schrodinger::spectrum_ordering_check(p);
  }
  r.measurements = {{"parameter sets out of order", double(checked - ordered), 0.0, checked == ordered}};
  r.note = std::to_string(checked) +
           " parameter sets. NOT certified: that these are the lowest N+1 eigenvalues of the full operator "
           "(that needs an independent eigensolver for the differential operator)";
  return r;
}

}  // namespace

bool CriterionResult::passed() const {
  return error.empty() && !measurements.empty() &&
         std::all_of(measurements.begin(), measurements.end(), [](const Measurement& m) { return m.passed; });
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  using Runner = CriterionResult (*)(const AcceptanceOptions&);
  static constexpr Runner runners[kCriterionCount] = {dual_hahn_spectrum, ode_residuals,       jacobi_reduction,
                                                      sl2_decomposition,  root_of_unity_spectrum, uq_decomposition,
                                                      general_q,          hofstadter_checks,    schrodinger_checks,
                                                      level_ordering};
  if (id < 1 || id > kCriterionCount) fail(ErrorKind::InvalidParameter, "criterion ids are 1..10");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = runners[id - 1](opt);
  } catch (const Error& e) {
    r.id = id;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "criterion %2d  %s  ", r.id, r.passed() ? "PASS" : "FAIL");
  std::string line = head + r.title;
  if (!r.error.empty()) return line + "  [error: " + r.error + "]";
  for (const Measurement& m : r.measurements) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  [%s: %.3g <= %.3g%s]", m.name.c_str(), m.worst, m.tolerance,
                  m.passed ? "" : " FAILED");
    line += buf;
  }
  char t[32];
  std::snprintf(t, sizeof t, "  (%.1fs)", r.seconds);
  return line + t;
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json ms = nlohmann::json::array();
  for (const Measurement& m : r.measurements) {
    ms.push_back({{"name", m.name}, {"worst", m.worst}, {"tolerance", m.tolerance}, {"passed", m.passed}});
  }
  nlohmann::json j{{"id", r.id}, {"title", r.title}, {"passed", r.passed()}, {"measurements", ms}, {"seconds", r.seconds}};
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace qes::cli
