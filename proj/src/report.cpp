#include "qes/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qes/numerics.hpp"

namespace qes::cli {

namespace {

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (Complex z : v) m = std::max(m, std::abs(z));
  return m;
}

std::vector<Complex> widen(const std::vector<double>& v) { return {v.begin(), v.end()}; }

// Shifts the first diagonal entry by 1e-3 of the largest entry.
TridiagonalOperator maybe_perturbed(TridiagonalOperator t, bool inject) {
  if (inject) t.main()[0] += 1e-3 * (1.0 + t.max_abs_entry());
  return t;
}

// Proportionality of v to the inverse-iteration eigenvector of t at lam.
// When lam is not an eigenvalue of t the iteration cannot converge, which
// is a failed identity rather than a solver fault, so it reads as infinity.
double oracle_vector_deviation(const TridiagonalOperator& t, Complex lam, const std::vector<Complex>& v) {
  try {
    return numerics::proportionality_deviation(v, eig::eigenvector(t, lam));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SolverFailure) throw;
    return INFINITY;
  }
}

double relative_matrix_gap(const TridiagonalOperator& a, const TridiagonalOperator& b) {
  return max_abs_difference(a, b) / std::max(b.max_abs_entry(), 1e-300);
}

eig::SpectrumReport assemble(const std::vector<Complex>& closed, const TridiagonalOperator& oracle_matrix,
                             const TridiagonalOperator& eigen_matrix,
                             const std::vector<std::vector<Complex>>& vectors, double eigen_tol) {
  const double tol = eigen_tol * (1.0 + max_abs(closed));
  eig::SpectrumReport r = eig::compare_spectra(closed, eig::eigenvalues(oracle_matrix), tol);
  for (std::size_t m = 0; m < closed.size(); ++m) {
    r.max_residual = std::max(r.max_residual, eig::eigenpair_residual(eigen_matrix, closed[m], vectors[m]));
  }
  r.metadata["solver_path"] = eig::to_string(eig::select_path(oracle_matrix));
  r.metadata["tolerance_relative"] = eigen_tol;
  r.refresh_passed();
  return r;
}

// Hahn pieces shared by spectrum_report and verify.
eig::SpectrumReport hahn_spectrum(const HahnParams& p, const TridiagonalOperator& M, double eigen_tol) {
  const auto closed = widen(dual_hahn::eigenvalues_closed_form(p));
  std::vector<std::vector<Complex>> vectors;
  for (Complex lam : closed) vectors.push_back(dual_hahn::build_transposed_polynomials(p, lam));
  return assemble(closed, M, M.transposed(), vectors, eigen_tol);
}

std::vector<Complex> generating_coefficients(int m, const QHahnParams& p) {
  return q_hahn::generating_function_q(m, p).coefficients(0, p.N - 1);
}

eig::SpectrumReport q_spectrum(const QHahnParams& p, const TridiagonalOperator& M, double eigen_tol) {
  const auto closed = q_hahn::spectrum_closed_form_q(p);
  std::vector<std::vector<Complex>> vectors;
  for (int m = 0; m < p.N; ++m) vectors.push_back(generating_coefficients(m, p));
  return assemble(closed, M, M, vectors, eigen_tol);
}

Check spectrum_check(const eig::SpectrumReport& r, const Tolerances& tol) {
  const double scale = 1.0 + max_abs(r.closed_form);
  return make_check("spectrum", r.max_distance() / scale, tol["eigen"], "pairing distance / (1 + max |closed form|)");
}

}  // namespace

Tolerances::Tolerances()
    : values_{{"eigen", 1e-9},        {"ode", 1e-10},         {"jacobi", 1e-9},      {"sl2", 1e-10},
              {"zeros", 1e-8},        {"uq", 1e-9},           {"general", 1e-10},    {"equivalence", 1e-10},
              {"residual", 1e-10},    {"proportionality", 1e-9}, {"eigenvector", 1e-8}, {"identity", 1e-13},
              {"sine_spectrum", 1e-9}, {"real", 1e-12},       {"fd", 1e-6},          {"orthogonality", 1e-6},
              {"asymptote", 1e-8}} {}

double Tolerances::operator[](const std::string& name) const {
  for (const auto& [k, v] : values_) {
    if (k == name) return v;
  }
  fail(ErrorKind::InvalidParameter, "unknown tolerance '" + name + "'");
}

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    fail(ErrorKind::InvalidParameter, "tolerance '" + name + "' must be positive and finite");
  }
  for (auto& [k, v] : values_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  fail(ErrorKind::InvalidParameter, "unknown tolerance '" + name + "'");
}

void Tolerances::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(ErrorKind::InvalidParameter, "expected NAME=VALUE, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidParameter, "tolerance value '" + text + "' is not a number");
  }
  set(name, value);
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Hahn: return "hahn";
    case Family::QHahnRootOfUnity: return "qhahn-rou";
    case Family::QHahnGeneral: return "qhahn-general";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::Hahn, Family::QHahnRootOfUnity, Family::QHahnGeneral}) {
    if (name == to_string(f)) return f;
  }
  fail(ErrorKind::InvalidParameter, "unknown family '" + name + "' (hahn, qhahn-rou, qhahn-general)");
}

nlohmann::json to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::InvalidParameter, "complex values are [re, im] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json params_json(const HahnParams& p) {
  return {{"family", "hahn"}, {"gamma", p.gamma}, {"delta", p.delta}, {"N", p.N}};
}

nlohmann::json params_json(const QHahnParams& p) {
  nlohmann::json j{{"family", p.mode == q_hahn::QMode::RootOfUnity ? "qhahn-rou" : "qhahn-general"},
                   {"a", to_json(p.a)},
                   {"b", to_json(p.b)},
                   {"c", to_json(p.c)},
                   {"q", to_json(p.q)},
                   {"N", p.N}};
  if (p.mode == q_hahn::QMode::RootOfUnity) j["S"] = p.S;
  return j;
}

nlohmann::json to_json(const eig::SpectrumReport& r) {
  nlohmann::json closed = nlohmann::json::array(), oracle = nlohmann::json::array();
  for (Complex z : r.closed_form) closed.push_back(to_json(z));
  for (Complex z : r.oracle) oracle.push_back(to_json(z));
  return {{"closed_form", closed},         {"oracle", oracle},
          {"pairing_distances", r.pairing_distances}, {"max_distance", r.max_distance()},
          {"max_residual", r.max_residual}, {"tolerance", r.tolerance},
          {"passed", r.passed},             {"metadata", r.metadata}};
}

eig::SpectrumReport spectrum_report_from_json(const nlohmann::json& j) {
  eig::SpectrumReport r;
  try {
    for (const auto& z : j.at("closed_form")) r.closed_form.push_back(complex_from_json(z));
    for (const auto& z : j.at("oracle")) r.oracle.push_back(complex_from_json(z));
    r.pairing_distances = j.at("pairing_distances").get<std::vector<double>>();
    r.max_residual = j.at("max_residual").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.passed = j.at("passed").get<bool>();
    r.metadata = j.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("malformed spectrum report: ") + e.what());
  }
  if (r.closed_form.size() != r.oracle.size() || r.closed_form.size() != r.pairing_distances.size()) {
    fail(ErrorKind::LengthMismatch, "spectrum report arrays differ in length");
  }
  return r;
}

eig::SpectrumReport spectrum_report(const HahnParams& p, const Tolerances& tol) {
  p.validate();
  auto r = hahn_spectrum(p, dual_hahn::build_recurrence_matrix(p), tol["eigen"]);
  r.metadata["params"] = params_json(p);
  return r;
}

eig::SpectrumReport spectrum_report(const QHahnParams& p, const Tolerances& tol) {
  p.validate();
  auto r = q_spectrum(p, q_hahn::build_q_matrix(p), tol["eigen"]);
  r.metadata["params"] = params_json(p);
  return r;
}

Check make_check(std::string name, double value, double tolerance, std::string note) {
  return {std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance, std::move(note)};
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json j{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}};
    if (!c.note.empty()) j["note"] = c.note;
    list.push_back(j);
  }
  return {{"family", family}, {"params", params}, {"checks", list}, {"passed", passed()}};
}

VerifyReport verify(const HahnParams& p, const Tolerances& tol, const VerifyOptions& opt) {
  p.validate();
  VerifyReport rep{"hahn", params_json(p), {}};
  const TridiagonalOperator M = maybe_perturbed(dual_hahn::build_recurrence_matrix(p), opt.inject_error);
  const TridiagonalOperator Mt = M.transposed();

  const auto spectrum = hahn_spectrum(p, M, tol["eigen"]);
  rep.checks.push_back(spectrum_check(spectrum, tol));
  rep.checks.push_back(make_check("eigenvector_residual", spectrum.max_residual, tol["eigen"],
                                  "|M^T v - lambda v| / (|M^T| |v|), v = transposed polynomials"));

  double ode = 0.0;
  for (int m = 0; m <= p.N; ++m) ode = std::max(ode, dual_hahn::ode_residual(m, p));
  rep.checks.push_back(make_check("ode_residual", ode, tol["ode"]));

  const auto D = TridiagonalOperator::from_dense(dual_hahn::differential_operator_matrix(p));
  rep.checks.push_back(make_check("operator_matrix", relative_matrix_gap(D, Mt), tol["ode"],
                                  "differential operator matrix against M^T"));
  rep.checks.push_back(make_check("general_family",
                                  relative_matrix_gap(dual_hahn::build_general_family(dual_hahn::dual_hahn_family(p)), Mt),
                                  tol["ode"], "quadratic-coefficient family instance against M^T"));
  rep.checks.push_back(make_check("sl2_decomposition", dual_hahn::sl2_decomposition_check(p), tol["sl2"]));

  Rng rng(opt.seed);
  double jac = 0.0;
  for (int m = 0; m <= p.N; ++m) {
    for (int s = 0; s < 20; ++s) {
      const Complex z = std::polar(rng.uniform(0, 2), rng.uniform(0, 2 * std::numbers::pi));
      if (std::abs(z - 1.0) < 1e-3) continue;
      const auto [f, j] = dual_hahn::jacobi_reduction_check(m, p, z);
      jac = std::max(jac, std::abs(f - j) / std::max(std::abs(f), 1e-300));
    }
  }
  rep.checks.push_back(make_check("jacobi_reduction", jac, tol["jacobi"], "20 seeded complex z per m"));

  double prop = 0.0, oracle_vec = 0.0;
  for (int m = 0; m <= p.N; ++m) {
    const auto tp = dual_hahn::build_transposed_polynomials(p, p.lambda(m));
    prop = std::max(prop, numerics::proportionality_deviation(dual_hahn::generating_function(m, p).coefficients(0, p.N), tp));
    oracle_vec = std::max(oracle_vec, oracle_vector_deviation(Mt, p.lambda(m), tp));
  }
  rep.checks.push_back(make_check("generating_function", prop, tol["proportionality"],
                                  "coefficients of f_m against the transposed polynomials"));
  rep.checks.push_back(make_check("oracle_eigenvector", oracle_vec, tol["eigenvector"],
                                  "inverse-iteration eigenvector of M^T against the transposed polynomials"));
  return rep;
}

VerifyReport verify(const QHahnParams& p, const Tolerances& tol, const VerifyOptions& opt) {
  p.validate();
  const bool rou = p.mode == q_hahn::QMode::RootOfUnity;
  VerifyReport rep{rou ? "qhahn-rou" : "qhahn-general", params_json(p), {}};
  const TridiagonalOperator M = maybe_perturbed(q_hahn::build_q_matrix(p), opt.inject_error);

  const auto spectrum = q_spectrum(p, M, tol["eigen"]);
  rep.checks.push_back(spectrum_check(spectrum, tol));
  rep.checks.push_back(make_check("eigenvector_residual", spectrum.max_residual, tol["eigen"],
                                  "|M v - 2x v| / (|M| |v|), v = coefficients of f_m"));

  const auto op = q_hahn::q_difference_operator(p);
  rep.checks.push_back(make_check("operator_matrix", relative_matrix_gap(op.matrix(p.N), M), tol["residual"],
                                  "q-difference operator matrix against the recurrence matrix"));

  double residual = 0.0, oracle_vec = 0.0;
  for (int m = 0; m < p.N; ++m) {
    residual = std::max(residual, q_hahn::q_difference_residual(m, p));
    oracle_vec = std::max(oracle_vec, oracle_vector_deviation(M, q_hahn::two_x(m, p), generating_coefficients(m, p)));
  }
  rep.checks.push_back(make_check("q_difference_residual", residual, tol["residual"]));
  rep.checks.push_back(make_check("oracle_eigenvector", oracle_vec, tol["eigenvector"],
                                  "inverse-iteration eigenvector against the coefficients of f_m"));

  if (rou) {
    double sum_form = 0.0;
    for (int m = 0; m < p.N; ++m) {
      sum_form = std::max(sum_form, numerics::proportionality_deviation(
                                        generating_coefficients(m, p),
                                        q_hahn::generating_function_q_root_of_unity_sum(m, p).coefficients(0, p.N - 1)));
    }
    rep.checks.push_back(make_check("generating_function_sum", sum_form, tol["proportionality"],
                                    "product form of f_m against the polynomial-sum form"));
    const auto uq = q_hahn::uq_sl2_decomposition_check(p);
    rep.checks.push_back(make_check("uq_decomposition", uq.deviation, tol["uq"], "q^{1/2} branch: " + uq.branch));
    if (p.b == Complex(0.0)) {
      double zeros = 0.0;
      for (int m = 0; m < p.N; ++m) {
        const auto roots = numerics::polynomial_roots(q_hahn::generating_function_q(m, p));
        zeros = std::max(zeros, eig::compare_spectra(q_hahn::zeros_b0(m, p), roots, 0.0).max_distance());
      }
      rep.checks.push_back(make_check("zero_set", zeros, tol["zeros"], "closed-form zeros against polynomial roots"));
    }
  } else {
    double jacobi = 0.0;
    for (int m = 0; m < p.N; ++m) jacobi = std::max(jacobi, q_hahn::little_q_jacobi_deviation(m, p));
    rep.checks.push_back(make_check("little_q_jacobi", jacobi, tol["general"]));
    if (p.b != Complex(0.0)) {
      rep.checks.push_back(make_check("dual_qhahn_equivalence", q_hahn::equivalence_check(p), tol["equivalence"]));
    }
  }
  return rep;
}

}  // namespace qes::cli
