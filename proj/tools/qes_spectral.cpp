// qes_spectral: spectra, identity checks, butterfly sweeps, Schrodinger
// samples and the acceptance self-test from the command line.
//
// Exit codes: 0 pass, 1 check failure, 2 invalid parameters or usage,
// 3 solver or quadrature failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qes/acceptance.hpp"
#include "qes/hofstadter.hpp"
#include "qes/report.hpp"
#include "qes/schrodinger.hpp"

namespace {

using namespace qes;
using namespace qes::cli;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct Common {
  // Empty means the command's own default: CSV for tabular samples, else JSON.
  std::string format;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerance_overrides;

  std::uint64_t resolved_seed() const { return seed ? *seed : seed_from_environment(); }
  Tolerances tolerances() const {
    Tolerances t;
    for (const std::string& a : tolerance_overrides) t.apply_override(a);
    return t;
  }
  bool csv(bool tabular = false) const { return format.empty() ? tabular : format == "csv"; }
};

struct FamilyArgs {
  std::string family;
  int N = 0;
  double gamma = 0.0, delta = 0.0;
  int S = 1;
  std::string a = "0.7", b = "0.2", q = "0.85";
  bool random = false;
};

Complex parse_complex(const std::string& text, const char* name) {
  std::stringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  in >> re;
  if (in && !in.eof()) in >> comma >> im;
  if (in.fail() || (comma != 0 && comma != ',') || !in.eof()) {
    fail(ErrorKind::InvalidParameter, std::string("--") + name + " expects RE or RE,IM, got '" + text + "'");
  }
  return {re, im};
}

std::string format_17g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidParameter, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorKind::InvalidParameter, "failed writing '" + path + "'");
}

void add_family_options(CLI::App* sub, FamilyArgs& f) {
  sub->add_option("family", f.family, "hahn | qhahn-rou | qhahn-general")->required();
  sub->add_option("--N", f.N, "dimension parameter N")->required();
  sub->add_option("--gamma", f.gamma, "hahn: gamma");
  sub->add_option("--delta", f.delta, "hahn: delta");
  sub->add_option("--S", f.S, "qhahn-rou: q = exp(2 pi i S/N)");
  sub->add_option("--a", f.a, "q-Hahn a as RE or RE,IM");
  sub->add_option("--b", f.b, "q-Hahn b as RE or RE,IM");
  sub->add_option("--q", f.q, "qhahn-general: q as RE or RE,IM");
  sub->add_flag("--random", f.random, "draw the family parameters from the seeded generator");
}

// Runs fn with either the Hahn or the q-Hahn parameters of the request.
template <class Fn>
auto with_params(const FamilyArgs& f, std::uint64_t seed, Fn&& fn) {
  Rng rng(seed);
  switch (family_from_string(f.family)) {
    case Family::Hahn: {
      const HahnParams p = f.random ? dual_hahn::random_params(rng, f.N) : HahnParams{f.gamma, f.delta, f.N};
      return fn(p);
    }
    case Family::QHahnRootOfUnity: {
      const QHahnParams p = f.random ? q_hahn::random_root_of_unity(rng, f.N, f.S)
                                     : QHahnParams::root_of_unity(f.N, f.S, parse_complex(f.a, "a"), parse_complex(f.b, "b"));
      return fn(p);
    }
    case Family::QHahnGeneral: {
      const Complex q = parse_complex(f.q, "q");
      const QHahnParams p = f.random ? q_hahn::random_general(rng, q, f.N)
                                     : QHahnParams::general(q, f.N, parse_complex(f.a, "a"), parse_complex(f.b, "b"));
      return fn(p);
    }
  }
  fail(ErrorKind::InvalidParameter, "unknown family");
}

json run_metadata(const Common& c) {
  return {{"seed", c.resolved_seed()}, {"tolerance_overrides", c.tolerance_overrides}};
}

int cmd_spectrum(const Common& c, const FamilyArgs& f) {
  const Tolerances tol = c.tolerances();
  eig::SpectrumReport r = with_params(f, c.resolved_seed(), [&](const auto& p) { return spectrum_report(p, tol); });
  r.metadata["run"] = run_metadata(c);
  if (c.csv()) {
    std::string text = "index,closed_re,closed_im,oracle_re,oracle_im,distance\n";
    for (std::size_t i = 0; i < r.closed_form.size(); ++i) {
      text += std::to_string(i) + ',' + format_17g(r.closed_form[i].real()) + ',' + format_17g(r.closed_form[i].imag()) +
              ',' + format_17g(r.oracle[i].real()) + ',' + format_17g(r.oracle[i].imag()) + ',' +
              format_17g(r.pairing_distances[i]) + '\n';
    }
    write_text(text, c.out);
  } else {
    write_text(to_json(r).dump(2) + '\n', c.out);
  }
  return r.passed ? kExitPass : kExitCheckFailure;
}

int cmd_verify(const Common& c, const FamilyArgs& f, bool inject) {
  const Tolerances tol = c.tolerances();
  const VerifyOptions opt{inject, c.resolved_seed()};
  const VerifyReport r = with_params(f, c.resolved_seed(), [&](const auto& p) { return verify(p, tol, opt); });
  if (c.csv()) {
    std::string text = "check,value,tolerance,passed\n";
    for (const Check& k : r.checks) {
      text += k.name + ',' + format_17g(k.value) + ',' + format_17g(k.tolerance) + ',' + (k.passed ? "true" : "false") + '\n';
    }
    write_text(text, c.out);
  } else {
    json j = r.to_json();
    j["run"] = run_metadata(c);
    j["inject_error"] = inject;
    write_text(j.dump(2) + '\n', c.out);
  }
  return r.passed() ? kExitPass : kExitCheckFailure;
}

int cmd_recheck(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidParameter, "cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("not JSON: ") + e.what());
  }
  const eig::SpectrumReport stored = spectrum_report_from_json(j);
  eig::SpectrumReport again = eig::compare_spectra(stored.closed_form, stored.oracle, stored.tolerance);
  again.max_residual = stored.max_residual;
  again.refresh_passed();
  const bool consistent = again.passed == stored.passed;
  std::cout << json{{"stored_passed", stored.passed}, {"recomputed_passed", again.passed}, {"consistent", consistent}}.dump()
            << '\n';
  return consistent ? kExitPass : kExitCheckFailure;
}

int cmd_butterfly(const Common& c, int max_N) {
  if (max_N % 2 == 0) fail(ErrorKind::InvalidParameter, "--max-N must be odd");
  const auto sweep = hofstadter::butterfly_sweep(max_N);
  if (!c.csv(true)) {
    json points = json::array();
    for (const auto& p : sweep.points) {
      points.push_back({{"flux_numerator", p.flux_numerator()},
                        {"flux_denominator", p.flux_denominator()},
                        {"flux_value", p.flux_value()},
                        {"eigenvalue", p.eigenvalue}});
    }
    json failures = json::array();
    for (const auto& f : sweep.failures) failures.push_back({{"N", f.N}, {"S", f.S}, {"message", f.message}});
    write_text(json{{"points", points}, {"failures", failures}}.dump(2) + '\n', c.out);
  } else {
    std::ostringstream csv;
    hofstadter::write_butterfly_csv(sweep.points, csv);
    write_text(csv.str(), c.out);
  }
  for (const auto& f : sweep.failures) std::cerr << "N=" << f.N << " S=" << f.S << ": " << f.message << '\n';
  return sweep.failures.empty() ? kExitPass : kExitSolver;
}

struct SchrodingerArgs {
  int N = 3;
  double gamma = -4.2, delta = 4.0;
  double y_min = 0.05, y_max = 10.0;
  int n_points = 256;
  std::string domain = "half";
  std::string sidecar;
};

int cmd_schrodinger(const Common& c, const SchrodingerArgs& a) {
  using namespace schrodinger;
  if (a.domain != "half" && a.domain != "full") fail(ErrorKind::InvalidParameter, "--domain is half or full");
  const SchrodingerProblem problem{{a.gamma, a.delta, a.N},
                                   a.domain == "half" ? Domain::HalfLine : Domain::FullLine,
                                   {a.y_min, a.y_max, a.n_points}};
  problem.validate();
  const auto rows = sample(problem);

  json side{{"params", params_json(problem.params)},
            {"domain", to_string(problem.domain)},
            {"grid", {{"y_min", a.y_min}, {"y_max", a.y_max}, {"n_points", a.n_points}}},
            {"potential_limit", potential_limit(problem.params)}};
  const auto base = integrability_predicates(problem.params, 0);
  side["half_line"] = base.half_line;
  json levels = json::array();
  for (int m = 0; m <= a.N; ++m) {
    const auto pred = integrability_predicates(problem.params, m);
    levels.push_back({{"m", m},
                      {"energy", energy(m, problem.params)},
                      {"full_line", pred.full_line},
                      {"half_line", pred.half_line},
                      {"normalization", normalization_constant(m, problem.params)}});
  }
  side["levels"] = levels;

  if (!c.csv(true)) {
    json samples = json::array();
    for (const auto& r : rows) samples.push_back({{"y", r.y}, {"potential", r.potential}, {"psi", r.psi}});
    side["samples"] = samples;
    write_text(side.dump(2) + '\n', c.out);
    return kExitPass;
  }
  std::string text = "y,V";
  for (int m = 0; m <= a.N; ++m) text += ",psi_" + std::to_string(m);
  text += '\n';
  for (const auto& r : rows) {
    text += format_17g(r.y) + ',' + format_17g(r.potential);
    for (double v : r.psi) text += ',' + format_17g(v);
    text += '\n';
  }
  write_text(text, c.out);
  std::string sidecar = a.sidecar;
  if (sidecar.empty() && !c.out.empty() && c.out != "-") sidecar = c.out + ".json";
  if (!sidecar.empty()) write_text(side.dump(2) + '\n', sidecar);
  return kExitPass;
}

int cmd_selftest(const Common& c, bool quick, const std::vector<int>& only) {
  AcceptanceOptions opt{c.resolved_seed(), c.tolerances(), quick};
  std::vector<CriterionResult> results;
  if (only.empty()) {
    results = run_acceptance(opt);
  } else {
    for (int id : only) results.push_back(run_criterion(id, opt));
  }
  bool all = true;
  json list = json::array();
  for (const auto& r : results) {
    std::cout << summary_line(r) << '\n';
    if (!r.note.empty()) std::cout << "              note: " << r.note << '\n';
    all = all && r.passed();
    list.push_back(to_json(r));
  }
  std::cout << (all ? "selftest: all criteria passed" : "selftest: FAILED") << " (seed " << opt.seed
            << (quick ? ", quick" : "") << ")\n";
  if (!c.out.empty()) {
    write_text(json{{"seed", opt.seed}, {"quick", quick}, {"passed", all}, {"criteria", list}}.dump(2) + '\n', c.out);
  }
  return all ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra and identity checks for quasi-exactly solvable tridiagonal problems"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--format", common.format, "json | csv (default csv for butterfly and schrodinger, json otherwise)")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", common.out, "output path (default stdout)");
  app.add_option("--seed", common.seed, "64-bit seed (default: QES_SPECTRAL_SEED, else 1)");
  app.add_option("--tolerance", common.tolerance_overrides, "NAME=VALUE, repeatable")->take_all();

  FamilyArgs spectrum_args, verify_args;
  auto* spectrum = app.add_subcommand("spectrum", "closed-form spectrum against the eigensolver oracle");
  add_family_options(spectrum, spectrum_args);

  bool inject = false;
  auto* verify_cmd = app.add_subcommand("verify", "every residual and identity check for one parameter set");
  add_family_options(verify_cmd, verify_args);
  verify_cmd->add_flag("--inject-error", inject, "perturb one matrix entry (sensitivity check)");

  std::string report_path;
  auto* recheck = app.add_subcommand("recheck", "re-run the comparison stored in a spectrum report");
  recheck->add_option("report", report_path, "JSON file written by `spectrum`")->required();

  int max_N = 63;
  auto* butterfly = app.add_subcommand("butterfly", "Hofstadter flux sweep as CSV");
  butterfly->add_option("--max-N", max_N, "largest odd N (<= 63)");

  SchrodingerArgs sch;
  auto* schro = app.add_subcommand("schrodinger", "sample V and psi_0..psi_N on a grid");
  schro->add_option("--N", sch.N);
  schro->add_option("--gamma", sch.gamma);
  schro->add_option("--delta", sch.delta);
  schro->add_option("--y-min", sch.y_min);
  schro->add_option("--y-max", sch.y_max);
  schro->add_option("--n-points", sch.n_points);
  schro->add_option("--domain", sch.domain, "half | full");
  schro->add_option("--sidecar", sch.sidecar, "JSON sidecar path (default <out>.json)");

  bool quick = false;
  std::vector<int> only;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest->add_flag("--quick", quick, "fewer random draws");
  selftest->add_option("--criterion", only, "run only these criteria (1..10)")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(common, spectrum_args);
    if (verify_cmd->parsed()) return cmd_verify(common, verify_args, inject);
    if (recheck->parsed()) return cmd_recheck(report_path);
    if (butterfly->parsed()) return cmd_butterfly(common, max_N);
    if (schro->parsed()) return cmd_schrodinger(common, sch);
    if (selftest->parsed()) return cmd_selftest(common, quick, only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::SolverFailure || e.kind() == ErrorKind::QuadratureFailure ? kExitSolver : kExitInvalid;
  }
  return kExitInvalid;
}
