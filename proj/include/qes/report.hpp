#pragma once

// Named tolerances, JSON persistence of spectrum reports, and the
// per-family verification checks behind the command-line tool.

#include <cstdint>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "qes/dual_hahn.hpp"
#include "qes/eigensolver.hpp"
#include "qes/q_hahn.hpp"
#include "qes/random.hpp"

namespace qes::cli {

using dual_hahn::HahnParams;
using q_hahn::QHahnParams;

/// Name -> positive tolerance. Unknown names and non-positive values are
/// InvalidParameter.
class Tolerances {
 public:
  Tolerances();

  double operator[](const std::string& name) const;
  void set(const std::string& name, double value);
  /// "NAME=VALUE".
  void apply_override(const std::string& assignment);
  const std::vector<std::pair<std::string, double>>& entries() const { return values_; }

 private:
  std::vector<std::pair<std::string, double>> values_;
};

enum class Family { Hahn, QHahnRootOfUnity, QHahnGeneral };
const char* to_string(Family f);
/// "hahn", "qhahn-rou", "qhahn-general".
Family family_from_string(const std::string& name);

nlohmann::json to_json(Complex z);  // [re, im]
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json params_json(const HahnParams& p);
nlohmann::json params_json(const QHahnParams& p);

nlohmann::json to_json(const eig::SpectrumReport& r);
eig::SpectrumReport spectrum_report_from_json(const nlohmann::json& j);

/// Closed-form spectrum against the oracle spectrum of the recurrence
/// matrix. The pairing tolerance is eigen * (1 + max |closed form|);
/// max_residual is the largest eigenpair residual of the generating-function
/// eigenvectors.
eig::SpectrumReport spectrum_report(const HahnParams& p, const Tolerances& tol);
eig::SpectrumReport spectrum_report(const QHahnParams& p, const Tolerances& tol);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

Check make_check(std::string name, double value, double tolerance, std::string note = {});

struct VerifyReport {
  std::string family;
  nlohmann::json params;
  std::vector<Check> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  /// Perturb one diagonal entry of the recurrence matrix before checking.
  bool inject_error = false;
  std::uint64_t seed = kDefaultSeed;
};

VerifyReport verify(const HahnParams& p, const Tolerances& tol, const VerifyOptions& opt);
VerifyReport verify(const QHahnParams& p, const Tolerances& tol, const VerifyOptions& opt);

}  // namespace qes::cli
