#pragma once

// The acceptance suite: ten criteria, each a sweep of identity checks with
// a worst-case value per measurement. Shared by `qes_spectral selftest` and
// the acceptance test binary.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qes/report.hpp"

namespace qes::cli {

struct Measurement {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Measurement> measurements;
  std::string note;
  double seconds = 0.0;
  /// Set when the sweep aborted on an exception.
  std::string error;

  bool passed() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  Tolerances tolerances;
  /// Fewer random draws per sweep; same structure.
  bool quick = false;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// "criterion  3  PASS  ..." with the worst value of each measurement.
std::string summary_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace qes::cli
