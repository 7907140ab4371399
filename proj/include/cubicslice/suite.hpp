#pragma once

#include <string>
#include <vector>

#include "cubicslice/io.hpp"
#include "cubicslice/psi_boundary.hpp"

namespace cubicslice {

struct SuiteConfig {
  std::vector<std::string> checks;  // empty runs all
  double tol = 1e-6;                // co-landing tolerance
  double fiber_tol = 1e-5;          // identification tolerance for fibres
  double separation = 1e-3;
  Precision precision = Precision::double_;
  // The co-landing transfer check runs in long double unless this is false;
  // its rays end near parabolic parameters.
  bool high_where_required = true;
  unsigned unresolved_budget = 0;
  unsigned threads = 0;
};

struct CheckResult {
  std::string name;
  int criterion = 0;
  Verdict verdict = Verdict::unresolved;
  bool finding_only = false;  // a refutation is evidence, not a failure
  std::string summary;
  Json witnesses = Json::object();
  double seconds = 0;
};

struct SuiteReport {
  std::vector<CheckResult> results;
  SuiteConfig config;

  // 0 success, 1 refutation, 2 unresolved beyond the budget.
  int exit_code() const;
  Json to_json() const;
};

// Names in criterion order.
const std::vector<std::string>& check_names();

// Throws std::invalid_argument for an unknown check name.
SuiteReport run_suite(const SuiteConfig& config);
CheckResult run_check(const std::string& name, const SuiteConfig& config);

// Sample angles of E1 for portrait transfer: ten inside W intervals and ten
// outside, none coperiodic of coperiod <= 3.
std::vector<Angle> transfer_sample_angles();

enum class Table { angles, coperiodic, pairings, portraits, fibers };
Table parse_table(const std::string& s);

struct ExportOptions {
  unsigned q = 2;
  Region region = Region::E1;
  double tol = 1e-6;
  unsigned threads = 0;
};

// angles: CSV of A_q; coperiodic: CSV of coperiod-q angles; pairings and
// portraits: JSON; fibers: CSV of type C fibre sizes. Returns the row count
// (list length for JSON).
std::size_t export_table(Table what, const std::string& path, const ExportOptions& opts = {});

}  // namespace cubicslice
