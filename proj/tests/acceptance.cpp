// Runs acceptance criteria 1-10 and prints one line per criterion.
// Usage: acceptance [--report path] [check ...]
#include <cstdio>
#include <iostream>
#include <string>

#include "cubicslice/suite.hpp"

using namespace cubicslice;

int main(int argc, char** argv) {
  SuiteConfig cfg;
  std::string report;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--report" && i + 1 < argc) report = argv[++i];
    else cfg.checks.push_back(arg);
  }
  SuiteReport rep;
  try {
    rep = run_suite(cfg);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  bool failed = false;
  for (const auto& r : rep.results) {
    std::string word;
    switch (r.verdict) {
      case Verdict::confirmed: word = "PASS"; break;
      case Verdict::refuted: word = r.finding_only ? "FINDING" : "FAIL"; break;
      case Verdict::unresolved: word = "UNRESOLVED"; break;
    }
    // A refuted monotonicity probe is recorded evidence, not a failure.
    failed = failed || r.verdict == Verdict::unresolved || (r.verdict == Verdict::refuted && !r.finding_only);
    std::printf("criterion %2d %-20s %-10s %7.1fs  %s\n", r.criterion, r.name.c_str(), word.c_str(), r.seconds,
                r.summary.c_str());
  }
  if (!report.empty()) write_json(report, rep.to_json());
  return failed ? 1 : 0;
}
