#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "qstat/common.hpp"

namespace qstat {

/// Outcome of one axiom check: largest residual seen plus the first
/// offending item. Checkers never throw on axiom failure; the report is
/// the failure.
struct CheckReport {
  std::string name;
  double tolerance = default_tolerance;
  bool passed = true;
  double max_residual = 0.0;
  std::string witness;
  std::size_t checked = 0;
  // instances skipped because a truncated basis could not express them
  std::size_t artifacts = 0;

  CheckReport() = default;
  CheckReport(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  /// Folds one residual into the report; `describe` is only invoked for
  /// the first failure.
  template <class Describe>
  void record(double residual, Describe&& describe) {
    ++checked;
    if (residual > max_residual || std::isnan(residual)) max_residual = residual;
    if ((residual > tolerance || std::isnan(residual)) && passed) {
      passed = false;
      witness = describe();
    }
  }

  void record(double residual) {
    record(residual, [] { return std::string("?"); });
  }

  void fail(std::string why) {
    if (passed) witness = std::move(why);
    passed = false;
  }

  void merge(const CheckReport& other) {
    checked += other.checked;
    artifacts += other.artifacts;
    if (other.max_residual > max_residual) max_residual = other.max_residual;
    if (!other.passed && passed) {
      passed = false;
      witness = other.name + ":" + other.witness;
    }
  }

  /// `CHECK <name> PASS|FAIL residual=<r> witness=<...>`
  std::string line() const {
    std::string s = "CHECK " + name + (passed ? " PASS" : " FAIL");
    s += " residual=" + format_residual(max_residual);
    s += " witness=" + (witness.empty() ? std::string("-") : witness);
    if (artifacts > 0) s += " truncation_artifacts=" + std::to_string(artifacts);
    return s;
  }
};

}  // namespace qstat
