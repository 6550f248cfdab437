#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace riskgate {

/// Raised when input data violates a documented invariant (non-finite score,
/// negative cost, budget/bound mismatch, ...). Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a file is syntactically malformed. Maps to CLI exit code 1.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a file cannot be opened or written. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Closed search interval for one threshold.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Per-constraint risk budgets and threshold search intervals.
struct BudgetSpec {
  std::vector<double> budgets;    // one budget per constraint
  std::vector<Interval> domains;  // one closed interval per constraint

  std::size_t size() const { return budgets.size(); }
  void validate() const;
};

/// Almost-sure cost bounds per constraint; drives the conformal corrections.
struct CostBounds {
  std::vector<double> v_min;
  std::vector<double> v_max;

  std::size_t size() const { return v_max.size(); }
  void validate() const;
};

}  // namespace riskgate
