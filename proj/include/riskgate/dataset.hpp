#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskgate/types.hpp"

namespace riskgate {

/// Calibration (or test) observations: m score columns, m constraint-cost
/// columns and one objective-cost column, stored column-major. Immutable
/// after construction and safe to share read-only across threads.
struct CalibrationSet {
  std::size_t n = 0;  // rows
  std::size_t m = 0;  // constraints
  std::vector<std::vector<double>> scores;  // [m][n]
  std::vector<std::vector<double>> costs;   // [m][n]
  std::vector<double> objective_costs;      // [n]

  std::span<const double> score_column(std::size_t j) const { return scores[j]; }
  std::span<const double> cost_column(std::size_t j) const { return costs[j]; }

  /// Checks shape, finiteness of scores, and (unless allow_negative_costs)
  /// non-negativity of all cost columns. Throws ValidationError.
  void validate(bool allow_negative_costs = false) const;
};

/// Column-wise shifts ĉ_j (m constraint columns followed by the objective).
struct CostShifts {
  std::vector<double> shifts;  // length m+1
};

enum class DataFormat { csv, json };

/// Reads a dataset. CSV header: s1,...,sm,v1,...,vm,v_obj. JSON:
/// {"m": int, "rows": [{"s": [..], "v": [..], "v_obj": x}, ...]}.
/// Negative costs are rejected unless allow_negative_costs is set (raw data
/// headed for compute_cost_shifts/apply_shifts).
CalibrationSet load_dataset(const std::string& path, DataFormat format,
                            bool allow_negative_costs = false);

/// Writes a dataset; CSV renders doubles with 17 significant digits so that
/// load ∘ save round-trips bit-exactly.
void save_dataset(const CalibrationSet& data, const std::string& path,
                  DataFormat format);

/// Column-wise minima of the raw cost columns (constraints then objective).
CostShifts compute_cost_shifts(const CalibrationSet& raw);

/// Subtracts shifts[j] from cost column j and clamps at zero. Shifts computed
/// from the same set leave it untouched except that each column's minimum
/// becomes exactly 0; independently-shifted test rows may clamp.
CalibrationSet apply_shifts(const CalibrationSet& raw, const CostShifts& shifts);

/// v_max[j] = column max, v_min[j] = 0.
CostBounds estimate_cost_bounds(const CalibrationSet& calib);

}  // namespace riskgate
