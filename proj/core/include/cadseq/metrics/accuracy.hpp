#pragma once

#include <optional>

#include "cadseq/command.hpp"
#include "cadseq/matrix.hpp"

namespace cadseq::metrics {

// Default parameter-accuracy tolerance in quantization units (strict
// inequality |p - p_hat| < eta).
inline constexpr int kDefaultParamTolerance = 3;

// Fraction of matching command types over the padded 60-row comparison.
// With content_rows_only, only rows up to the longer program's length count.
double command_accuracy(const CadProgram& gt, const CadProgram& pred,
                        bool content_rows_only = false);

// Fraction of used parameter slots within tolerance, over rows whose command
// type matches. Returns nullopt when no row matches (degenerate denominator);
// callers exclude such items from averages.
std::optional<double> param_accuracy(const CadProgram& gt, const CadProgram& pred,
                                     int eta = kDefaultParamTolerance,
                                     bool content_rows_only = false);

// Relative error reduction (p1 - p2) / (1 - p2). Throws DivisionByZero when
// p2 == 1.
double relative_improvement(double p1, double p2);

}  // namespace cadseq::metrics
