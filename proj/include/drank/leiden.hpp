#pragma once

#include "drank/powerlaw.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace drank::leiden {

// One ranking entry: total output P and the P_top50% / P_top10% / P_top1%
// indicators, possibly fractional. Country tables often publish only the last
// two, so P and P_top50% are optional.
struct IndicatorRow {
    std::string name;
    std::string field;
    std::string period;
    std::optional<double> p_total;
    std::optional<double> p_top50;
    double p_top10 = 0.0;
    double p_top1 = 0.0;
};

// Throws DataError unless the present indicators are positive and
// nonincreasing: P >= P_top50% >= P_top10% >= P_top1% > 0.
void validate(const IndicatorRow& row);

struct ExtendedRow {
    IndicatorRow base;
    powerlaw::PowerLawFit fit;
    // (target percentile, P_top target%) in the order the targets were given.
    std::vector<std::pair<double, double>> extended;
};

enum class ExtensionMethod { closed_form, regression };

// Two-point power law through (10, P_top10%) and (1, P_top1%):
// A = P_top1%, alpha = lg P_top10% - lg P_top1%.
powerlaw::PowerLawFit closed_form_fit(double p_top10, double p_top1);

// Log-log least squares through (100, P), (50, P_top50%), (10, P_top10%), (1, P_top1%).
powerlaw::PowerLawFit regression_fit(const IndicatorRow& row);

// The fit evaluated at each target percentile (targets must be positive).
std::vector<std::pair<double, double>> extend(const powerlaw::PowerLawFit& fit,
                                              std::span<const double> targets);

struct ExtensionResult {
    IndicatorRow row;
    std::optional<ExtendedRow> extended;
    std::string error;

    bool ok() const noexcept { return extended.has_value(); }
};

// One result per input row, in input order. Invalid rows carry the reason
// instead of an ExtendedRow.
std::vector<ExtensionResult> extend_batch(std::span<const IndicatorRow> rows,
                                          std::span<const double> targets, ExtensionMethod method);

// P_top0.1%, P_top0.01%, P_top0.001%.
std::vector<double> default_targets();

} // namespace drank::leiden
