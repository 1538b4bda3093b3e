#pragma once

#include "drank/curve.hpp"
#include "drank/errors.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace drank::powerlaw {

// Inclusive percentile interval [low, high] selected by x membership.
// Written HIGH:LOW on the command line, e.g. 20:0.2.
struct FitRange {
    double high;
    double low;

    FitRange(double high_pct, double low_pct);

    bool contains(double x) const noexcept { return x >= low && x <= high; }
};

enum class FitMethod { log_log_least_squares, nonlinear_least_squares, closed_form, inline_parameters };

std::string_view to_string(FitMethod m) noexcept;

enum class ResidualSpace { log, linear };

// N(x) = coefficient * x^exponent.
//
// r2_log / r2_linear are filled by the fitting routines; fits built from
// literal parameters leave them empty. `range` is the percentile interval the
// fit was computed on, when there is one; evaluating below range->low is
// extrapolation and is flagged.
struct PowerLawFit {
    double coefficient = 1.0;
    double exponent = 1.0;
    std::optional<double> r2_log;
    std::optional<double> r2_linear;
    FitMethod method = FitMethod::inline_parameters;
    std::optional<FitRange> range;
    std::size_t n_points = 0;
    // Points inside the range dropped from a log-space fit because count <= 0.
    std::size_t excluded_nonpositive = 0;
    // Gauss-Newton iterations (nonlinear fits only).
    int iterations = 0;

    // A fit given directly by (A, alpha). A must be positive.
    static PowerLawFit from_parameters(double coefficient, double exponent);
};

// A fitted value plus whether it lies below the fitted range.
struct Estimate {
    double value;
    bool extrapolated;
};

// Thrown when Gauss-Newton exhausts its iteration cap; carries the last iterate.
class NonConvergence : public NumericError {
public:
    NonConvergence(const std::string& what, PowerLawFit last);
    const PowerLawFit& last_iterate() const noexcept { return last_; }

private:
    PowerLawFit last_;
};

// Ordinary least squares of log10(count) on log10(x) over the points inside
// `range`; A = 10^intercept, alpha = slope. Points with count <= 0 are skipped
// and counted in excluded_nonpositive.
PowerLawFit fit_loglog(const PercentileCurve& curve, const FitRange& range);

// Least squares on untransformed counts, sum (count - A x^alpha)^2, by damped
// Gauss-Newton warm-started from fit_loglog (or from (max count, 1) when the
// log fit is infeasible). Stops when the relative parameter change drops
// below 1e-10; throws NonConvergence after 100 iterations.
PowerLawFit fit_nonlinear(const PercentileCurve& curve, const FitRange& range);

PowerLawFit fit(const PercentileCurve& curve, const FitRange& range, FitMethod method);

// A * x^alpha. x must be positive; values below the fitted range are allowed
// and flagged.
Estimate evaluate(const PowerLawFit& fit, double x);

// The percentile at which the fit yields target_count: (target / A)^(1/alpha).
double solve_percentile(const PowerLawFit& fit, double target_count);

// 1 - SS_res / SS_tot of observed values against the fit, on log10 values or
// raw values. Throws DataError on zero total variance or, in log space, on a
// nonpositive observation.
double r_squared(std::span<const CurvePoint> points, const PowerLawFit& fit, ResidualSpace space);

} // namespace drank::powerlaw
