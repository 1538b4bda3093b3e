#include "drank/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace drank::powerlaw {

namespace {

constexpr double kRelTolerance = 1e-10;
constexpr int kMaxIterations = 100;
constexpr int kMaxHalvings = 60;

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares_line(std::span<const double> xs, std::span<const double> ys)
{
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw DataError("power-law fit: all percentiles in range are equal");
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

std::vector<CurvePoint> select(const PercentileCurve& curve, const FitRange& range)
{
    std::vector<CurvePoint> out;
    for (const auto& p : curve.points()) {
        if (range.contains(p.percentile)) {
            out.push_back(p);
        }
    }
    return out;
}

std::optional<double> try_r_squared(std::span<const CurvePoint> points, const PowerLawFit& fit,
                                    ResidualSpace space)
{
    try {
        return r_squared(points, fit, space);
    } catch (const DataError&) {
        return std::nullopt;
    }
}

std::vector<CurvePoint> positive_only(std::span<const CurvePoint> points)
{
    std::vector<CurvePoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out),
                 [](const CurvePoint& p) { return p.count > 0.0; });
    return out;
}

void fill_diagnostics(PowerLawFit& fit, std::span<const CurvePoint> in_range)
{
    const auto positive = positive_only(in_range);
    fit.r2_log = positive.size() >= 2 ? try_r_squared(positive, fit, ResidualSpace::log) : std::nullopt;
    fit.r2_linear = try_r_squared(in_range, fit, ResidualSpace::linear);
}

double sse(std::span<const CurvePoint> points, double a, double alpha)
{
    double s = 0.0;
    for (const auto& p : points) {
        const double r = p.count - a * std::pow(p.percentile, alpha);
        s += r * r;
    }
    return s;
}

} // namespace

FitRange::FitRange(double high_pct, double low_pct) : high(high_pct), low(low_pct)
{
    if (!(low > 0.0 && high <= 100.0 && low < high)) {
        throw DomainError("fit range " + std::to_string(high) + ":" + std::to_string(low) +
                          " must satisfy 0 < low < high <= 100");
    }
}

std::string_view to_string(FitMethod m) noexcept
{
    switch (m) {
    case FitMethod::log_log_least_squares:
        return "loglog";
    case FitMethod::nonlinear_least_squares:
        return "nonlinear";
    case FitMethod::closed_form:
        return "closed_form";
    case FitMethod::inline_parameters:
        return "inline";
    }
    return "unknown";
}

PowerLawFit PowerLawFit::from_parameters(double coefficient, double exponent)
{
    if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
        throw DomainError("power law coefficient must be positive");
    }
    if (!std::isfinite(exponent)) {
        throw DomainError("power law exponent must be finite");
    }
    PowerLawFit f;
    f.coefficient = coefficient;
    f.exponent = exponent;
    return f;
}

NonConvergence::NonConvergence(const std::string& what, PowerLawFit last)
    : NumericError(what), last_(std::move(last))
{
}

PowerLawFit fit_loglog(const PercentileCurve& curve, const FitRange& range)
{
    const auto in_range = select(curve, range);
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& p : in_range) {
        if (p.count > 0.0) {
            lx.push_back(std::log10(p.percentile));
            ly.push_back(std::log10(p.count));
        }
    }
    if (lx.size() < 2) {
        throw DataError("log-log fit needs at least 2 points with positive count in range, found " +
                        std::to_string(lx.size()));
    }
    const auto line = least_squares_line(lx, ly);

    PowerLawFit fit;
    fit.coefficient = std::pow(10.0, line.intercept);
    fit.exponent = line.slope;
    fit.method = FitMethod::log_log_least_squares;
    fit.range = range;
    fit.n_points = lx.size();
    fit.excluded_nonpositive = in_range.size() - lx.size();
    fill_diagnostics(fit, in_range);
    return fit;
}

PowerLawFit fit_nonlinear(const PercentileCurve& curve, const FitRange& range)
{
    const auto points = select(curve, range);
    if (points.size() < 2) {
        throw DataError("nonlinear fit needs at least 2 points in range, found " +
                        std::to_string(points.size()));
    }

    double a;
    double alpha;
    try {
        const auto start = fit_loglog(curve, range);
        a = start.coefficient;
        alpha = start.exponent;
    } catch (const DataError&) {
        const auto it = std::max_element(points.begin(), points.end(),
                                         [](const auto& l, const auto& r) { return l.count < r.count; });
        a = it->count > 0.0 ? it->count : 1.0;
        alpha = 1.0;
    }

    PowerLawFit fit;
    fit.method = FitMethod::nonlinear_least_squares;
    fit.range = range;
    fit.n_points = points.size();

    double current = sse(points, a, alpha);
    bool converged = false;
    int iter = 0;
    while (iter < kMaxIterations) {
        ++iter;
        // Normal equations J^T J d = J^T r for r = y - A x^alpha.
        double jaa = 0.0, jab = 0.0, jbb = 0.0, ra = 0.0, rb = 0.0;
        for (const auto& p : points) {
            const double xa = std::pow(p.percentile, alpha);
            const double da = xa;
            const double db = a * xa * std::log(p.percentile);
            const double r = p.count - a * xa;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ra += da * r;
            rb += db * r;
        }
        const double det = jaa * jbb - jab * jab;
        if (det == 0.0 || !std::isfinite(det)) {
            break;
        }
        double step_a = (jbb * ra - jab * rb) / det;
        double step_b = (jaa * rb - jab * ra) / det;

        // Halve until the residual does not increase and A stays positive.
        double next_a = a + step_a;
        double next_b = alpha + step_b;
        double next = sse(points, next_a, next_b);
        int halvings = 0;
        while ((next_a <= 0.0 || !(next <= current)) && halvings < kMaxHalvings) {
            step_a *= 0.5;
            step_b *= 0.5;
            next_a = a + step_a;
            next_b = alpha + step_b;
            next = sse(points, next_a, next_b);
            ++halvings;
        }
        if (halvings == kMaxHalvings) {
            // No descent direction left at working precision: at the minimum.
            converged = true;
            break;
        }
        const double change = std::max(std::fabs(step_a) / std::fabs(a),
                                        std::fabs(step_b) / std::max(std::fabs(alpha), 1.0));
        a = next_a;
        alpha = next_b;
        current = next;
        if (change < kRelTolerance) {
            converged = true;
            break;
        }
    }

    fit.coefficient = a;
    fit.exponent = alpha;
    fit.iterations = iter;
    fill_diagnostics(fit, points);
    if (!converged) {
        throw NonConvergence("nonlinear fit did not converge in " + std::to_string(kMaxIterations) +
                                 " iterations",
                             fit);
    }
    return fit;
}

PowerLawFit fit(const PercentileCurve& curve, const FitRange& range, FitMethod method)
{
    switch (method) {
    case FitMethod::log_log_least_squares:
        return fit_loglog(curve, range);
    case FitMethod::nonlinear_least_squares:
        return fit_nonlinear(curve, range);
    default:
        throw DomainError("curve fits support only the loglog and nonlinear methods");
    }
}

Estimate evaluate(const PowerLawFit& fit, double x)
{
    if (!(x > 0.0)) {
        throw DomainError("power law evaluated at nonpositive percentile " + std::to_string(x));
    }
    const bool below = fit.range.has_value() && x < fit.range->low;
    return {fit.coefficient * std::pow(x, fit.exponent), below};
}

double solve_percentile(const PowerLawFit& fit, double target_count)
{
    if (!(target_count > 0.0)) {
        throw DomainError("target count must be positive");
    }
    if (fit.exponent == 0.0) {
        throw DomainError("zero exponent: every percentile gives the same count");
    }
    return std::pow(target_count / fit.coefficient, 1.0 / fit.exponent);
}

double r_squared(std::span<const CurvePoint> points, const PowerLawFit& fit, ResidualSpace space)
{
    if (points.size() < 2) {
        throw DataError("R^2 needs at least 2 points");
    }
    std::vector<double> obs;
    std::vector<double> pred;
    obs.reserve(points.size());
    pred.reserve(points.size());
    for (const auto& p : points) {
        const double model = fit.coefficient * std::pow(p.percentile, fit.exponent);
        if (space == ResidualSpace::log) {
            if (!(p.count > 0.0)) {
                throw DataError("log-space R^2 needs positive observations");
            }
            obs.push_back(std::log10(p.count));
            pred.push_back(std::log10(model));
        } else {
            obs.push_back(p.count);
            pred.push_back(model);
        }
    }
    double mean = 0.0;
    for (double o : obs) {
        mean += o;
    }
    mean /= static_cast<double>(obs.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        ss_tot += (obs[i] - mean) * (obs[i] - mean);
        ss_res += (obs[i] - pred[i]) * (obs[i] - pred[i]);
    }
    if (ss_tot == 0.0) {
        throw DataError("R^2 undefined: observed values have zero variance");
    }
    return 1.0 - ss_res / ss_tot;
}

} // namespace drank::powerlaw
