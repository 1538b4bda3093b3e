#include "drank/leiden.hpp"

#include "drank/errors.hpp"

#include <cmath>
#include <string>

namespace drank::leiden {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DataError(std::string(what) + " must be positive");
    }
}

} // namespace

void validate(const IndicatorRow& row)
{
    require_positive(row.p_top1, "P_top1%");
    require_positive(row.p_top10, "P_top10%");
    if (row.p_top10 < row.p_top1) {
        throw DataError("P_top10% is smaller than P_top1%");
    }
    double previous = row.p_top10;
    if (row.p_top50) {
        require_positive(*row.p_top50, "P_top50%");
        if (*row.p_top50 < row.p_top10) {
            throw DataError("P_top50% is smaller than P_top10%");
        }
        previous = *row.p_top50;
    }
    if (row.p_total) {
        require_positive(*row.p_total, "P");
        if (*row.p_total < previous) {
            throw DataError("P is smaller than a top-percentile indicator");
        }
    }
}

powerlaw::PowerLawFit closed_form_fit(double p_top10, double p_top1)
{
    if (!(p_top1 > 0.0) || !(p_top10 > 0.0)) {
        throw DomainError("closed-form fit needs positive P_top10% and P_top1%");
    }
    if (p_top10 < p_top1) {
        throw DomainError("closed-form fit needs P_top10% >= P_top1%");
    }
    auto fit = powerlaw::PowerLawFit::from_parameters(p_top1, std::log10(p_top10) - std::log10(p_top1));
    fit.method = powerlaw::FitMethod::closed_form;
    fit.range = powerlaw::FitRange(10.0, 1.0);
    fit.n_points = 2;
    return fit;
}

powerlaw::PowerLawFit regression_fit(const IndicatorRow& row)
{
    if (!row.p_total || !row.p_top50) {
        throw DataError("regression fit needs P and P_top50% as well as P_top10% and P_top1%");
    }
    validate(row);
    const PercentileCurve curve({{100.0, *row.p_total}, {50.0, *row.p_top50}, {10.0, row.p_top10}, {1.0, row.p_top1}});
    return powerlaw::fit_loglog(curve, powerlaw::FitRange(100.0, 1.0));
}

std::vector<std::pair<double, double>> extend(const powerlaw::PowerLawFit& fit,
                                              std::span<const double> targets)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(targets.size());
    for (double t : targets) {
        out.emplace_back(t, powerlaw::evaluate(fit, t).value);
    }
    return out;
}

std::vector<ExtensionResult> extend_batch(std::span<const IndicatorRow> rows,
                                          std::span<const double> targets, ExtensionMethod method)
{
    for (double t : targets) {
        if (!(t > 0.0)) {
            throw DomainError("extension targets must be positive");
        }
    }
    std::vector<ExtensionResult> results;
    results.reserve(rows.size());
    for (const auto& row : rows) {
        ExtensionResult r{row, std::nullopt, {}};
        try {
            validate(row);
            auto fit = method == ExtensionMethod::closed_form ? closed_form_fit(row.p_top10, row.p_top1)
                                                              : regression_fit(row);
            auto values = extend(fit, targets);
            r.extended = ExtendedRow{row, std::move(fit), std::move(values)};
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<double> default_targets()
{
    return {0.1, 0.01, 0.001};
}

} // namespace drank::leiden
