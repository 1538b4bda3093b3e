#include "drank/assessment.hpp"

#include "drank/errors.hpp"

#include <cmath>

namespace drank::assessment {

double rank1_percentile(std::int64_t world_paper_count)
{
    if (world_paper_count < 1) {
        throw DomainError("world paper count must be at least 1");
    }
    return 100.0 / static_cast<double>(world_paper_count);
}

powerlaw::Estimate likelihood_at(const powerlaw::PowerLawFit& fit, double x)
{
    return powerlaw::evaluate(fit, x);
}

double nobel_percentile(const powerlaw::PowerLawFit& fit, double annual_count)
{
    return powerlaw::solve_percentile(fit, annual_count);
}

PerformanceRatio performance_ratio(const powerlaw::PowerLawFit& actor,
                                   const powerlaw::PowerLawFit& reference, double x)
{
    const double a = powerlaw::evaluate(actor, x).value;
    const double b = powerlaw::evaluate(reference, x).value;
    if (!(b > 0.0)) {
        throw NumericError("reference fit evaluates to zero");
    }
    return {x, a, b, a / b};
}

double crossing_percentile(const powerlaw::PowerLawFit& a, const powerlaw::PowerLawFit& b)
{
    const double d = a.exponent - b.exponent;
    if (d == 0.0) {
        throw DomainError("power laws with equal exponents never cross");
    }
    return std::pow(b.coefficient / a.coefficient, 1.0 / d);
}

} // namespace drank::assessment
