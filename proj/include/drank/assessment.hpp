#pragma once

#include "drank/powerlaw.hpp"

#include <cstdint>

namespace drank::assessment {

// Prize-level achievements per year used for the USA/EU comparison
// (chemistry, physics, biology). Example inputs, not policy.
inline constexpr double kNobelPerYearChemistry = 1.1;
inline constexpr double kNobelPerYearPhysics = 0.9;
inline constexpr double kNobelPerYearBiology = 0.9;

// Suggested common percentile for cross-actor comparisons.
inline constexpr double kComparisonPercentile = 0.01;

struct PerformanceRatio {
    double percentile;
    double actor_value;
    double reference_value;
    double ratio;
};

// Percentile held by the single most cited paper of a world of n papers: 100 / n.
double rank1_percentile(std::int64_t world_paper_count);

// Expected actor papers at percentile x; below 1 it reads as the likelihood of
// producing one such paper.
powerlaw::Estimate likelihood_at(const powerlaw::PowerLawFit& fit, double x);

// Percentile at which the fit yields annual_count papers.
double nobel_percentile(const powerlaw::PowerLawFit& fit, double annual_count);

// evaluate(actor, x) / evaluate(reference, x).
PerformanceRatio performance_ratio(const powerlaw::PowerLawFit& actor,
                                   const powerlaw::PowerLawFit& reference, double x);

// Percentile where two power laws give equal counts. Throws DomainError for
// equal exponents.
double crossing_percentile(const powerlaw::PowerLawFit& a, const powerlaw::PowerLawFit& b);

} // namespace drank::assessment
