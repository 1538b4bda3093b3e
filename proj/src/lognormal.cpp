#include "drank/lognormal.hpp"

#include "drank/errors.hpp"
#include "drank/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace drank::lognormal {

LognormalParams::LognormalParams(double n_papers, double mu, double sigma)
    : n_papers_(n_papers), mu_(mu), sigma_(sigma)
{
    if (!(n_papers > 0.0) || !std::isfinite(n_papers)) {
        throw DomainError("lognormal: paper count must be positive, got " + std::to_string(n_papers));
    }
    if (!std::isfinite(mu)) {
        throw DomainError("lognormal: mu must be finite");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("lognormal: sigma must be positive, got " + std::to_string(sigma));
    }
}

double density(double citations, const LognormalParams& params)
{
    if (!(citations > 0.0)) {
        throw DomainError("lognormal density: citations must be positive");
    }
    const double z = (std::log(citations) - params.mu()) / params.sigma();
    return params.n_papers() * std::numbers::inv_sqrtpi / std::numbers::sqrt2 /
           (citations * params.sigma()) * std::exp(-0.5 * z * z);
}

namespace {

// ln c0; only meaningful for x < 100.
double log_threshold(double x, const LognormalParams& world)
{
    return world.mu() + std::numbers::sqrt2 * world.sigma() * numerics::erfc_inv(2.0 * x / 100.0);
}

} // namespace

double citation_threshold(Percent x, const LognormalParams& world)
{
    if (x.value() == 100.0) {
        return 0.0;
    }
    return std::exp(log_threshold(x.value(), world));
}

double papers_in_top(Percent x, const LognormalParams& actor, const LognormalParams& world)
{
    if (x.value() == 100.0) {
        return actor.n_papers();
    }
    const double ln_c0 = log_threshold(x.value(), world);
    // erfc form of (N/2)[1 + erf((mu - ln c0)/(sqrt2 sigma))]; no cancellation at tiny x.
    return 0.5 * actor.n_papers() *
           numerics::erfc((ln_c0 - actor.mu()) / (std::numbers::sqrt2 * actor.sigma()));
}

PercentileCurve analytic_curve(std::span<const Percent> grid, const LognormalParams& actor,
                               const LognormalParams& world)
{
    validate_grid(grid);
    std::vector<CurvePoint> points;
    points.reserve(grid.size());
    for (Percent x : grid) {
        points.push_back({x.value(), papers_in_top(x, actor, world)});
    }
    return PercentileCurve(std::move(points));
}

} // namespace drank::lognormal
