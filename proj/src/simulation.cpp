#include "drank/simulation.hpp"

#include "drank/errors.hpp"
#include "drank/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace drank::simulation {

double CitationSampler::uniform()
{
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CitationSampler::standard_normal()
{
    return std::numbers::sqrt2 * numerics::erf_inv(2.0 * uniform() - 1.0);
}

std::vector<double> CitationSampler::draw(const lognormal::LognormalParams& params, std::size_t n,
                                          bool discretize)
{
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c = std::exp(params.mu() + params.sigma() * standard_normal());
        if (discretize) {
            c = std::floor(c);
        }
        out.push_back(c);
    }
    return out;
}

std::size_t whole_paper_count(const lognormal::LognormalParams& params)
{
    const double n = params.n_papers();
    if (n < 1.0 || n != std::floor(n) || n > 1e12) {
        throw DomainError("simulated paper counts must be whole numbers >= 1, got " + std::to_string(n));
    }
    return static_cast<std::size_t>(n);
}

empirical::CitationList sample_citations(const lognormal::LognormalParams& params, std::uint64_t seed,
                                         bool discretize)
{
    CitationSampler sampler(seed);
    const auto values = sampler.draw(params, whole_paper_count(params), discretize);
    empirical::CitationList list;
    list.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        list.push_back({"p" + std::to_string(i + 1), values[i], std::nullopt, std::nullopt});
    }
    return list;
}

empirical::CitationList sample_population(const SimulationSpec& spec)
{
    const auto n_actor = whole_paper_count(spec.actor);
    const auto n_world = whole_paper_count(spec.world);
    if (n_world < n_actor) {
        throw DomainError("world paper count must be at least the actor paper count");
    }
    CitationSampler sampler(spec.seed);
    const auto actor = sampler.draw(spec.actor, n_actor, spec.discretize);
    const auto rest = sampler.draw(spec.world, n_world - n_actor, spec.discretize);

    empirical::CitationList list;
    list.reserve(n_world);
    for (std::size_t i = 0; i < actor.size(); ++i) {
        list.push_back({"a" + std::to_string(i + 1), actor[i], std::nullopt, std::string(kActorLabel)});
    }
    for (std::size_t i = 0; i < rest.size(); ++i) {
        list.push_back({"w" + std::to_string(i + 1), rest[i], std::nullopt, std::nullopt});
    }
    return list;
}

double max_relative_deviation(const PercentileCurve& empirical, const PercentileCurve& analytic,
                              double min_percentile)
{
    if (empirical.size() != analytic.size()) {
        throw DomainError("curves have different grids");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        if (empirical[i].percentile != analytic[i].percentile) {
            throw DomainError("curves have different grids");
        }
        if (analytic[i].percentile >= min_percentile && analytic[i].count > 0.0) {
            worst = std::max(worst, std::fabs(empirical[i].count - analytic[i].count) / analytic[i].count);
        }
    }
    return worst;
}

ExperimentResult simulate_percentile_experiment(const SimulationSpec& spec, std::span<const Percent> grid)
{
    validate_grid(grid);
    auto population = sample_population(spec);
    auto empirical = empirical::build_curve(population, empirical::ActorLabel{kActorLabel}, grid,
                                            empirical::TiePolicy::proportional);
    auto analytic = lognormal::analytic_curve(grid, spec.actor, spec.world);
    const double dev = max_relative_deviation(empirical, analytic);
    return {std::move(empirical), std::move(analytic), dev};
}

PercentileCurve mean_curve(std::span<const PercentileCurve> curves)
{
    if (curves.empty()) {
        throw DomainError("no curves to average");
    }
    std::vector<CurvePoint> points(curves.front().points().begin(), curves.front().points().end());
    for (auto& p : points) {
        p.count = 0.0;
    }
    for (const auto& c : curves) {
        if (c.size() != points.size()) {
            throw DomainError("curves have different grids");
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (c[i].percentile != points[i].percentile) {
                throw DomainError("curves have different grids");
            }
            points[i].count += c[i].count;
        }
    }
    for (auto& p : points) {
        p.count /= static_cast<double>(curves.size());
    }
    return PercentileCurve(std::move(points));
}

} // namespace drank::simulation
