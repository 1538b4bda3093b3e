#pragma once

#include "drank/curve.hpp"
#include "drank/empirical.hpp"
#include "drank/lognormal.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace drank::simulation {

// Draws lognormal citation counts reproducibly.
//
// Uniforms come from std::mt19937_64, whose output sequence is fixed by the
// C++ standard: u = (top 53 bits + 0.5) / 2^53, which lies strictly inside
// (0, 1). Normals are z = sqrt(2) erf_inv(2u - 1), one uniform per variate.
// Citations are exp(mu + sigma z), floored when discretizing.
class CitationSampler {
public:
    explicit CitationSampler(std::uint64_t seed) : engine_(seed) {}

    double uniform();
    double standard_normal();
    std::vector<double> draw(const lognormal::LognormalParams& params, std::size_t n, bool discretize);

private:
    std::mt19937_64 engine_;
};

// n_papers must be a whole number >= 1.
std::size_t whole_paper_count(const lognormal::LognormalParams& params);

empirical::CitationList sample_citations(const lognormal::LognormalParams& params, std::uint64_t seed,
                                         bool discretize);

struct SimulationSpec {
    lognormal::LognormalParams world;
    lognormal::LognormalParams actor;
    std::uint64_t seed = 0;
    bool discretize = false;
};

inline constexpr const char* kActorLabel = "actor";

// The actor's papers plus world.n_papers - actor.n_papers rest-of-world papers,
// drawn from one sampler stream in that order. Actor records carry kActorLabel.
empirical::CitationList sample_population(const SimulationSpec& spec);

struct ExperimentResult {
    PercentileCurve empirical;
    PercentileCurve analytic;
    double max_rel_dev;
};

// Largest |empirical - analytic| / analytic over grid points with
// percentile >= min_percentile and analytic > 0.
double max_relative_deviation(const PercentileCurve& empirical, const PercentileCurve& analytic,
                              double min_percentile = 0.0);

// Samples the population, counts the actor's papers per world percentile
// (proportional ties) and sets the analytic curve beside it.
ExperimentResult simulate_percentile_experiment(const SimulationSpec& spec, std::span<const Percent> grid);

// Pointwise mean of curves sharing one grid.
PercentileCurve mean_curve(std::span<const PercentileCurve> curves);

} // namespace drank::simulation
