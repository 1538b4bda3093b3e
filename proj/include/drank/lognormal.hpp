#pragma once

#include "drank/curve.hpp"

#include <span>

namespace drank::lognormal {

// (N, mu, sigma) of a lognormal citation distribution: N papers whose log
// citation counts have mean mu and standard deviation sigma. N is real so
// fractional counting is representable.
class LognormalParams {
public:
    LognormalParams(double n_papers, double mu, double sigma);

    double n_papers() const noexcept { return n_papers_; }
    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }

    LognormalParams with_n_papers(double n) const { return {n, mu_, sigma_}; }

private:
    double n_papers_;
    double mu_;
    double sigma_;
};

// Papers per unit citation at c > 0: N / (c sigma sqrt(2 pi)) exp(-(ln c - mu)^2 / (2 sigma^2)).
double density(double citations, const LognormalParams& params);

// Citations needed to enter the world top x%:
//   c0 = exp(mu_w - sqrt(2) sigma_w erf_inv(2x/100 - 1)),
// evaluated through erfc_inv(2x/100). Returns 0 at x = 100 (everything is in).
double citation_threshold(Percent x, const LognormalParams& world);

// Expected actor papers above the world top-x% threshold:
//   N(x) = (N/2) [1 + erf((mu - ln c0) / (sqrt(2) sigma))].
// Exactly N at x = 100.
double papers_in_top(Percent x, const LognormalParams& actor, const LognormalParams& world);

// papers_in_top over a strictly decreasing grid.
PercentileCurve analytic_curve(std::span<const Percent> grid, const LognormalParams& actor,
                               const LognormalParams& world);

} // namespace drank::lognormal
