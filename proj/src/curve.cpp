#include "drank/curve.hpp"

#include "drank/errors.hpp"

#include <cmath>
#include <string>

namespace drank {

Percent::Percent(double value) : value_(value)
{
    if (!(value > 0.0 && value <= 100.0)) {
        throw DomainError("percentile " + std::to_string(value) + " outside (0, 100]");
    }
}

PercentileCurve::PercentileCurve(std::vector<CurvePoint> points) : points_(std::move(points))
{
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.percentile > 0.0 && p.percentile <= 100.0)) {
            throw DomainError("curve percentile " + std::to_string(p.percentile) + " outside (0, 100]");
        }
        if (!std::isfinite(p.count) || p.count < 0.0) {
            throw DomainError("curve count at percentile " + std::to_string(p.percentile) +
                              " is negative or not finite");
        }
        if (i > 0 && !(p.percentile < points_[i - 1].percentile)) {
            throw DomainError("curve percentiles must be strictly decreasing");
        }
    }
}

std::vector<double> PercentileCurve::percentiles() const
{
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) {
        out.push_back(p.percentile);
    }
    return out;
}

std::vector<double> PercentileCurve::counts() const
{
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) {
        out.push_back(p.count);
    }
    return out;
}

std::vector<Percent> default_grid()
{
    return to_percents(std::vector<double>{100, 50, 30, 20, 10, 8, 5, 3, 2, 1, 0.5, 0.2});
}

void validate_grid(std::span<const Percent> grid)
{
    if (grid.empty()) {
        throw DomainError("percentile grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] < grid[i - 1])) {
            throw DomainError("percentile grid must be strictly decreasing (position " +
                              std::to_string(i) + ")");
        }
    }
}

std::vector<Percent> to_percents(std::span<const double> values)
{
    std::vector<Percent> out;
    out.reserve(values.size());
    for (double v : values) {
        out.emplace_back(v);
    }
    return out;
}

} // namespace drank
