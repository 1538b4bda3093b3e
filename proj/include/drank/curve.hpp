#pragma once

#include <span>
#include <vector>

namespace drank {

// A world percentile in (0, 100]. Smaller is more elite.
class Percent {
public:
    explicit Percent(double value);

    double value() const noexcept { return value_; }

    friend bool operator==(Percent, Percent) = default;
    friend auto operator<=>(Percent, Percent) = default;

private:
    double value_;
};

struct CurvePoint {
    double percentile;
    double count;
};

// Percentile-based double rank curve: actor paper counts at decreasing world
// percentiles. Percentiles are strictly decreasing along the sequence, each in
// (0, 100]; counts are finite and nonnegative.
class PercentileCurve {
public:
    PercentileCurve() = default;
    explicit PercentileCurve(std::vector<CurvePoint> points);

    std::span<const CurvePoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const CurvePoint& operator[](std::size_t i) const { return points_[i]; }

    std::vector<double> percentiles() const;
    std::vector<double> counts() const;

private:
    std::vector<CurvePoint> points_;
};

// The twelve percentiles recorded for the USA/EU comparison:
// 100, 50, 30, 20, 10, 8, 5, 3, 2, 1, 0.5, 0.2.
std::vector<Percent> default_grid();

// Checks a grid is nonempty and strictly decreasing. Throws DomainError.
void validate_grid(std::span<const Percent> grid);

std::vector<Percent> to_percents(std::span<const double> values);

} // namespace drank
