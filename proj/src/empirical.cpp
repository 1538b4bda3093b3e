#include "drank/empirical.hpp"

#include "drank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace drank::empirical {

double Apportionment::value() const noexcept
{
    if (world_tied == 0) {
        return static_cast<double>(actor_above);
    }
    return static_cast<double>(actor_above) +
           static_cast<double>(actor_tied) * static_cast<double>(world_taken) /
               static_cast<double>(world_tied);
}

CitationList rank_descending(CitationList list, TiePolicy policy)
{
    if (policy == TiePolicy::secondary_key) {
        std::stable_sort(list.begin(), list.end(), [](const PaperRecord& l, const PaperRecord& r) {
            if (l.citations != r.citations) {
                return l.citations > r.citations;
            }
            if (l.secondary_citations.has_value() != r.secondary_citations.has_value()) {
                return l.secondary_citations.has_value();
            }
            return l.secondary_citations.value_or(0.0) > r.secondary_citations.value_or(0.0);
        });
    } else {
        std::stable_sort(list.begin(), list.end(), [](const PaperRecord& l, const PaperRecord& r) {
            return l.citations > r.citations;
        });
    }
    return list;
}

std::size_t percentile_boundary(std::size_t n_world, Percent x)
{
    const double exact = x.value() * static_cast<double>(n_world) / 100.0;
    const double rounded = std::floor(exact + 0.5);
    return static_cast<std::size_t>(std::clamp(rounded, 0.0, static_cast<double>(n_world)));
}

std::vector<TieBlock> find_tie_blocks(const CitationList& ranked)
{
    std::vector<TieBlock> blocks;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= ranked.size(); ++i) {
        if (i == ranked.size() || ranked[i].citations != ranked[start].citations) {
            if (i - start >= 2) {
                blocks.push_back({ranked[start].citations, start + 1, i});
            }
            start = i;
        }
    }
    return blocks;
}

namespace {

void validate_citations(const CitationList& list)
{
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& r = list[i];
        if (!std::isfinite(r.citations) || r.citations < 0.0) {
            throw DataError("record " + std::to_string(i + 1) + ": citations must be nonnegative");
        }
        if (r.secondary_citations && (!std::isfinite(*r.secondary_citations) || *r.secondary_citations < 0.0)) {
            throw DataError("record " + std::to_string(i + 1) + ": secondary citations must be nonnegative");
        }
    }
}

// Number of leading elements of a descending sequence that are > c (or >= c).
template <typename Range, typename Proj>
std::int64_t count_greater(const Range& r, double c, Proj proj)
{
    auto it = std::partition_point(r.begin(), r.end(), [&](const auto& e) { return proj(e) > c; });
    return static_cast<std::int64_t>(it - r.begin());
}

template <typename Range, typename Proj>
std::int64_t count_at_least(const Range& r, double c, Proj proj)
{
    auto it = std::partition_point(r.begin(), r.end(), [&](const auto& e) { return proj(e) >= c; });
    return static_cast<std::int64_t>(it - r.begin());
}

constexpr auto citations_of = [](const PaperRecord& r) { return r.citations; };
constexpr auto identity = [](double v) { return v; };

} // namespace

PercentileCounter::PercentileCounter(CitationList world, ActorSelector actor, TiePolicy policy)
    : policy_(policy), membership_(std::holds_alternative<ActorLabel>(actor))
{
    if (world.empty()) {
        throw DataError("world citation list is empty");
    }
    validate_citations(world);
    if (!membership_ && policy == TiePolicy::secondary_key) {
        throw DomainError("the secondary-key tie policy needs actor papers inside the world list; "
                          "a separate actor list supports only the proportional policy");
    }
    world_ = rank_descending(std::move(world), policy);

    if (membership_) {
        const auto& label = std::get<ActorLabel>(actor).label;
        actor_prefix_.assign(world_.size() + 1, 0);
        for (std::size_t i = 0; i < world_.size(); ++i) {
            const bool mine = world_[i].actor.has_value() && *world_[i].actor == label;
            actor_prefix_[i + 1] = actor_prefix_[i] + (mine ? 1 : 0);
            if (mine) {
                actor_sorted_.push_back(world_[i].citations);
            }
        }
    } else {
        actor_sorted_ = std::get<ActorList>(actor).citations;
        for (double c : actor_sorted_) {
            if (!std::isfinite(c) || c < 0.0) {
                throw DataError("actor citations must be nonnegative");
            }
        }
        std::sort(actor_sorted_.begin(), actor_sorted_.end(), std::greater<>());
    }
}

std::size_t PercentileCounter::actor_total() const noexcept
{
    return actor_sorted_.size();
}

std::int64_t PercentileCounter::world_greater(double c) const
{
    return count_greater(world_, c, citations_of);
}

std::int64_t PercentileCounter::world_at_least(double c) const
{
    return count_at_least(world_, c, citations_of);
}

std::int64_t PercentileCounter::actor_greater(double c) const
{
    return count_greater(actor_sorted_, c, identity);
}

std::int64_t PercentileCounter::actor_at_least(double c) const
{
    return count_at_least(actor_sorted_, c, identity);
}

Apportionment PercentileCounter::apportion(Percent x) const
{
    if (policy_ != TiePolicy::proportional) {
        throw DomainError("apportionment is defined for the proportional tie policy only");
    }
    Apportionment a;
    a.boundary = percentile_boundary(world_.size(), x);
    if (a.boundary == 0) {
        return a;
    }
    a.threshold = world_[a.boundary - 1].citations;
    a.world_above = world_greater(a.threshold);
    a.world_tied = world_at_least(a.threshold) - a.world_above;
    a.world_taken = static_cast<std::int64_t>(a.boundary) - a.world_above;
    a.actor_above = actor_greater(a.threshold);
    a.actor_tied = actor_at_least(a.threshold) - a.actor_above;
    return a;
}

double PercentileCounter::count(Percent x) const
{
    if (x.value() == 100.0) {
        return static_cast<double>(actor_total());
    }
    if (policy_ == TiePolicy::proportional) {
        return apportion(x).value();
    }
    const auto boundary = percentile_boundary(world_.size(), x);
    return static_cast<double>(actor_prefix_[boundary]);
}

double count_in_percentile(const CitationList& world, const ActorSelector& actor, Percent x,
                           TiePolicy policy)
{
    return PercentileCounter(world, actor, policy).count(x);
}

PercentileCurve build_curve(const CitationList& world, const ActorSelector& actor,
                            std::span<const Percent> grid, TiePolicy policy)
{
    validate_grid(grid);
    const PercentileCounter counter(world, actor, policy);
    std::vector<CurvePoint> points;
    points.reserve(grid.size());
    for (Percent x : grid) {
        points.push_back({x.value(), counter.count(x)});
    }
    return PercentileCurve(std::move(points));
}

} // namespace drank::empirical
