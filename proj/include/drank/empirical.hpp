#pragma once

#include "drank/curve.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace drank::empirical {

// One publication. `citations` is the window count used for ranking; it is
// whole-valued for real data but may be continuous for simulated lists.
// `secondary_citations` (the database-total count) breaks ties under the
// secondary-key policy.
struct PaperRecord {
    std::string id;
    double citations = 0.0;
    std::optional<double> secondary_citations;
    std::optional<std::string> actor;
};

using CitationList = std::vector<PaperRecord>;

enum class TiePolicy {
    // Ties ordered by secondary_citations (descending), then input order.
    secondary_key,
    // Actor papers in the tie block straddling the boundary are counted in
    // proportion to the share of the block that falls inside the percentile.
    proportional,
};

// Maximal run of equally cited papers in a descending ranking. Ranks are 1-based.
struct TieBlock {
    double citation_value;
    std::size_t first_rank;
    std::size_t last_rank;

    std::size_t size() const noexcept { return last_rank - first_rank + 1; }
};

// Actor papers picked out of the world list by label.
struct ActorLabel {
    std::string label;
};

// Actor papers given as a separate citation list. Only valid with the
// proportional policy, since the tie break needs the merged ordering.
struct ActorList {
    std::vector<double> citations;
};

using ActorSelector = std::variant<ActorLabel, ActorList>;

// How a percentile count was assembled under the proportional rule:
// count = actor_above + actor_tied * world_taken / world_tied.
// All fields are zero when the boundary is 0.
struct Apportionment {
    std::size_t boundary = 0;
    double threshold = 0.0;          // citations of the paper at the boundary rank
    std::int64_t world_above = 0;    // world papers strictly above threshold
    std::int64_t world_tied = 0;     // world papers equal to threshold
    std::int64_t world_taken = 0;    // boundary - world_above
    std::int64_t actor_above = 0;
    std::int64_t actor_tied = 0;

    double value() const noexcept;
};

// Sorts by citations, highest first. Under secondary_key, ties are ordered by
// secondary_citations descending (records without one go last), then by input
// order. Under proportional the sort is stable.
CitationList rank_descending(CitationList list, TiePolicy policy);

// Number of papers in the world top x%: x * n_world / 100 rounded half up,
// clamped to [0, n_world].
std::size_t percentile_boundary(std::size_t n_world, Percent x);

// Tie blocks (size >= 2) of a list already sorted by descending citations.
std::vector<TieBlock> find_tie_blocks(const CitationList& ranked);

// Ranks the world once and answers percentile counts for one actor.
class PercentileCounter {
public:
    PercentileCounter(CitationList world, ActorSelector actor, TiePolicy policy);

    std::size_t world_size() const noexcept { return world_.size(); }
    // Actor papers at x = 100: every paper the actor has.
    std::size_t actor_total() const noexcept;

    double count(Percent x) const;
    // Proportional breakdown. Requires the proportional policy.
    Apportionment apportion(Percent x) const;

private:
    CitationList world_;              // ranked
    std::vector<double> actor_sorted_; // actor citations, descending
    std::vector<std::size_t> actor_prefix_; // actor papers among the first k ranked, membership mode
    TiePolicy policy_;
    bool membership_;

    std::int64_t world_greater(double c) const;
    std::int64_t world_at_least(double c) const;
    std::int64_t actor_greater(double c) const;
    std::int64_t actor_at_least(double c) const;
};

double count_in_percentile(const CitationList& world, const ActorSelector& actor, Percent x,
                           TiePolicy policy);

PercentileCurve build_curve(const CitationList& world, const ActorSelector& actor,
                            std::span<const Percent> grid, TiePolicy policy);

} // namespace drank::empirical
