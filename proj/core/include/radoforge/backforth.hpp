#pragma once

#include "radoforge/models.hpp"

namespace radoforge {

// A stage of the alternating construction: matched pairs in creation order,
// with the direction each step ran (true = forth, new vertex on the left).
struct PartialIso {
    std::vector<std::pair<Int, Int>> pairs;
    std::vector<bool> forth;
    std::uint32_t steps_completed = 0;
    std::string stopped_reason; // empty when every requested step ran
};

// Alternating back-and-forth between two models of the same kind, starting
// forth. Each step takes the least unmatched enumerated vertex on the active
// side, splits the matched vertices on the other side into required neighbors
// and required non-neighbors (tournaments: required in-neighbors A and
// required out-targets B), and extends by that side's witness search.
// A budget exhaustion inside any step propagates.
PartialIso build_iso(const CountableOracle& left, const CountableOracle& right,
                     std::uint32_t steps, const SearchBudget& budget = {});

// Same construction, but budget exhaustion stops early and is recorded in
// stopped_reason instead of thrown.
PartialIso build_iso_partial(const CountableOracle& left, const CountableOracle& right,
                             std::uint32_t steps, const SearchBudget& budget = {});

// Every matched pair against every other: adjacency (or arc direction) must
// agree across the two models, and each side must be repeat-free. Throws
// CheckFailure on a violation.
void verify_iso(const CountableOracle& left, const CountableOracle& right,
                const PartialIso& iso);

} // namespace radoforge
