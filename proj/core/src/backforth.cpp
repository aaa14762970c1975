#include "radoforge/backforth.hpp"

#include <set>

namespace radoforge {

namespace {

Int least_unmatched(const CountableOracle& model, const std::set<Int>& matched) {
    for (Int i = 0;; ++i) {
        Int v = model.vertex_at(i);
        if (!matched.count(v)) return v;
    }
}

PartialIso run(const CountableOracle& left, const CountableOracle& right, std::uint32_t steps,
               const SearchBudget& budget, bool rethrow) {
    if (left.tournament() != right.tournament())
        throw DomainError("cannot interleave a graph model with a tournament model");
    const bool tour = left.tournament();
    PartialIso iso;
    std::set<Int> matched_left, matched_right;
    for (std::uint32_t k = 0; k < steps; ++k) {
        bool forth = (k % 2 == 0);
        const CountableOracle& from = forth ? left : right;
        const CountableOracle& to = forth ? right : left;
        const std::set<Int>& matched_from = forth ? matched_left : matched_right;
        try {
            Int v = least_unmatched(from, matched_from);
            std::vector<Int> A, B;
            for (const auto& [l, r] : iso.pairs) {
                Int same = forth ? l : r;
                Int other = forth ? r : l;
                if (tour) {
                    // arcs into v must map to arcs into the witness
                    if (from.arc(same, v))
                        A.push_back(other);
                    else
                        B.push_back(other);
                } else {
                    if (from.adjacent(same, v))
                        A.push_back(other);
                    else
                        B.push_back(other);
                }
            }
            Int w = to.find_witness(A, B, budget);
            iso.pairs.emplace_back(forth ? v : w, forth ? w : v);
            iso.forth.push_back(forth);
            matched_left.insert(iso.pairs.back().first);
            matched_right.insert(iso.pairs.back().second);
            iso.steps_completed = k + 1;
        } catch (const BudgetError& e) {
            if (rethrow) throw;
            iso.stopped_reason = std::string("step ") + std::to_string(k + 1) + ": " + e.what();
            return iso;
        }
    }
    return iso;
}

} // namespace

PartialIso build_iso(const CountableOracle& left, const CountableOracle& right,
                     std::uint32_t steps, const SearchBudget& budget) {
    return run(left, right, steps, budget, true);
}

PartialIso build_iso_partial(const CountableOracle& left, const CountableOracle& right,
                             std::uint32_t steps, const SearchBudget& budget) {
    return run(left, right, steps, budget, false);
}

void verify_iso(const CountableOracle& left, const CountableOracle& right,
                const PartialIso& iso) {
    if (left.tournament() != right.tournament())
        throw DomainError("cannot interleave a graph model with a tournament model");
    const bool tour = left.tournament();
    const auto& ps = iso.pairs;
    std::set<Int> ls, rs;
    for (const auto& [l, r] : ps) {
        if (!ls.insert(l).second)
            throw CheckFailure("left vertex " + to_string(l) + " is matched twice");
        if (!rs.insert(r).second)
            throw CheckFailure("right vertex " + to_string(r) + " is matched twice");
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (tour) {
                if (left.arc(ps[i].first, ps[j].first) != right.arc(ps[i].second, ps[j].second))
                    throw CheckFailure("arc direction disagrees on pairs " + std::to_string(i) +
                                       ", " + std::to_string(j));
            } else {
                if (left.adjacent(ps[i].first, ps[j].first) !=
                    right.adjacent(ps[i].second, ps[j].second))
                    throw CheckFailure("adjacency disagrees on pairs " + std::to_string(i) + ", " +
                                       std::to_string(j));
            }
        }
}

} // namespace radoforge
