#pragma once

#include <optional>

#include "radoforge/paley.hpp"

namespace radoforge {

// Element of ADL1(q): the permutation t -> a * t^(p^gamma) + b of GF(q) with
// a a nonzero square. By Carlitz's theorem these are exactly the
// automorphisms of the Paley graph P(q).
struct AffineSemilinearMap {
    FieldElem a;
    FieldElem b;
    std::uint32_t gamma = 0; // Frobenius power, in [0, e)
};

// Image of t under the map. gamma must be < e; chi(a) = +1 is not checked
// here, only in apply_map.
FieldElem apply_semilinear(const AffineSemilinearMap& m, const FieldElem& t);

// Vertex permutation induced by m on a field-labelled graph whose vertices
// enumerate GF(q). Requires chi(a) = +1; asserts edge preservation pair by
// pair, so a non-automorphism surfaces as a CheckFailure.
std::vector<std::uint32_t> apply_map(const AffineSemilinearMap& m, const FiniteGraph& g);

// |ADL1(q)| = q * ((q-1)/2) * e. Requires q = 1 mod 4.
Int adl1_order(const FieldCtxPtr& ctx);

// All elements of ADL1(q), ordered by (a, b, gamma) with a and b in element
// index order. Requires the group order to stay enumerable.
std::vector<AffineSemilinearMap> adl1_enumerate(const FieldCtxPtr& ctx);

// Group element drawn from a splitmix64 stream: a = t^2 for a nonzero t,
// b arbitrary, gamma in [0, e).
AffineSemilinearMap random_adl1_map(const FieldCtxPtr& ctx, std::uint64_t& state);

// Frobenius powers stored per level, as (level, power) pairs, are consistent
// under restriction when for every stored e dividing a stored f the level-f
// power reduces mod e to the level-e power. This is the finite-level
// representation of a compatible Galois family.
bool galois_restriction_consistent(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& powers);

// Exact |Aut(G)| by backtracking over partial vertex maps, pruned by degree
// and neighbour-degree signatures. max_order caps the number of vertices,
// not the group size.
Int aut_bruteforce(const FiniteGraph& g, std::uint32_t max_order = 40);

// Same search, stopping at the first full map that is not the identity.
bool has_nontrivial_automorphism(const FiniteGraph& g, std::uint32_t max_order = 40);

// Number of vertices w outside {u, v} adjacent to exactly one of u and v.
// Symmetric in u and v; requires u != v.
std::uint32_t delta_uv(const FiniteGraph& g, std::uint32_t u, std::uint32_t v);

struct AsymmetryReport {
    std::uint64_t n = 0;
    std::uint64_t delta_min = 0;
    std::uint64_t bound = 0;             // floor((n-1)/2)
    std::optional<std::uint64_t> a_of_g; // exact A(G), when requested
    bool is_delta_graph = false;         // delta_min == bound
};

// Computes min over all pairs of delta_uv, checks the Erdos-Renyi bound
// min <= floor((n-1)/2) (a theorem; a violation is a CheckFailure) and flags
// graphs achieving equality. with_asymmetry additionally fills a_of_g via
// asymmetry_A and checks A(G) <= delta_min. Requires n >= 2.
AsymmetryReport min_delta_bound_check(const FiniteGraph& g, bool with_asymmetry = false);

// A(G): least number of edge toggles after which the graph has a
// non-identity automorphism. Breadth-first over the toggle count, toggle
// sets enumerated lexicographically; capped at n <= 7. Graphs with fewer
// than two vertices get 0.
std::uint64_t asymmetry_A(const FiniteGraph& g);

} // namespace radoforge
