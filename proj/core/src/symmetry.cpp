#include "radoforge/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace radoforge {

FieldElem apply_semilinear(const AffineSemilinearMap& m, const FieldElem& t) {
    return m.a * frobenius(t, m.gamma) + m.b;
}

std::vector<std::uint32_t> apply_map(const AffineSemilinearMap& m, const FiniteGraph& g) {
    if (!g.has_labels()) throw DomainError("graph carries no field labels");
    const FieldCtxPtr& ctx = g.labels().front().ctx();
    const PrimePower& pp = ctx->size();
    if (pp.q64 == 0 || g.n() != pp.q64)
        throw DomainError("vertex labels must enumerate the whole field");
    if (m.gamma >= pp.e) throw DomainError("Frobenius power must be below the field degree");
    if (m.a.is_zero() || !pow(m.a, (pp.q - 1) / 2).is_one())
        throw DomainError("map coefficient is not a nonzero square");

    std::unordered_map<std::uint64_t, std::uint32_t> pos;
    pos.reserve(g.n());
    for (std::uint32_t i = 0; i < g.n(); ++i)
        if (!pos.emplace(g.labels()[i].index64(), i).second)
            throw DomainError("duplicate vertex label");

    std::vector<std::uint32_t> perm(g.n());
    for (std::uint32_t i = 0; i < g.n(); ++i) {
        const auto it = pos.find(apply_semilinear(m, g.labels()[i]).index64());
        if (it == pos.end()) throw CheckFailure("map image escapes the vertex set");
        perm[i] = it->second;
    }
    for (std::uint32_t u = 0; u < g.n(); ++u)
        for (std::uint32_t v = u + 1; v < g.n(); ++v)
            if (g.adjacent(u, v) != g.adjacent(perm[u], perm[v]))
                throw CheckFailure("map fails to preserve the pair (" + std::to_string(u) +
                                   ", " + std::to_string(v) + ")");
    return perm;
}

Int adl1_order(const FieldCtxPtr& ctx) {
    const PrimePower& pp = ctx->size();
    if (pp.q % 4 != 1) throw DomainError("group requires q = 1 mod 4");
    return pp.q * ((pp.q - 1) / 2) * pp.e;
}

std::vector<AffineSemilinearMap> adl1_enumerate(const FieldCtxPtr& ctx) {
    const Int order = adl1_order(ctx);
    if (order > 10'000'000) throw DomainError("group too large to enumerate");
    const PrimePower& pp = ctx->size();

    std::set<std::uint64_t> squares;
    for (std::uint64_t i = 1; i < pp.q64; ++i) {
        const FieldElem x = ctx->element_at(i);
        squares.insert((x * x).index64());
    }
    if (squares.size() != (pp.q64 - 1) / 2)
        throw CheckFailure("square count differs from (q-1)/2");

    std::vector<AffineSemilinearMap> maps;
    maps.reserve(static_cast<std::size_t>(order));
    for (std::uint64_t ai : squares)
        for (std::uint64_t bi = 0; bi < pp.q64; ++bi)
            for (std::uint32_t gamma = 0; gamma < pp.e; ++gamma)
                maps.push_back({ctx->element_at(ai), ctx->element_at(bi), gamma});
    return maps;
}

AffineSemilinearMap random_adl1_map(const FieldCtxPtr& ctx, std::uint64_t& state) {
    const PrimePower& pp = ctx->size();
    if (pp.q % 4 != 1) throw DomainError("group requires q = 1 mod 4");
    if (pp.q64 == 0) throw DomainError("field too large for sampling");
    const FieldElem t = ctx->element_at(1 + splitmix64(state) % (pp.q64 - 1));
    const FieldElem b = ctx->element_at(splitmix64(state) % pp.q64);
    const auto gamma = static_cast<std::uint32_t>(splitmix64(state) % pp.e);
    return {t * t, b, gamma};
}

bool galois_restriction_consistent(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& powers) {
    for (const auto& [e, ge] : powers)
        if (e == 0 || ge >= e) throw DomainError("power must be below its level");
    for (const auto& [e, ge] : powers)
        for (const auto& [f, gf] : powers)
            if (f % e == 0 && gf % e != ge) return false;
    return true;
}

namespace {

// Backtracking over partial vertex maps in vertex order. Candidates must
// match the degree and the sorted neighbour-degree signature of the source
// vertex and agree with every already-mapped vertex on adjacency.
struct AutSearch {
    const FiniteGraph& g;
    std::uint32_t n;
    std::vector<std::uint32_t> deg;
    std::vector<std::vector<std::uint32_t>> sig;
    std::vector<std::uint32_t> image;
    std::vector<bool> used;
    Int count{0};
    bool early_exit = false;
    bool found_nonidentity = false;

    explicit AutSearch(const FiniteGraph& graph) : g(graph), n(graph.n()) {
        deg.resize(n);
        for (std::uint32_t v = 0; v < n; ++v) deg[v] = g.degree(v);
        sig.resize(n);
        for (std::uint32_t v = 0; v < n; ++v) {
            for (std::uint32_t w = 0; w < n; ++w)
                if (w != v && g.adjacent(v, w)) sig[v].push_back(deg[w]);
            std::sort(sig[v].begin(), sig[v].end());
        }
        image.assign(n, 0);
        used.assign(n, false);
    }

    bool feasible(std::uint32_t pos, std::uint32_t cand) const {
        if (deg[pos] != deg[cand] || sig[pos] != sig[cand]) return false;
        for (std::uint32_t j = 0; j < pos; ++j)
            if (g.adjacent(pos, j) != g.adjacent(cand, image[j])) return false;
        return true;
    }

    void run(std::uint32_t pos) {
        if (pos == n) {
            ++count;
            for (std::uint32_t v = 0; v < n; ++v)
                if (image[v] != v) {
                    found_nonidentity = true;
                    break;
                }
            return;
        }
        for (std::uint32_t cand = 0; cand < n; ++cand) {
            if (used[cand] || !feasible(pos, cand)) continue;
            used[cand] = true;
            image[pos] = cand;
            run(pos + 1);
            used[cand] = false;
            if (early_exit && found_nonidentity) return;
        }
    }
};

} // namespace

Int aut_bruteforce(const FiniteGraph& g, std::uint32_t max_order) {
    if (g.n() > max_order) throw DomainError("graph order exceeds the search cap");
    AutSearch search(g);
    search.run(0);
    return search.count;
}

bool has_nontrivial_automorphism(const FiniteGraph& g, std::uint32_t max_order) {
    if (g.n() > max_order) throw DomainError("graph order exceeds the search cap");
    AutSearch search(g);
    search.early_exit = true;
    search.run(0);
    return search.found_nonidentity;
}

std::uint32_t delta_uv(const FiniteGraph& g, std::uint32_t u, std::uint32_t v) {
    if (u >= g.n() || v >= g.n()) throw DomainError("vertex out of range");
    if (u == v) throw DomainError("vertices must be distinct");
    std::uint32_t count = 0;
    for (std::uint32_t w = 0; w < g.n(); ++w)
        if (w != u && w != v && g.adjacent(u, w) != g.adjacent(v, w)) ++count;
    return count;
}

AsymmetryReport min_delta_bound_check(const FiniteGraph& g, bool with_asymmetry) {
    const std::uint32_t n = g.n();
    if (n < 2) throw DomainError("order must be at least 2");
    AsymmetryReport rep;
    rep.n = n;
    rep.bound = (n - 1) / 2;
    std::uint32_t best = n;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v) best = std::min(best, delta_uv(g, u, v));
    rep.delta_min = best;
    if (rep.delta_min > rep.bound)
        throw CheckFailure("minimum neighbourhood difference " + std::to_string(best) +
                           " exceeds floor((n-1)/2) = " + std::to_string(rep.bound));
    rep.is_delta_graph = rep.delta_min == rep.bound;
    if (with_asymmetry) {
        rep.a_of_g = asymmetry_A(g);
        if (*rep.a_of_g > rep.delta_min)
            throw CheckFailure("edge-change distance exceeds the minimum neighbourhood difference");
    }
    return rep;
}

std::uint64_t asymmetry_A(const FiniteGraph& g) {
    const std::uint32_t n = g.n();
    if (n > 7) throw DomainError("asymmetry search is capped at 7 vertices");
    // No vertex pair exists below order 2; pinned to 0.
    if (n < 2) return 0;
    if (has_nontrivial_automorphism(g)) return 0;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    const std::size_t m = pairs.size();

    FiniteGraph work = g;
    const std::uint64_t bound = (n - 1) / 2;
    for (std::uint64_t k = 1; k <= bound; ++k) {
        std::vector<std::size_t> c(k);
        std::iota(c.begin(), c.end(), 0);
        while (true) {
            for (std::size_t idx : c) work.toggle_edge(pairs[idx].first, pairs[idx].second);
            const bool symmetric = has_nontrivial_automorphism(work);
            for (std::size_t idx : c) work.toggle_edge(pairs[idx].first, pairs[idx].second);
            if (symmetric) return k;

            std::size_t i = k;
            while (i > 0 && c[i - 1] == m - k + (i - 1)) --i;
            if (i == 0) break;
            ++c[i - 1];
            for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
        }
    }
    throw CheckFailure("no symmetric graph within floor((n-1)/2) edge changes");
}

} // namespace radoforge
