#include "radoforge/paley.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace radoforge {

FiniteGraph::FiniteGraph(std::uint32_t n, const SizeCaps& caps) : n_(n) {
    if (n > caps.max_graph_order) {
        throw BudgetError("FiniteGraph: order exceeds the dense adjacency cap");
    }
    words_ = (n + 63) / 64;
    bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

bool FiniteGraph::adjacent(std::uint32_t u, std::uint32_t v) const {
    if (u >= n_ || v >= n_) throw DomainError("adjacent: vertex out of range");
    if (u == v) return false;
    return (bits_[word(u, v)] >> (v % 64)) & 1;
}

void FiniteGraph::set_edge(std::uint32_t u, std::uint32_t v, bool on) {
    if (u >= n_ || v >= n_) throw DomainError("set_edge: vertex out of range");
    if (u == v) throw DomainError("set_edge: loops are not allowed");
    const std::uint64_t mu = std::uint64_t(1) << (v % 64);
    const std::uint64_t mv = std::uint64_t(1) << (u % 64);
    if (on) {
        bits_[word(u, v)] |= mu;
        bits_[word(v, u)] |= mv;
    } else {
        bits_[word(u, v)] &= ~mu;
        bits_[word(v, u)] &= ~mv;
    }
}

void FiniteGraph::toggle_edge(std::uint32_t u, std::uint32_t v) {
    set_edge(u, v, !adjacent(u, v));
}

std::uint32_t FiniteGraph::degree(std::uint32_t u) const {
    if (u >= n_) throw DomainError("degree: vertex out of range");
    std::uint32_t acc = 0;
    for (std::uint32_t w = 0; w < words_; ++w) {
        acc += std::popcount(bits_[static_cast<std::size_t>(u) * words_ + w]);
    }
    return acc;
}

std::uint64_t FiniteGraph::edge_count() const {
    std::uint64_t acc = 0;
    for (std::uint32_t u = 0; u < n_; ++u) acc += degree(u);
    return acc / 2;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> FiniteGraph::edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t u = 0; u < n_; ++u) {
        for (std::uint32_t v = u + 1; v < n_; ++v) {
            if (adjacent(u, v)) out.emplace_back(u, v);
        }
    }
    return out;
}

std::uint32_t FiniteGraph::common_neighbors(std::uint32_t u, std::uint32_t v) const {
    if (u >= n_ || v >= n_) throw DomainError("common_neighbors: vertex out of range");
    std::uint32_t acc = 0;
    const std::uint64_t* ru = bits_.data() + static_cast<std::size_t>(u) * words_;
    const std::uint64_t* rv = bits_.data() + static_cast<std::size_t>(v) * words_;
    for (std::uint32_t w = 0; w < words_; ++w) acc += std::popcount(ru[w] & rv[w]);
    // loop-free rows never mark u or v themselves, so no exclusion needed
    return acc;
}

void FiniteGraph::set_labels(std::vector<FieldElem> labels) {
    if (labels.size() != n_) throw DomainError("set_labels: label count != n");
    labels_ = std::move(labels);
}

bool FiniteGraph::operator==(const FiniteGraph& other) const {
    return n_ == other.n_ && bits_ == other.bits_;
}

Tournament::Tournament(std::uint32_t n, const SizeCaps& caps) : n_(n) {
    if (n > caps.max_graph_order) {
        throw BudgetError("Tournament: order exceeds the dense adjacency cap");
    }
    words_ = (n + 63) / 64;
    bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
}

bool Tournament::arc(std::uint32_t u, std::uint32_t v) const {
    if (u >= n_ || v >= n_) throw DomainError("arc: vertex out of range");
    if (u == v) return false;
    return (bits_[static_cast<std::size_t>(u) * words_ + v / 64] >> (v % 64)) & 1;
}

void Tournament::set_arc(std::uint32_t u, std::uint32_t v) {
    if (u >= n_ || v >= n_) throw DomainError("set_arc: vertex out of range");
    if (u == v) throw DomainError("set_arc: loops are not allowed");
    bits_[static_cast<std::size_t>(u) * words_ + v / 64] |= std::uint64_t(1) << (v % 64);
    bits_[static_cast<std::size_t>(v) * words_ + u / 64] &= ~(std::uint64_t(1) << (u % 64));
}

std::uint32_t Tournament::out_degree(std::uint32_t u) const {
    if (u >= n_) throw DomainError("out_degree: vertex out of range");
    std::uint32_t acc = 0;
    for (std::uint32_t w = 0; w < words_; ++w) {
        acc += std::popcount(bits_[static_cast<std::size_t>(u) * words_ + w]);
    }
    return acc;
}

void Tournament::set_labels(std::vector<FieldElem> labels) {
    if (labels.size() != n_) throw DomainError("set_labels: label count != n");
    labels_ = std::move(labels);
}

bool Tournament::complete() const {
    for (std::uint32_t u = 0; u < n_; ++u) {
        for (std::uint32_t v = u + 1; v < n_; ++v) {
            if (arc(u, v) == arc(v, u)) return false;
        }
    }
    return true;
}

namespace {

// Bitmap over element indices of the nonzero d-th powers (the index-d
// subgroup D), plus the element list in index order.
struct PowerClass {
    std::vector<FieldElem> elems;
    std::vector<bool> in_d;
};

PowerClass dth_power_class(const FieldCtxPtr& ctx, std::uint64_t d) {
    const std::uint64_t q = ctx->size().q64;
    if (q == 0 || q > ctx->caps().max_enum) {
        throw BudgetError("graph construction: field order exceeds the enumeration cap");
    }
    PowerClass pc;
    pc.elems.reserve(q);
    pc.in_d.assign(q, false);
    const Int cof = (ctx->size().q - 1) / d;
    for (std::uint64_t i = 0; i < q; ++i) {
        pc.elems.push_back(ctx->element_at(Int(i)));
        if (i != 0) pc.in_d[i] = pow(pc.elems[i], cof).is_one();
    }
    return pc;
}

void require_gen_paley_admissible(const FieldCtxPtr& ctx, std::uint64_t d) {
    const Int qm1 = ctx->size().q - 1;
    if (d < 1 || qm1 % d != 0) {
        throw DomainError("generalised Paley graph: d must divide q-1");
    }
    if (ctx->size().p != 2) {
        const Int order = qm1 / d;
        if (order % 2 != 0) {
            throw DomainError(
                "generalised Paley graph: (q-1)/d is odd, so D is not symmetric "
                "(-1 is not a d-th power); required: (q-1)/d even or p = 2");
        }
    }
}

} // namespace

FiniteGraph gen_paley_graph(const FieldCtxPtr& ctx, std::uint64_t d) {
    require_gen_paley_admissible(ctx, d);
    const std::uint64_t q = ctx->size().q64;
    if (q > ctx->caps().max_graph_order) {
        throw BudgetError("generalised Paley graph: q exceeds the dense adjacency cap");
    }
    PowerClass pc = dth_power_class(ctx, d);
    FiniteGraph g(static_cast<std::uint32_t>(q), ctx->caps());
    for (std::uint32_t u = 0; u < q; ++u) {
        for (std::uint32_t v = u + 1; v < q; ++v) {
            if (pc.in_d[(pc.elems[v] - pc.elems[u]).index64()]) g.set_edge(u, v, true);
        }
    }
    g.set_labels(std::move(pc.elems));
    return g;
}

FiniteGraph paley_graph(const FieldCtxPtr& ctx) {
    if (ctx->size().q % 4 != 1) {
        std::ostringstream os;
        os << "Paley graph: q = 1 (mod 4) required; q = " << ctx->size().q.str()
           << " has q = " << Int(ctx->size().q % 4).str() << " (mod 4)";
        throw DomainError(os.str());
    }
    return gen_paley_graph(ctx, 2);
}

Tournament paley_tournament(const FieldCtxPtr& ctx) {
    if (ctx->size().q % 4 != 3) {
        std::ostringstream os;
        os << "Paley tournament: q = 3 (mod 4) required; q = " << ctx->size().q.str()
           << " has q = " << Int(ctx->size().q % 4).str() << " (mod 4)";
        throw DomainError(os.str());
    }
    const std::uint64_t q = ctx->size().q64;
    if (q > ctx->caps().max_graph_order) {
        throw BudgetError("Paley tournament: q exceeds the dense adjacency cap");
    }
    PowerClass pc = dth_power_class(ctx, 2);
    Tournament t(static_cast<std::uint32_t>(q), ctx->caps());
    for (std::uint32_t u = 0; u < q; ++u) {
        for (std::uint32_t v = u + 1; v < q; ++v) {
            // arc x -> y iff y - x is a nonzero square; exactly one of the two
            // differences is a square because -1 is not (q = 3 mod 4)
            if (pc.in_d[(pc.elems[v] - pc.elems[u]).index64()]) {
                t.set_arc(u, v);
            } else {
                t.set_arc(v, u);
            }
        }
    }
    t.set_labels(std::move(pc.elems));
    return t;
}

SrgParams srg_params(const FiniteGraph& g) {
    const std::uint32_t n = g.n();
    if (n < 2) throw DomainError("srg_params: graph too small");
    const std::uint32_t k = g.degree(0);
    for (std::uint32_t u = 1; u < n; ++u) {
        if (g.degree(u) != k) throw DomainError("srg_params: not strongly regular (irregular)");
    }
    std::int64_t lambda = -1, mu = -1;
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::uint32_t v = u + 1; v < n; ++v) {
            const std::int64_t c = g.common_neighbors(u, v);
            if (g.adjacent(u, v)) {
                if (lambda < 0) lambda = c;
                if (c != lambda) {
                    throw DomainError("srg_params: not strongly regular (lambda not constant)");
                }
            } else {
                if (mu < 0) mu = c;
                if (c != mu) {
                    throw DomainError("srg_params: not strongly regular (mu not constant)");
                }
            }
        }
    }
    if (lambda < 0) lambda = 0; // empty graph: no adjacent pairs seen
    if (mu < 0) mu = 0;         // complete graph: no non-adjacent pairs seen
    SrgParams p;
    p.v = n;
    p.k = k;
    p.lambda = static_cast<std::uint64_t>(lambda);
    p.mu = static_cast<std::uint64_t>(mu);
    // standard counting identity; cannot fail for constant counts
    if (p.k * (p.k - p.lambda - 1) != (p.v - p.k - 1) * p.mu) {
        throw CheckFailure("srg_params: identity k(k-lambda-1) = (v-k-1)mu failed");
    }
    return p;
}

const char* subfield_class_name(SubfieldClass c) {
    switch (c) {
        case SubfieldClass::FullCopy: return "FullCopy";
        case SubfieldClass::Complete: return "Complete";
        default: return "Other";
    }
}

SubfieldClass subfield_induced(EmbeddingLattice& lattice, const FieldCtxPtr& small,
                               const FieldCtxPtr& big, std::uint64_t d) {
    const std::uint32_t es = small->size().e;
    const std::uint32_t eb = big->size().e;
    if (small->size().p != big->size().p || lattice.p() != small->size().p) {
        throw DomainError("subfield_induced: mismatched characteristic");
    }
    if (eb % es != 0) throw DomainError("subfield_induced: small degree must divide big degree");
    if (lattice.level(es).get() != small.get() || lattice.level(eb).get() != big.get()) {
        throw DomainError("subfield_induced: contexts must be levels of the given lattice");
    }
    require_gen_paley_admissible(small, d);
    require_gen_paley_admissible(big, d);

    const std::uint64_t qs = small->size().q64;
    if (qs == 0 || qs > small->caps().max_graph_order) {
        throw BudgetError("subfield_induced: small field exceeds the dense adjacency cap");
    }
    const Int cof_big = (big->size().q - 1) / d;

    // induced adjacency on the embedded image, compared with P_d(small)
    const FiniteGraph ps = gen_paley_graph(small, d);
    std::vector<FieldElem> image;
    image.reserve(qs);
    for (std::uint64_t i = 0; i < qs; ++i) {
        image.push_back(lattice.embed(small->element_at(Int(i)), eb));
    }
    bool all_adjacent = true;
    bool matches_small = true;
    for (std::uint32_t u = 0; u < qs; ++u) {
        for (std::uint32_t v = u + 1; v < qs; ++v) {
            const bool adj = pow(image[v] - image[u], cof_big).is_one();
            if (!adj) all_adjacent = false;
            if (adj != ps.adjacent(u, v)) matches_small = false;
        }
    }
    if (matches_small) return SubfieldClass::FullCopy;
    if (all_adjacent) return SubfieldClass::Complete;
    return SubfieldClass::Other;
}

} // namespace radoforge
