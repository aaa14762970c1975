#pragma once

#include "radoforge/characters.hpp"
#include "radoforge/fields.hpp"

namespace radoforge {

// Dense undirected graph without loops, up to the configured order cap.
// Optionally labelled by field elements (vertex i <-> element of index i).
class FiniteGraph {
public:
    FiniteGraph() = default;
    explicit FiniteGraph(std::uint32_t n, const SizeCaps& caps = {});

    std::uint32_t n() const { return n_; }
    bool adjacent(std::uint32_t u, std::uint32_t v) const;
    void set_edge(std::uint32_t u, std::uint32_t v, bool on); // u != v
    void toggle_edge(std::uint32_t u, std::uint32_t v);

    std::uint32_t degree(std::uint32_t u) const;
    std::uint64_t edge_count() const;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const; // sorted, u < v
    // |N(u) intersect N(v)|, excluding u and v themselves.
    std::uint32_t common_neighbors(std::uint32_t u, std::uint32_t v) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<FieldElem>& labels() const { return labels_; }
    void set_labels(std::vector<FieldElem> labels);

    bool operator==(const FiniteGraph& other) const;

private:
    std::uint32_t n_ = 0;
    std::uint32_t words_ = 0; // 64-bit words per adjacency row
    std::vector<std::uint64_t> bits_;
    std::vector<FieldElem> labels_;

    std::size_t word(std::uint32_t u, std::uint32_t v) const {
        return static_cast<std::size_t>(u) * words_ + v / 64;
    }
};

// Complete antisymmetric digraph: exactly one arc per unordered pair.
class Tournament {
public:
    Tournament() = default;
    explicit Tournament(std::uint32_t n, const SizeCaps& caps = {});

    std::uint32_t n() const { return n_; }
    bool arc(std::uint32_t u, std::uint32_t v) const; // u -> v
    void set_arc(std::uint32_t u, std::uint32_t v);   // orients the pair u -> v
    std::uint32_t out_degree(std::uint32_t u) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<FieldElem>& labels() const { return labels_; }
    void set_labels(std::vector<FieldElem> labels);

    // Every unordered pair carries exactly one arc.
    bool complete() const;

private:
    std::uint32_t n_ = 0;
    std::uint32_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<FieldElem> labels_;
};

struct SrgParams {
    std::uint64_t v = 0;
    std::uint64_t k = 0;
    std::uint64_t lambda = 0;
    std::uint64_t mu = 0;
};

// Paley graph P(q): x ~ y iff x - y is a nonzero square; requires q = 1 mod 4.
FiniteGraph paley_graph(const FieldCtxPtr& ctx);

// Generalised Paley graph P_d(q): x ~ y iff x - y is a nonzero d-th power.
// Requires d | q-1 and, for odd q, (q-1)/d even; any d | q-1 for p = 2.
FiniteGraph gen_paley_graph(const FieldCtxPtr& ctx, std::uint64_t d);

// Paley tournament T(q): arc x -> y iff y - x is a nonzero square; q = 3 mod 4.
Tournament paley_tournament(const FieldCtxPtr& ctx);

// Verifies strong regularity by counting and returns (v, k, lambda, mu).
SrgParams srg_params(const FiniteGraph& g);

enum class SubfieldClass { FullCopy, Complete, Other };

const char* subfield_class_name(SubfieldClass c);

// Classifies the subgraph of P_d(big) induced on the embedded image of the
// small field: FullCopy when it equals P_d(small) edge-for-edge under the
// embedding, Complete when all pairs become adjacent.
SubfieldClass subfield_induced(EmbeddingLattice& lattice, const FieldCtxPtr& small,
                               const FieldCtxPtr& big, std::uint64_t d);

} // namespace radoforge
