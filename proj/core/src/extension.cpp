#include "radoforge/extension.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace radoforge {

void ExtensionQuery::validate() const {
    std::set<Int> seen(A.begin(), A.end());
    if (seen.size() != A.size()) throw DomainError("A contains a repeated vertex");
    for (const Int& b : B) {
        if (!seen.insert(b).second)
            throw DomainError("A and B must be disjoint; " + to_string(b) + " repeats");
    }
}

Int find_witness(const CountableOracle& model, const ExtensionQuery& query,
                 const SearchBudget& budget) {
    query.validate();
    return model.find_witness(query.A, query.B, budget);
}

WitnessReport count_witnesses(const FieldCtxPtr& ctx, std::uint64_t d,
                              const std::vector<FieldElem>& A, const std::vector<FieldElem>& B) {
    const auto& pp = ctx->size();
    if (pp.q64 == 0 || pp.q64 > ctx->caps().max_enum)
        throw BudgetError("witness census needs full enumeration of GF(" + to_string(pp.q) + ")");
    for (const FieldElem& a : A)
        if (a.ctx() != ctx) throw DomainError("A contains an element of a different field");
    for (const FieldElem& b : B)
        if (b.ctx() != ctx) throw DomainError("B contains an element of a different field");
    std::set<std::uint64_t> used;
    for (const FieldElem& a : A) used.insert(a.index64());
    for (const FieldElem& b : B) used.insert(b.index64());
    if (used.size() != A.size() + B.size())
        throw DomainError("A and B must be disjoint and repeat-free");

    WitnessReport rep;
    rep.p = pp.p;
    rep.e = pp.e;
    rep.d = d;
    rep.n = static_cast<std::uint32_t>(A.size() + B.size());
    rep.q = pp.q;
    if (rep.n > 16) throw DomainError("witness census supports at most 16 constraints");

    Character chi(ctx, d);
    Int dn = 1;
    for (std::uint32_t i = 0; i < rep.n; ++i) dn *= d;

    Int S = 0, t = 0;
    const std::uint64_t q = pp.q64;
    for (std::uint64_t xi = 0; xi < q; ++xi) {
        FieldElem x = ctx->element_at(Int(xi));
        bool boundary = used.count(xi) != 0;
        bool is_witness = !boundary;
        // factor values: A side is sum_j chi^j(x-a), B side its complement
        Int prod = 1;
        for (const FieldElem& a : A) {
            if (x == a) continue; // the j = 0 term alone survives
            if (chi.in_kernel(x - a)) {
                prod *= d;
            } else {
                prod = 0;
                is_witness = false;
                break;
            }
        }
        for (const FieldElem& b : B) {
            if (prod.is_zero() && !boundary) break;
            if (x == b) {
                prod *= d - 1;
            } else if (chi.in_kernel(x - b)) {
                prod = 0;
                is_witness = false;
            } else {
                prod *= d;
            }
        }
        if (is_witness) {
            // confirmed adjacent to all of A and none of B, off the boundary
            ++S;
            if (!rep.witness) rep.witness = x;
            if (prod != dn)
                throw CheckFailure("product formula missed a witness at index " +
                                   std::to_string(xi));
        } else if (!boundary && !prod.is_zero()) {
            throw CheckFailure("product formula overcounted at index " + std::to_string(xi));
        }
        t += prod;
    }
    rep.S_count = S;
    rep.s = dn * S;
    rep.t = t;
    return rep;
}

BTReport bt_check(const WitnessReport& report) {
    if (report.d != 2) throw DomainError("the bracket is stated for d = 2");
    BTReport out;
    out.S_count = report.S_count;
    double q = report.q.convert_to<double>();
    double n = report.n;
    out.expected = q / std::pow(2.0, n);
    out.deviation = std::abs(report.S_count.convert_to<double>() - out.expected);
    out.bound = ((n - 2 + std::pow(2.0, 1 - n)) * std::sqrt(q) + n) / 2.0;
    out.holds = out.deviation <= out.bound + kBoundTolerance;
    return out;
}

std::vector<AsymptoticRow> asymptotic_check(EmbeddingLattice& lattice, std::uint64_t d,
                                            const std::vector<Int>& A_idx,
                                            const std::vector<Int>& B_idx,
                                            const std::vector<std::uint32_t>& levels) {
    auto base = lattice.level(1);
    std::vector<FieldElem> A1, B1;
    for (const Int& i : A_idx) A1.push_back(base->element_at(i));
    for (const Int& i : B_idx) B1.push_back(base->element_at(i));
    std::vector<AsymptoticRow> rows;
    for (std::uint32_t e : levels) {
        auto ctx = lattice.level(e);
        std::vector<FieldElem> A, B;
        for (const FieldElem& a : A1) A.push_back(lattice.embed(a, e));
        for (const FieldElem& b : B1) B.push_back(lattice.embed(b, e));
        WitnessReport rep = count_witnesses(ctx, d, A, B);
        AsymptoticRow row;
        row.e = e;
        row.q = rep.q;
        row.S_count = rep.S_count;
        row.t_minus_s = rep.t - rep.s;
        double density = std::pow(1.0 / d, static_cast<double>(A.size())) *
                         std::pow((d - 1.0) / d, static_cast<double>(B.size()));
        row.ratio = rep.S_count.convert_to<double>() / (rep.q.convert_to<double>() * density);
        rows.push_back(row);
    }
    return rows;
}

} // namespace radoforge
