#pragma once

#include <optional>

#include "radoforge/characters.hpp"
#include "radoforge/models.hpp"

namespace radoforge {

// One-step extension constraints: find x adjacent to everything in A and to
// nothing in B (tournaments: receiving from A, sending to B).
struct ExtensionQuery {
    std::vector<Int> A;
    std::vector<Int> B;

    std::uint32_t n() const { return static_cast<std::uint32_t>(A.size() + B.size()); }
    void validate() const; // no repeats, A and B disjoint
};

// Witness through the model's own search; budget exhaustion propagates.
Int find_witness(const CountableOracle& model, const ExtensionQuery& query,
                 const SearchBudget& budget = {});

// Exhaustive census of witnesses for (A, B) over one finite field, with the
// d-th power difference relation. Alongside the direct count |S| the census
// accumulates t, the integer value of the product formula
//   t = sum_x prod_{a in A} sum_j chi^j(x-a) * prod_{b in B} (d - sum_j chi^j(x-b)),
// whose x-th term must equal d^n exactly on witnesses (checked pointwise,
// CheckFailure otherwise) and whose deviation t - d^n|S| collects the
// boundary terms at x in A u B, an integer independent of the field level.
struct WitnessReport {
    std::uint64_t p = 0;
    std::uint32_t e = 1;
    std::uint64_t d = 2;
    std::uint32_t n = 0;
    Int q;
    Int S_count;
    Int s; // d^n * S_count
    Int t;
    std::optional<FieldElem> witness; // least index, if any
};

WitnessReport count_witnesses(const FieldCtxPtr& ctx, std::uint64_t d,
                              const std::vector<FieldElem>& A, const std::vector<FieldElem>& B);

// Two-sided bracket on the witness count for d = 2:
//   | |S| - q/2^n | <= ((n - 2 + 2^(1-n)) sqrt(q) + n) / 2.
struct BTReport {
    Int S_count;
    double expected = 0; // q / 2^n
    double deviation = 0;
    double bound = 0;
    bool holds = false; // deviation <= bound + kBoundTolerance
};

BTReport bt_check(const WitnessReport& report);

// The same base query swept up a tower: witnesses are recounted in GF(p^e)
// for each requested level with A and B embedded. The ratio divides |S| by
// the independence prediction q (1/d)^|A| ((d-1)/d)^|B| and tends to 1.
struct AsymptoticRow {
    std::uint32_t e = 1;
    Int q;
    Int S_count;
    Int t_minus_s;
    double ratio = 0;
};

std::vector<AsymptoticRow> asymptotic_check(EmbeddingLattice& lattice, std::uint64_t d,
                                            const std::vector<Int>& A_idx,
                                            const std::vector<Int>& B_idx,
                                            const std::vector<std::uint32_t>& levels);

} // namespace radoforge
