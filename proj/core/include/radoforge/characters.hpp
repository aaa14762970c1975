#pragma once

#include <complex>

#include "radoforge/fields.hpp"

namespace radoforge {

// Absolute tolerance applied when an exact integer quantity is compared
// against an irrational bound after conversion to double.
inline constexpr double kBoundTolerance = 1e-6;

// chi(x) as an exponent: Root(k) means omega^k for omega = e^(2*pi*i/d);
// Zero occurs exactly at x = 0.
struct CharValue {
    bool zero = false;
    std::uint32_t k = 0; // meaningful only when !zero

    static CharValue Zero() { return {true, 0}; }
    static CharValue Root(std::uint32_t k) { return {false, k}; }
};

inline bool operator==(const CharValue& a, const CharValue& b) {
    return a.zero == b.zero && (a.zero || a.k == b.k);
}
inline bool operator!=(const CharValue& a, const CharValue& b) { return !(a == b); }

// Multiplicative character of order d on GF(q)*, d | q-1. The reference root
// is zeta = g^((q-1)/d) for g the context's primitive root; chi(x) is the
// unique Root(k) with x^((q-1)/d) = zeta^k.
class Character {
public:
    Character(FieldCtxPtr ctx, std::uint64_t d);

    const FieldCtxPtr& ctx() const { return ctx_; }
    std::uint64_t d() const { return d_; }
    const FieldElem& reference_root() const { return zeta_powers_[1 % zeta_powers_.size()]; }

    CharValue eval(const FieldElem& x) const;
    // x is a nonzero d-th power (lies in the index-d subgroup D).
    bool in_kernel(const FieldElem& x) const;

    // table[i] = exponent of chi at the element with index i, with the value d
    // standing in for Zero. Built lazily; requires q within the enumeration cap.
    const std::vector<std::uint32_t>& exponent_table() const;

private:
    FieldCtxPtr ctx_;
    std::uint64_t d_ = 0;
    Int cofactor_; // (q-1)/d
    std::vector<FieldElem> zeta_powers_;

    mutable std::once_flag table_once_;
    mutable std::vector<std::uint32_t> table_;
};

// chi(xy) = chi(x) * chi(y), with Zero absorbing and exponents adding mod d.
bool chi_mul_check(const Character& chi, const FieldElem& x, const FieldElem& y);

// Exact value of a character sum: counts[k] terms contributed omega^k and
// zero_hits terms vanished. The complex value is materialized only on demand.
struct CyclotomicSum {
    std::uint64_t d = 2;
    std::vector<std::int64_t> counts; // size d
    std::int64_t zero_hits = 0;

    std::complex<double> value() const;
    double abs() const;
};

// sum over x in GF(q) of prod_i chi(x - roots[i]); roots distinct, nonempty.
CyclotomicSum char_sum(const Character& chi, const std::vector<FieldElem>& roots);

struct BoundReport {
    double sum_abs = 0.0;
    double bound = 0.0;
    double slack = 0.0; // bound - sum_abs
    bool holds = false; // sum_abs <= bound + kBoundTolerance
};

// |sum| <= (k-1) * sqrt(q) for k distinct roots.
BoundReport weil_check(const CyclotomicSum& sum, std::uint32_t k, const Int& q);

// One summary row of a sweep: all k-element root sets over GF(q) for one
// character order d, reduced to affine orbit representatives (see weil_sweep).
struct WeilRow {
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::uint32_t e = 0;
    std::uint64_t d = 0;
    std::uint32_t k = 0;
    std::uint64_t sets = 0; // representative sets checked
    double max_sum_abs = 0.0;
    double bound = 0.0;
    double min_slack = 0.0;
    std::uint64_t violations = 0;
};

struct WeilSweep {
    std::vector<WeilRow> rows;
    std::uint64_t sets_checked = 0;
    std::uint64_t violations = 0;
};

// Checks |sum_x prod chi(x - c_i)| <= (k-1) sqrt(q) for EVERY set of k
// distinct roots, 2 <= k <= k_max, over every prime power q <= q_max and each
// character order d in d_set with d | q-1.
//
// Coverage is exact but the loop runs over affine orbit representatives:
// substituting x -> ax + b shows the sum over roots {c_i} and over
// {(c_i - b)/a} differ by the unimodular factor chi(a)^k, so |sum| is
// constant on orbits of the affine group acting on root sets, and every set
// of k >= 2 distinct roots is affine-equivalent to one containing {0, 1}.
// Sweeping the C(q-2, k-2) sets that contain {0, 1} therefore covers all
// C(q, k) sets.
WeilSweep weil_sweep(std::uint64_t q_max, std::uint32_t k_max,
                     const std::vector<std::uint64_t>& d_set, unsigned threads = 1,
                     const SizeCaps& caps = {});

} // namespace radoforge
