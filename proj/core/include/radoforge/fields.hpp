#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "radoforge/util.hpp"

namespace radoforge {

struct PrimePower {
    std::uint64_t p = 0;
    std::uint32_t e = 0;
    Int q;                 // p^e
    std::uint64_t q64 = 0; // q when it fits in 64 bits, else 0
};

class FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

// Element of GF(p^e): coefficient vector of length e over GF(p),
// constant term first, reduced modulo the context's modulus.
class FieldElem {
public:
    FieldElem() = default;
    FieldElem(FieldCtxPtr ctx, std::vector<std::uint32_t> coeffs);

    const std::vector<std::uint32_t>& coeffs() const { return c_; }
    const FieldCtxPtr& ctx() const { return ctx_; }
    bool is_zero() const;
    bool is_one() const;

    // Enumeration index: sum of coeffs[j] * p^j. Elements are ordered by
    // coefficient vectors, constant term as the least significant digit.
    Int index() const;
    std::uint64_t index64() const; // requires the field order to fit in 64 bits

    std::string str() const;

private:
    FieldCtxPtr ctx_;
    std::vector<std::uint32_t> c_;
};

bool operator==(const FieldElem& a, const FieldElem& b);
bool operator!=(const FieldElem& a, const FieldElem& b);
FieldElem operator+(const FieldElem& a, const FieldElem& b);
FieldElem operator-(const FieldElem& a, const FieldElem& b);
FieldElem operator*(const FieldElem& a, const FieldElem& b);
FieldElem neg(const FieldElem& a);
FieldElem inv(const FieldElem& a);               // a != 0
FieldElem pow(const FieldElem& a, const Int& k); // k >= 0
FieldElem frobenius(const FieldElem& a, std::uint32_t i); // a^(p^i)

// Immutable context for GF(p^e). The modulus is the lexicographically least
// monic irreducible polynomial of degree e over GF(p), coefficients compared
// constant term first. For e = 1 the modulus is x and arithmetic collapses to
// residues mod p.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
public:
    const PrimePower& size() const { return pp_; }
    // Modulus coefficients, length e+1, constant term first, leading 1.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    const SizeCaps& caps() const { return caps_; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_residue(std::uint64_t v) const;      // constant polynomial v mod p
    FieldElem from_coeffs(std::vector<std::uint32_t>) const;
    FieldElem element_at(const Int& index) const;       // 0 <= index < q
    FieldElem generator() const;                        // class of x; requires e >= 2

    // Least element of multiplicative order q-1. Lazily computed; requires the
    // field order to be within the enumeration cap.
    FieldElem primitive_root() const;

    static FieldCtxPtr create(std::uint64_t p, std::uint32_t e, const SizeCaps& caps = {});
    // Scratch context with an explicitly given monic irreducible modulus
    // (constant term first, length e+1). Used internally for subfield
    // transport; the canonical contexts always come from create().
    static FieldCtxPtr create_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus,
                                           const SizeCaps& caps = {});

private:
    FieldCtx() = default;

    PrimePower pp_;
    std::vector<std::uint32_t> modulus_;
    // reduction_[j] = coefficients of x^(e+j) reduced mod modulus, j in [0, e-1)
    std::vector<std::vector<std::uint32_t>> reduction_;
    SizeCaps caps_;

    mutable std::once_flag root_once_;
    mutable std::optional<std::vector<std::uint32_t>> primitive_root_;

    friend FieldElem operator*(const FieldElem&, const FieldElem&);
    std::vector<std::uint32_t> reduce(std::vector<std::uint32_t> conv) const;
};

// field_create(p, e): canonical context for GF(p^e).
FieldCtxPtr field_create(std::uint64_t p, std::uint32_t e, const SizeCaps& caps = {});

// Finitely described set of odd extension indices, closed under divisors and
// least common multiples: a union of full prime-power towers plus explicit
// generators (with their divisor/lcm closure). 1 is always a member.
class ExponentSet {
public:
    ExponentSet(std::vector<std::uint64_t> tower_primes, std::vector<std::uint64_t> generators);
    static ExponentSet parse(const std::string& text); // e.g. "3^inf", "3^inf,5", "15"

    bool contains(std::uint64_t e) const;
    // Members in ascending order, up to and including cap.
    std::vector<std::uint64_t> members_upto(std::uint64_t cap) const;
    // Least member strictly greater than `after`, up to scan_cap; nullopt beyond.
    std::optional<std::uint64_t> next_member(std::uint64_t after, std::uint64_t scan_cap) const;
    bool all_coprime_to(std::uint64_t d) const;

    const std::vector<std::uint64_t>& tower_primes() const { return towers_; }
    const std::vector<std::uint64_t>& generators() const { return gens_; }
    std::string str() const;

private:
    std::vector<std::uint64_t> towers_; // odd primes with unbounded exponent
    std::vector<std::uint64_t> gens_;   // explicit odd generators
};

// Least common level of two members; errors if either argument is outside E.
std::uint64_t min_common_level(const ExponentSet& E, std::uint64_t e1, std::uint64_t e2);

// Subfield embedding GF(p^e) -> GF(p^f) determined by the image of the
// canonical generator of GF(p^e).
struct Embedding {
    std::uint32_t src_e = 0;
    std::uint32_t dst_f = 0;
    // powers of the chosen root: gen_powers[j] = r^j for j in [0, e)
    std::vector<FieldElem> gen_powers;

    FieldElem apply(const FieldElem& x) const;
};

// Tower of fields GF(p^e) with pinned, mutually compatible embeddings.
// Pinning (e, f) picks the root of the level-e modulus inside GF(p^f) that
// commutes with every previously pinned embedding through common divisor
// levels, breaking ties by least element index. Pins are created on demand
// and cached, divisor levels first, so the choice is deterministic and
// composition-compatible by construction.
class EmbeddingLattice {
public:
    explicit EmbeddingLattice(std::uint64_t p, const SizeCaps& caps = {});

    std::uint64_t p() const { return p_; }
    FieldCtxPtr level(std::uint32_t e);
    const Embedding& embedding(std::uint32_t e, std::uint32_t f); // e | f
    FieldElem embed(const FieldElem& x, std::uint32_t f);

private:
    std::uint64_t p_;
    SizeCaps caps_;
    std::map<std::uint32_t, FieldCtxPtr> levels_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Embedding> pinned_;
    std::mutex mu_;

    const Embedding& pin_locked(std::uint32_t e, std::uint32_t f);
};

// All roots of a monic irreducible degree-e polynomial over GF(p) inside
// GF(p^f) (e | f), in ascending element-index order. Deterministic: one root
// is located through the fixed subspace of Frobenius^e and the rest are its
// Frobenius conjugates.
std::vector<FieldElem> roots_in_field(const std::vector<std::uint32_t>& poly, const FieldCtxPtr& big);

} // namespace radoforge
