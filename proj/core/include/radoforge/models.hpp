#pragma once

#include <memory>

#include "radoforge/fields.hpp"
#include "radoforge/paley.hpp"

namespace radoforge {

enum class OracleKind { InfinitePaley, RadoBinary, PrimeQR, SeededRandom };

// A vertex of an infinite Paley graph: a field element at its minimal level.
struct LevelledVertex {
    std::uint64_t level = 1; // member e of the exponent set; elem lives in GF(p^(r*e))
    FieldElem elem;
};

// Adjacency oracle over a countably infinite vertex set. Vertices are
// addressed by handles (arbitrary-precision integers); vertex_at maps the
// enumeration index i to the i-th handle. For most models the handle IS the
// index; for the prime models handles are the primes themselves, since
// witness construction produces primes whose enumeration index is not
// desk-computable.
class CountableOracle {
public:
    virtual ~CountableOracle() = default;

    virtual OracleKind kind() const = 0;
    virtual bool tournament() const { return false; }
    // JSON text {kind, parameters}; stable across runs.
    virtual std::string descriptor() const = 0;

    virtual Int vertex_at(const Int& index) const;
    // Human-readable native vertex for a handle.
    virtual std::string decode(const Int& handle) const = 0;

    // Graph adjacency; irreflexive and symmetric. Errors on tournaments.
    virtual bool adjacent(const Int& u, const Int& v) const = 0;
    // Arc u -> v; errors on graphs.
    virtual bool arc(const Int& u, const Int& v) const;

    // Least enumerated vertex outside A and B that is adjacent to every
    // element of A and to none of B; in tournament mode, one that receives an
    // arc from every element of A and sends an arc to every element of B.
    // Model-specific overrides replace the ordered scan with the model's
    // constructive procedure. Exhausting the budget raises BudgetError and
    // never implies nonexistence.
    virtual Int find_witness(const std::vector<Int>& A, const std::vector<Int>& B,
                             const SearchBudget& budget = {}) const;

    // Induced graph on the first n enumerated vertices.
    FiniteGraph window(std::uint32_t n, const SizeCaps& caps = {}) const;
    Tournament window_tournament(std::uint32_t n, const SizeCaps& caps = {}) const;

    // w satisfies the (A, B) extension constraints (w outside both sets).
    bool satisfies(const Int& w, const std::vector<Int>& A, const std::vector<Int>& B) const;
};

using OraclePtr = std::shared_ptr<const CountableOracle>;

// Infinite generalised Paley graph P_d(p^(rE)) with r the multiplicative
// order of p mod 2d (mod d when p = 2); tournament variant uses r = 1 and
// requires p = 3 mod 4, d = 2. Vertex handles are enumeration ranks: levels
// of E ascending, elements within a level by index, skipping elements that
// already occurred at lower levels.
OraclePtr infinite_paley(std::uint64_t p, const ExponentSet& E, std::uint64_t d,
                         bool tournament = false, const SizeCaps& caps = {});

// Rado's binary model on the naturals: for x < y, x ~ y iff bit x of y is 1.
OraclePtr rado_binary();

// Quadratic-residue graph on primes: sign +1 takes primes = 1 mod 4 with
// p ~ q iff p is a square mod q (symmetric by reciprocity); sign -1 takes
// primes = 3 mod 4 and yields a tournament with arc u -> v iff v is a square
// mod u. Handles are the primes themselves.
OraclePtr prime_qr(int sign);

// Pseudo-random graph/tournament with edges decided by a keyed hash of
// (seed, min(u,v), max(u,v)); marginal edge probability 1/2.
OraclePtr seeded_random(std::uint64_t seed, bool tournament = false);

// Multiplicative order of a modulo m (gcd(a, m) = 1).
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

} // namespace radoforge
