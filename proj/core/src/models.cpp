#include "radoforge/models.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "radoforge/characters.hpp"

namespace radoforge {

namespace mp = boost::multiprecision;

namespace {

void require_disjoint(const std::vector<Int>& A, const std::vector<Int>& B) {
    std::set<Int> seen(A.begin(), A.end());
    if (seen.size() != A.size()) throw DomainError("A contains a repeated vertex");
    for (const Int& b : B) {
        if (!seen.insert(b).second)
            throw DomainError("A and B must be disjoint; " + to_string(b) + " repeats");
    }
}

void require_nonneg(const Int& h) {
    if (h < 0) throw DomainError("vertex handle must be nonnegative, got " + to_string(h));
}

std::uint64_t bit_length(const Int& v) {
    if (v == 0) return 0;
    return static_cast<std::uint64_t>(mp::msb(v)) + 1;
}

// p^f if it stays below 2^63 (so signed prefix counts cannot overflow).
std::optional<std::uint64_t> pow_u64_checked(std::uint64_t p, std::uint64_t f) {
    const std::uint64_t cap = (std::uint64_t{1} << 63) - 1;
    std::uint64_t q = 1;
    for (std::uint64_t i = 0; i < f; ++i) {
        if (q > cap / p) return std::nullopt;
        q *= p;
    }
    return q;
}

} // namespace

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (m == 0) throw DomainError("multiplicative_order: modulus must be positive");
    a %= m;
    if (std::gcd(a, m) != 1)
        throw DomainError("multiplicative_order: arguments must be coprime");
    if (m == 1) return 1;
    unsigned __int128 acc = a;
    std::uint64_t k = 1;
    while (acc != 1) {
        acc = acc * a % m;
        ++k;
        if (k > m) throw CheckFailure("multiplicative order exceeded the modulus");
    }
    return k;
}

// ---------------------------------------------------------------------------
// CountableOracle base

Int CountableOracle::vertex_at(const Int& index) const {
    require_nonneg(index);
    return index;
}

bool CountableOracle::arc(const Int&, const Int&) const {
    throw DomainError("arc queries need a tournament model");
}

bool CountableOracle::satisfies(const Int& w, const std::vector<Int>& A,
                                const std::vector<Int>& B) const {
    if (tournament()) {
        for (const Int& a : A)
            if (!arc(a, w)) return false;
        for (const Int& b : B)
            if (!arc(w, b)) return false;
    } else {
        for (const Int& a : A)
            if (!adjacent(w, a)) return false;
        for (const Int& b : B)
            if (adjacent(w, b)) return false;
    }
    return true;
}

Int CountableOracle::find_witness(const std::vector<Int>& A, const std::vector<Int>& B,
                                  const SearchBudget& budget) const {
    require_disjoint(A, B);
    std::set<Int> used(A.begin(), A.end());
    used.insert(B.begin(), B.end());
    std::uint64_t tested = 0;
    for (Int i = 0;; ++i) {
        Int w = vertex_at(i);
        if (used.count(w)) continue;
        if (tested >= budget.max_candidates)
            throw BudgetError("witness scan exhausted " + std::to_string(budget.max_candidates) +
                              " candidates");
        ++tested;
        if (satisfies(w, A, B)) return w;
    }
}

FiniteGraph CountableOracle::window(std::uint32_t n, const SizeCaps& caps) const {
    if (tournament())
        throw DomainError("window of a tournament model; use window_tournament");
    FiniteGraph g(n, caps);
    std::vector<Int> h(n);
    for (std::uint32_t i = 0; i < n; ++i) h[i] = vertex_at(i);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (adjacent(h[i], h[j])) g.set_edge(i, j, true);
    return g;
}

Tournament CountableOracle::window_tournament(std::uint32_t n, const SizeCaps& caps) const {
    if (!tournament())
        throw DomainError("window_tournament of a graph model; use window");
    Tournament t(n, caps);
    std::vector<Int> h(n);
    for (std::uint32_t i = 0; i < n; ++i) h[i] = vertex_at(i);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (arc(h[i], h[j]))
                t.set_arc(i, j);
            else
                t.set_arc(j, i);
        }
    return t;
}

// ---------------------------------------------------------------------------
// Rado's binary model

namespace {

class RadoOracle final : public CountableOracle {
public:
    OracleKind kind() const override { return OracleKind::RadoBinary; }

    std::string descriptor() const override {
        nlohmann::json j;
        j["kind"] = "rado-binary";
        return j.dump();
    }

    std::string decode(const Int& handle) const override {
        require_nonneg(handle);
        return to_string(handle);
    }

    bool adjacent(const Int& u, const Int& v) const override {
        require_nonneg(u);
        require_nonneg(v);
        if (u == v) return false;
        const Int& lo = u < v ? u : v;
        const Int& hi = u < v ? v : u;
        // bit lo of hi; positions beyond the top bit are 0
        if (lo > mp::msb(hi)) return false;
        return mp::bit_test(hi, lo.convert_to<std::size_t>());
    }

    Int find_witness(const std::vector<Int>& A, const std::vector<Int>& B,
                     const SearchBudget& budget) const override {
        require_disjoint(A, B);
        for (const Int& a : A) require_nonneg(a);
        for (const Int& b : B) require_nonneg(b);
        std::set<Int> used(A.begin(), A.end());
        used.insert(B.begin(), B.end());
        std::uint64_t tested = 0;
        for (Int w = 0; tested < budget.max_candidates; ++w) {
            if (used.count(w)) continue;
            ++tested;
            if (satisfies(w, A, B)) return w;
        }
        // Scan exhausted; fall back to the constructive witness with bits
        // exactly at the positions in A. It is correct unless some element of
        // B is at least as large, in which case a top bit past everything in
        // play fixes both membership clashes and reverse lookups.
        for (const Int& a : A) {
            if (a >= budget.max_bits)
                throw BudgetError("constructive witness needs bit " + to_string(a) +
                                  "; budget allows " + std::to_string(budget.max_bits) + " bits");
        }
        Int y = 0;
        for (const Int& a : A) mp::bit_set(y, a.convert_to<std::size_t>());
        if (!used.count(y) && satisfies(y, A, B)) return y;
        Int top = 0;
        for (const Int& x : used) top = std::max(top, x);
        Int pos = top + 1;
        if (pos >= budget.max_bits)
            throw BudgetError("constructive witness needs bit " + to_string(pos) +
                              "; budget allows " + std::to_string(budget.max_bits) + " bits");
        mp::bit_set(y, pos.convert_to<std::size_t>());
        if (used.count(y) || !satisfies(y, A, B))
            throw CheckFailure("constructed binary-model witness failed verification");
        return y;
    }
};

// ---------------------------------------------------------------------------
// Quadratic-residue graph / tournament on primes

class PrimeQROracle final : public CountableOracle {
public:
    explicit PrimeQROracle(int sign) : sign_(sign) {
        if (sign != 1 && sign != -1) throw DomainError("prime-qr sign must be +1 or -1");
    }

    OracleKind kind() const override { return OracleKind::PrimeQR; }
    bool tournament() const override { return sign_ < 0; }

    std::string descriptor() const override {
        nlohmann::json j;
        j["kind"] = "prime-qr";
        j["sign"] = sign_;
        return j.dump();
    }

    Int vertex_at(const Int& index) const override {
        require_nonneg(index);
        if (index > 10'000'000)
            throw BudgetError("prime enumeration caps at index 10^7, got " + to_string(index));
        std::uint64_t i = index.convert_to<std::uint64_t>();
        std::lock_guard<std::mutex> lk(mu_);
        while (class_primes_.size() <= i) grow_locked();
        return Int(class_primes_[i]);
    }

    std::string decode(const Int& handle) const override {
        validate_handle(handle);
        return to_string(handle);
    }

    bool adjacent(const Int& u, const Int& v) const override {
        if (tournament())
            throw DomainError("adjacency queries need a graph model; prime-qr:-1 is a tournament");
        validate_handle(u);
        validate_handle(v);
        if (u == v) return false;
        return jacobi(u, v) == 1;
    }

    bool arc(const Int& u, const Int& v) const override {
        if (!tournament()) throw DomainError("arc queries need a tournament model");
        validate_handle(u);
        validate_handle(v);
        if (u == v) return false;
        // u -> v iff v is a square mod u; reciprocity for 3 (mod 4) primes
        // makes exactly one direction hold
        return jacobi(v, u) == 1;
    }

    Int find_witness(const std::vector<Int>& A, const std::vector<Int>& B,
                     const SearchBudget& budget) const override {
        require_disjoint(A, B);
        for (const Int& a : A) validate_handle(a);
        for (const Int& b : B) validate_handle(b);
        // Congruences: the right residue class mod 4; a square (namely 1) mod
        // each prime in A; a least nonresidue mod each prime in B. Any prime
        // in the resulting progression works, on both sides of reciprocity.
        Int x(sign_ > 0 ? 1 : 3), M(4);
        for (const Int& a : A) crt_merge(x, M, Int(1), a);
        for (const Int& b : B) crt_merge(x, M, least_nonresidue(b), b);
        if (bit_length(M) > budget.max_bits)
            throw BudgetError("CRT modulus needs " + std::to_string(bit_length(M)) +
                              " bits; budget allows " + std::to_string(budget.max_bits));
        std::set<Int> used(A.begin(), A.end());
        used.insert(B.begin(), B.end());
        Int w = x;
        for (std::uint64_t t = 0; t < budget.max_candidates; ++t, w += M) {
            if (w < 2 || used.count(w)) continue;
            if (!is_probable_prime(w)) continue;
            if (!satisfies(w, A, B))
                throw CheckFailure("progression prime " + to_string(w) +
                                   " failed the residue constraints");
            return w;
        }
        throw BudgetError("no prime found in " + std::to_string(budget.max_candidates) +
                          " progression steps");
    }

private:
    int sign_;
    mutable std::mutex mu_;
    mutable std::vector<std::uint64_t> class_primes_;
    mutable std::uint64_t sieve_limit_ = 0;

    std::uint64_t residue() const { return sign_ > 0 ? 1 : 3; }

    void grow_locked() const {
        if (sieve_limit_ >= 1'000'000'000)
            throw BudgetError("prime sieve limit reached");
        sieve_limit_ = sieve_limit_ ? sieve_limit_ * 2 : 4096;
        class_primes_.clear();
        for (std::uint64_t p : primes_upto(sieve_limit_))
            if (p % 4 == residue()) class_primes_.push_back(p);
    }

    void validate_handle(const Int& h) const {
        if (h < 2 || h % 4 != residue() || !is_probable_prime(h))
            throw DomainError("handle " + to_string(h) + " is not a prime = " +
                              std::to_string(residue()) + " (mod 4)");
    }

    static Int least_nonresidue(const Int& b) {
        for (Int t = 2; t < b; ++t)
            if (jacobi(t, b) == -1) return t;
        throw CheckFailure("no quadratic nonresidue below " + to_string(b));
    }

    // Merge x (mod M) with r (mod m), gcd(M, m) = 1.
    static void crt_merge(Int& x, Int& M, const Int& r, const Int& m) {
        Int g, u, v;
        ext_gcd(M % m, m, g, u, v);
        if (g != 1) throw DomainError("CRT moduli share the factor " + to_string(g));
        Int t = ((r - x) % m + m) % m;
        x += M * ((t * (((u % m) + m) % m)) % m);
        M *= m;
        x %= M;
    }

    static void ext_gcd(Int a, Int b, Int& g, Int& u, Int& v) {
        Int u0 = 1, v0 = 0, u1 = 0, v1 = 1;
        while (b != 0) {
            Int q = a / b;
            Int r = a - q * b;
            a = b;
            b = r;
            Int u2 = u0 - q * u1, v2 = v0 - q * v1;
            u0 = u1;
            v0 = v1;
            u1 = u2;
            v1 = v2;
        }
        g = a;
        u = u0;
        v = v0;
    }
};

// ---------------------------------------------------------------------------
// Seeded pseudo-random model

class SeededRandomOracle final : public CountableOracle {
public:
    SeededRandomOracle(std::uint64_t seed, bool tournament) : seed_(seed), tour_(tournament) {
        std::uint64_t s = seed;
        k0_ = splitmix64(s);
        k1_ = splitmix64(s);
    }

    OracleKind kind() const override { return OracleKind::SeededRandom; }
    bool tournament() const override { return tour_; }

    std::string descriptor() const override {
        nlohmann::json j;
        j["kind"] = "seeded-random";
        j["seed"] = seed_;
        j["tournament"] = tour_;
        return j.dump();
    }

    std::string decode(const Int& handle) const override {
        require_nonneg(handle);
        return to_string(handle);
    }

    bool adjacent(const Int& u, const Int& v) const override {
        if (tour_) throw DomainError("adjacency queries need a graph model");
        require_nonneg(u);
        require_nonneg(v);
        if (u == v) return false;
        return (pair_hash(std::min(u, v), std::max(u, v)) >> 63) != 0;
    }

    bool arc(const Int& u, const Int& v) const override {
        if (!tour_) throw DomainError("arc queries need a tournament model");
        require_nonneg(u);
        require_nonneg(v);
        if (u == v) return false;
        bool low_to_high = (pair_hash(std::min(u, v), std::max(u, v)) >> 63) != 0;
        return low_to_high == (u < v);
    }

private:
    std::uint64_t seed_;
    bool tour_;
    std::uint64_t k0_ = 0, k1_ = 0;

    std::uint64_t pair_hash(const Int& lo, const Int& hi) const {
        // message: byte count of lo (LE32), then both magnitudes, little
        // endian; the prefix keeps the pair encoding injective
        std::vector<unsigned char> lo_bytes, hi_bytes;
        if (lo != 0) mp::export_bits(lo, std::back_inserter(lo_bytes), 8, false);
        if (hi != 0) mp::export_bits(hi, std::back_inserter(hi_bytes), 8, false);
        std::vector<unsigned char> msg;
        msg.reserve(4 + lo_bytes.size() + hi_bytes.size());
        std::uint32_t n = static_cast<std::uint32_t>(lo_bytes.size());
        for (int i = 0; i < 4; ++i) msg.push_back(static_cast<unsigned char>(n >> (8 * i)));
        msg.insert(msg.end(), lo_bytes.begin(), lo_bytes.end());
        msg.insert(msg.end(), hi_bytes.begin(), hi_bytes.end());
        return siphash24(k0_, k1_, msg.data(), msg.size());
    }
};

// ---------------------------------------------------------------------------
// Infinite generalised Paley graph / tournament

class InfinitePaleyOracle final : public CountableOracle {
public:
    InfinitePaleyOracle(std::uint64_t p, ExponentSet E, std::uint64_t d, bool tournament,
                        const SizeCaps& caps)
        : p_(p), E_(std::move(E)), d_(d), tour_(tournament), caps_(caps), lat_(p, caps) {
        if (d_ < 2) throw DomainError("d must be at least 2, got " + std::to_string(d_));
        if (d_ % p_ == 0) throw DomainError("d must be coprime to p");
        if (!E_.all_coprime_to(d_))
            throw DomainError("every member of E must be coprime to d = " + std::to_string(d_));
        if (tour_) {
            if (d_ != 2) throw DomainError("tournament mode requires d = 2");
            if (p_ % 4 != 3)
                throw DomainError("tournament mode requires p = 3 (mod 4); p = " +
                                  std::to_string(p_) + " has p = " + std::to_string(p_ % 4) +
                                  " (mod 4)");
            r_ = 1; // odd levels keep q = 3 (mod 4)
        } else {
            r_ = (p_ == 2) ? multiplicative_order(2, d_)
                           : multiplicative_order(p_ % (2 * d_), 2 * d_);
        }
        lat_.level(static_cast<std::uint32_t>(r_));
    }

    OracleKind kind() const override { return OracleKind::InfinitePaley; }
    bool tournament() const override { return tour_; }

    std::string descriptor() const override {
        nlohmann::json j;
        j["kind"] = "infinite-paley";
        j["p"] = p_;
        j["E"] = E_.str();
        j["d"] = d_;
        j["r"] = r_;
        j["tournament"] = tour_;
        return j.dump();
    }

    std::string decode(const Int& handle) const override {
        LevelledVertex v = decode_vertex(handle);
        std::ostringstream os;
        os << v.elem.str() << " in GF(" << p_ << "^" << r_ * v.level << ")";
        return os.str();
    }

    bool adjacent(const Int& u, const Int& v) const override {
        if (tour_) throw DomainError("adjacency queries need a graph model");
        if (u == v) return false;
        return power_class_test(u, v, d_);
    }

    bool arc(const Int& u, const Int& v) const override {
        if (!tour_) throw DomainError("arc queries need a tournament model");
        if (u == v) return false;
        return power_class_test(u, v, 2);
    }

    Int find_witness(const std::vector<Int>& A, const std::vector<Int>& B,
                     const SearchBudget& budget) const override {
        require_disjoint(A, B);
        std::set<Int> used(A.begin(), A.end());
        used.insert(B.begin(), B.end());
        std::uint64_t tested = 0;
        for (Int i = 0;; ++i) {
            if (used.count(i)) continue;
            LevelledVertex v = decode_vertex(i);
            if (v.level > budget.max_level)
                throw BudgetError("witness scan reached level " + std::to_string(v.level) +
                                  "; budget allows levels up to " +
                                  std::to_string(budget.max_level));
            if (tested >= budget.max_candidates)
                throw BudgetError("witness scan exhausted " +
                                  std::to_string(budget.max_candidates) + " candidates");
            ++tested;
            if (satisfies(i, A, B)) return i;
        }
    }

    LevelledVertex decode_vertex(const Int& rank) const {
        require_nonneg(rank);
        std::lock_guard<std::mutex> lk(mu_);
        bool small = rank <= std::numeric_limits<std::uint64_t>::max();
        std::uint64_t key = small ? rank.convert_to<std::uint64_t>() : 0;
        if (small) {
            auto it = decode_cache_.find(key);
            if (it != decode_cache_.end()) return it->second;
        }
        for (std::size_t k = 0;; ++k) {
            ensure_level_locked(k);
            const LevelInfo& li = levels_[k];
            if (rank >= li.offset + li.fresh) continue;
            std::uint64_t target = (rank - li.offset).convert_to<std::uint64_t>();
            std::uint64_t idx = nth_fresh(li, target);
            LevelledVertex v{li.e, lat_.level(li.f)->element_at(Int(idx))};
            if (small) {
                if (decode_cache_.size() >= 300'000) decode_cache_.clear();
                decode_cache_.emplace(key, v);
            }
            return v;
        }
    }

private:
    struct LevelInfo {
        std::uint64_t e = 1;     // member of E
        std::uint32_t f = 1;     // r * e, the field degree
        std::uint64_t q = 0;     // p^f
        Int offset;              // rank of the first fresh element
        std::uint64_t fresh = 0; // elements not seen at any lower level
        // signed inclusion-exclusion terms over embedded subfield images
        std::vector<std::pair<std::int64_t, std::shared_ptr<const std::vector<std::uint64_t>>>>
            covers;
    };

    std::uint64_t p_;
    ExponentSet E_;
    std::uint64_t d_;
    bool tour_;
    SizeCaps caps_;
    std::uint64_t r_ = 1;
    mutable EmbeddingLattice lat_;
    mutable std::mutex mu_;
    mutable std::vector<LevelInfo> levels_;
    mutable std::unordered_map<std::uint64_t, LevelledVertex> decode_cache_;
    mutable std::map<std::pair<std::uint64_t, std::uint32_t>, FieldElem> embed_cache_;
    mutable std::map<std::pair<std::uint32_t, std::uint32_t>,
                     std::shared_ptr<const std::vector<std::uint64_t>>>
        image_cache_;
    mutable std::map<std::uint32_t, std::uint64_t> level_calls_;
    mutable std::map<std::uint32_t, std::shared_ptr<const Character>> level_chi_;

    static constexpr std::uint32_t kMaxEmbedDegree = 512;
    // a long scan amortizes one character table over many power-class tests
    static constexpr std::uint64_t kTableCap = 4'000'000;
    static constexpr std::uint64_t kTableMinCalls = 20'000;

    void ensure_level_locked(std::size_t k) const {
        while (levels_.size() <= k) {
            std::uint64_t prev = levels_.empty() ? 0 : levels_.back().e;
            std::uint64_t scan_cap = std::max<std::uint64_t>(1024, prev > (1ull << 50) ? prev : prev * 1024);
            auto e = E_.next_member(prev, scan_cap);
            if (!e)
                throw DomainError("no member of E beyond " + std::to_string(prev) +
                                  " within the scan cap");
            if (*e > kMaxEmbedDegree / r_)
                throw BudgetError("level " + std::to_string(*e) + " needs field degree " +
                                  std::to_string(*e * r_) + ", beyond the supported " +
                                  std::to_string(kMaxEmbedDegree));
            std::uint32_t f = static_cast<std::uint32_t>(*e * r_);
            auto q = pow_u64_checked(p_, f);
            if (!q)
                throw BudgetError("level GF(" + std::to_string(p_) + "^" + std::to_string(f) +
                                  ") exceeds 64-bit element indexing");
            LevelInfo li;
            li.e = *e;
            li.f = f;
            li.q = *q;
            li.offset = levels_.empty() ? Int(0) : levels_.back().offset + levels_.back().fresh;
            // maximal proper divisors of e inside E, then inclusion-exclusion
            // over their gcd-closure
            std::vector<std::uint64_t> divs;
            for (std::uint64_t m = 1; m < *e; ++m)
                if (*e % m == 0 && E_.contains(m)) divs.push_back(m);
            std::vector<std::uint64_t> maximal;
            for (std::uint64_t m : divs) {
                bool top = true;
                for (std::uint64_t m2 : divs)
                    if (m2 != m && m2 % m == 0) top = false;
                if (top) maximal.push_back(m);
            }
            std::map<std::uint64_t, std::int64_t> coeff;
            for (std::uint32_t mask = 1; mask < (1u << maximal.size()); ++mask) {
                std::uint64_t g = 0;
                for (std::size_t i = 0; i < maximal.size(); ++i)
                    if (mask & (1u << i)) g = std::gcd(g, maximal[i]);
                coeff[g] += (__builtin_popcount(mask) % 2 == 1) ? 1 : -1;
            }
            std::int64_t covered = 0;
            for (auto& [g, c] : coeff) {
                if (c == 0) continue;
                auto img = image_locked(static_cast<std::uint32_t>(g * r_), f);
                covered += c * static_cast<std::int64_t>(img->size());
                li.covers.emplace_back(c, std::move(img));
            }
            li.fresh = li.q - static_cast<std::uint64_t>(covered);
            levels_.push_back(std::move(li));
        }
    }

    // Sorted element indices of the embedded image of GF(p^src) in GF(p^dst).
    std::shared_ptr<const std::vector<std::uint64_t>> image_locked(std::uint32_t src,
                                                                   std::uint32_t dst) const {
        auto it = image_cache_.find({src, dst});
        if (it != image_cache_.end()) return it->second;
        auto q_small = pow_u64_checked(p_, src);
        if (!q_small || *q_small > caps_.max_enum)
            throw BudgetError("subfield image of GF(" + std::to_string(p_) + "^" +
                              std::to_string(src) + ") exceeds the enumeration cap");
        const Embedding& emb = lat_.embedding(src, dst);
        std::vector<std::vector<std::uint32_t>> gp(src);
        for (std::uint32_t j = 0; j < src; ++j) gp[j] = emb.gen_powers[j].coeffs();
        auto out = std::make_shared<std::vector<std::uint64_t>>();
        out->reserve(*q_small);
        // walk source elements in index order, keeping the image coordinates
        // updated one generator power per digit step
        std::vector<std::uint32_t> digits(src, 0);
        std::vector<std::uint32_t> acc(dst, 0);
        const std::uint32_t p32 = static_cast<std::uint32_t>(p_);
        for (std::uint64_t cnt = 0;;) {
            std::uint64_t idx = 0;
            for (std::uint32_t k = dst; k-- > 0;) idx = idx * p_ + acc[k];
            out->push_back(idx);
            if (++cnt == *q_small) break;
            std::uint32_t j = 0;
            while (digits[j] == p32 - 1) {
                // dropping p-1 copies of gen_powers[j] is adding one, mod p
                digits[j] = 0;
                for (std::uint32_t k = 0; k < dst; ++k) {
                    acc[k] += gp[j][k];
                    if (acc[k] >= p32) acc[k] -= p32;
                }
                ++j;
            }
            ++digits[j];
            for (std::uint32_t k = 0; k < dst; ++k) {
                acc[k] += gp[j][k];
                if (acc[k] >= p32) acc[k] -= p32;
            }
        }
        std::sort(out->begin(), out->end());
        for (std::size_t i = 1; i < out->size(); ++i)
            if ((*out)[i] == (*out)[i - 1])
                throw CheckFailure("subfield embedding image collided at index " +
                                   std::to_string((*out)[i]));
        image_cache_.emplace(std::make_pair(src, dst), out);
        return out;
    }

    // Index of the (target+1)-th element of level `li` outside all covers.
    std::uint64_t nth_fresh(const LevelInfo& li, std::uint64_t target) const {
        std::uint64_t lo = 0, hi = li.q - 1;
        while (lo < hi) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            std::int64_t covered = 0;
            for (const auto& [c, img] : li.covers)
                covered += c * static_cast<std::int64_t>(
                                   std::upper_bound(img->begin(), img->end(), mid) - img->begin());
            std::int64_t fresh_upto = static_cast<std::int64_t>(mid + 1) - covered;
            if (fresh_upto >= static_cast<std::int64_t>(target) + 1)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    FieldElem embed_cached(const Int& rank, const LevelledVertex& v, std::uint32_t f) const {
        std::uint32_t src = static_cast<std::uint32_t>(r_ * v.level);
        if (src == f) return v.elem;
        bool small = rank <= std::numeric_limits<std::uint64_t>::max();
        std::uint64_t key = small ? rank.convert_to<std::uint64_t>() : 0;
        if (small) {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = embed_cache_.find({key, f});
            if (it != embed_cache_.end()) return it->second;
        }
        FieldElem img = lat_.embed(v.elem, f);
        if (small) {
            std::lock_guard<std::mutex> lk(mu_);
            if (embed_cache_.size() >= 200'000) embed_cache_.clear();
            embed_cache_.emplace(std::make_pair(key, f), img);
        }
        return img;
    }

    bool power_class_test(const Int& u, const Int& v, std::uint64_t d) const {
        LevelledVertex vu = decode_vertex(u);
        LevelledVertex vv = decode_vertex(v);
        std::uint64_t ell = std::lcm(vu.level, vv.level);
        if (ell > kMaxEmbedDegree / r_)
            throw BudgetError("common level " + std::to_string(ell) + " needs field degree " +
                              std::to_string(ell * r_) + ", beyond the supported " +
                              std::to_string(kMaxEmbedDegree));
        std::uint32_t f = static_cast<std::uint32_t>(ell * r_);
        FieldElem eu = embed_cached(u, vu, f);
        FieldElem ev = embed_cached(v, vv, f);
        FieldElem diff = ev - eu;
        if (diff.is_zero())
            throw CheckFailure("distinct vertices " + to_string(u) + ", " + to_string(v) +
                               " embedded to the same element");
        auto ctx = lat_.level(f);
        std::shared_ptr<const Character> chi;
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = level_chi_.find(f);
            if (it == level_chi_.end() && ++level_calls_[f] >= kTableMinCalls &&
                ctx->size().q64 != 0 && ctx->size().q64 <= kTableCap)
                it = level_chi_.emplace(f, std::make_shared<const Character>(ctx, d_)).first;
            if (it != level_chi_.end()) chi = it->second;
        }
        if (chi) return chi->exponent_table()[diff.index64()] == 0;
        Int exponent = (ctx->size().q - 1) / d;
        return pow(diff, exponent).is_one();
    }
};

} // namespace

OraclePtr infinite_paley(std::uint64_t p, const ExponentSet& E, std::uint64_t d, bool tournament,
                         const SizeCaps& caps) {
    return std::make_shared<InfinitePaleyOracle>(p, E, d, tournament, caps);
}

OraclePtr rado_binary() { return std::make_shared<RadoOracle>(); }

OraclePtr prime_qr(int sign) { return std::make_shared<PrimeQROracle>(sign); }

OraclePtr seeded_random(std::uint64_t seed, bool tournament) {
    return std::make_shared<SeededRandomOracle>(seed, tournament);
}

} // namespace radoforge
