#include "radoforge/fields.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace radoforge {

namespace {

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime, a != 0 mod p
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a % p);
    while (newr != 0) {
        const std::int64_t quot = r / newr;
        t = std::exchange(newt, t - quot * newt);
        r = std::exchange(newr, r - quot * newr);
    }
    if (r != 1) throw DomainError("inv_mod: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

// --- dense polynomials over GF(p), ascending coefficients ----------------

using Poly = std::vector<std::uint64_t>;

void ptrim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
        }
    }
    ptrim(out);
    return out;
}

Poly pmod(Poly a, const Poly& m, std::uint64_t p) {
    // m monic
    ptrim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        const std::uint64_t lead = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (std::size_t j = 0; j <= dm; ++j) {
                const std::uint64_t sub = (lead * m[j]) % p;
                a[shift + j] = (a[shift + j] + p - sub) % p;
            }
        }
        a.pop_back();
        ptrim(a);
    }
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
    return pmod(pmul(a, b, p), m, p);
}

Poly ppowmod(Poly base, Int exp, const Poly& m, std::uint64_t p) {
    Poly result{1};
    base = pmod(std::move(base), m, p);
    while (exp > 0) {
        if (boost::multiprecision::bit_test(exp, 0)) result = pmulmod(result, base, m, p);
        exp >>= 1;
        if (exp > 0) base = pmulmod(base, base, m, p);
    }
    return result;
}

Poly pgcd(Poly a, Poly b, std::uint64_t p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        // make b monic before reduction
        const std::uint64_t li = inv_mod_u64(b.back(), p);
        for (auto& c : b) c = (c * li) % p;
        a = pmod(std::move(a), b, p);
        a.swap(b);
    }
    if (!a.empty()) {
        const std::uint64_t li = inv_mod_u64(a.back(), p);
        for (auto& c : a) c = (c * li) % p;
    }
    return a;
}

Int int_pow(std::uint64_t base, std::uint32_t exp) {
    Int r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) r *= base;
    return r;
}

bool poly_is_irreducible(const Poly& m, std::uint64_t p) {
    // monic m of degree e >= 2: irreducible iff x^(p^e) == x mod m and
    // gcd(x^(p^(e/l)) - x, m) = 1 for every prime l | e
    const std::uint32_t e = static_cast<std::uint32_t>(m.size() - 1);
    const Poly x{0, 1};
    Poly t = ppowmod(x, int_pow(p, e), m, p);
    Poly diff = t;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    ptrim(diff);
    if (!diff.empty()) return false;
    for (auto [l, mult] : factorize_u64(e)) {
        (void)mult;
        Poly s = ppowmod(x, int_pow(p, e / static_cast<std::uint32_t>(l)), m, p);
        s.resize(std::max<std::size_t>(s.size(), 2), 0);
        s[1] = (s[1] + p - 1) % p;
        ptrim(s);
        if (pgcd(s, m, p).size() != 1) return false;
    }
    return true;
}

std::vector<std::uint32_t> find_modulus(std::uint64_t p, std::uint32_t e) {
    // least (c_0, ..., c_{e-1}) in lexicographic order, c_0 most significant,
    // such that x^e + sum c_j x^j is irreducible; c_0 = 0 would make the
    // polynomial divisible by x, so that whole block is skipped up front
    std::vector<std::uint64_t> c(e, 0);
    c[0] = 1;
    Poly m(e + 1, 0);
    m[e] = 1;
    while (true) {
        for (std::uint32_t j = 0; j < e; ++j) m[j] = c[j];
        if (poly_is_irreducible(m, p)) {
            std::vector<std::uint32_t> out(e + 1);
            for (std::uint32_t j = 0; j <= e; ++j) out[j] = static_cast<std::uint32_t>(m[j]);
            return out;
        }
        // lexicographic successor: last coordinate fastest
        std::int64_t pos = e - 1;
        while (pos >= 0) {
            if (++c[pos] < p) break;
            c[pos] = 0;
            --pos;
        }
        if (pos < 0) throw DomainError("no irreducible polynomial found (internal)");
    }
}

// --- GF(p) linear algebra -------------------------------------------------

using Vec = std::vector<std::uint64_t>;
using Mat = std::vector<Vec>; // row major

// Basis of the null space of A (n x n), as vectors of length n.
std::vector<Vec> gf_nullspace(Mat a, std::uint64_t p) {
    const std::size_t n = a.empty() ? 0 : a[0].size();
    const std::size_t rows = a.size();
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        const std::uint64_t li = inv_mod_u64(a[rank][col], p);
        for (auto& v : a[rank]) v = (v * li) % p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            const std::uint64_t f = a[r][col];
            for (std::size_t cc = 0; cc < n; ++cc) {
                a[r][cc] = (a[r][cc] + p - (f * a[rank][cc]) % p) % p;
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        Vec v(n, 0);
        v[free_col] = 1;
        for (std::size_t r = 0; r < rank; ++r) {
            v[pivot_col[r]] = (p - a[r][free_col] % p) % p;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve sum_i lambda_i * cols[i] = target over GF(p); nullopt when unsolvable.
std::optional<Vec> gf_solve(const std::vector<Vec>& cols, const Vec& target, std::uint64_t p) {
    const std::size_t n = target.size();
    const std::size_t k = cols.size();
    Mat aug(n, Vec(k + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = cols[j][i];
        aug[i][k] = target[i];
    }
    std::vector<std::size_t> pivot_of_col(k, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < k && rank < n; ++col) {
        std::size_t sel = rank;
        while (sel < n && aug[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(aug[sel], aug[rank]);
        const std::uint64_t li = inv_mod_u64(aug[rank][col], p);
        for (auto& v : aug[rank]) v = (v * li) % p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == rank || aug[r][col] == 0) continue;
            const std::uint64_t f = aug[r][col];
            for (std::size_t cc = 0; cc <= k; ++cc) {
                aug[r][cc] = (aug[r][cc] + p - (f * aug[rank][cc]) % p) % p;
            }
        }
        pivot_of_col[col] = rank;
        ++rank;
    }
    for (std::size_t r = rank; r < n; ++r) {
        if (aug[r][k] != 0) return std::nullopt;
    }
    Vec sol(k, 0);
    for (std::size_t col = 0; col < k; ++col) {
        if (pivot_of_col[col] != SIZE_MAX) sol[col] = aug[pivot_of_col[col]][k];
    }
    // verify (free variables set to zero may not satisfy dependent columns)
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < k; ++j) acc = (acc + sol[j] * cols[j][i]) % p;
        if (acc != target[i] % p) return std::nullopt;
    }
    return sol;
}

} // namespace

// --- FieldElem ------------------------------------------------------------

FieldElem::FieldElem(FieldCtxPtr ctx, std::vector<std::uint32_t> coeffs)
    : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (!ctx_) throw DomainError("FieldElem: null context");
    const auto& pp = ctx_->size();
    if (c_.size() != pp.e) throw DomainError("FieldElem: coefficient count != e");
    for (auto v : c_) {
        if (v >= pp.p) throw DomainError("FieldElem: coefficient out of range");
    }
}

bool FieldElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint32_t v) { return v == 0; });
}

bool FieldElem::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](std::uint32_t v) { return v == 0; });
}

Int FieldElem::index() const {
    Int acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) {
        acc *= ctx_->size().p;
        acc += c_[j];
    }
    return acc;
}

std::uint64_t FieldElem::index64() const {
    if (ctx_->size().q64 == 0) throw DomainError("index64: field order exceeds 64 bits");
    std::uint64_t acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * ctx_->size().p + c_[j];
    return acc;
}

std::string FieldElem::str() const {
    if (ctx_->size().e == 1) return std::to_string(c_[0]);
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        if (!first) os << "+";
        if (j == 0 || c_[j] != 1) os << c_[j];
        if (j >= 1) {
            if (c_[j] != 1) os << "*";
            os << "x";
            if (j >= 2) os << "^" << j;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

namespace {

void require_same_ctx(const FieldElem& a, const FieldElem& b) {
    if (a.ctx().get() != b.ctx().get()) {
        throw DomainError("field elements belong to different contexts");
    }
}

} // namespace

bool operator==(const FieldElem& a, const FieldElem& b) {
    require_same_ctx(a, b);
    return a.coeffs() == b.coeffs();
}

bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    require_same_ctx(a, b);
    const std::uint64_t p = a.ctx()->size().p;
    std::vector<std::uint32_t> out(a.coeffs());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(out[j]) + b.coeffs()[j]) % p);
    }
    return FieldElem(a.ctx(), std::move(out));
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    require_same_ctx(a, b);
    const std::uint64_t p = a.ctx()->size().p;
    std::vector<std::uint32_t> out(a.coeffs());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(out[j]) + p - b.coeffs()[j]) % p);
    }
    return FieldElem(a.ctx(), std::move(out));
}

FieldElem neg(const FieldElem& a) {
    const std::uint64_t p = a.ctx()->size().p;
    std::vector<std::uint32_t> out(a.coeffs());
    for (auto& v : out) v = static_cast<std::uint32_t>((p - v) % p);
    return FieldElem(a.ctx(), std::move(out));
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    require_same_ctx(a, b);
    const auto& pp = a.ctx()->size();
    const std::uint64_t p = pp.p;
    const std::uint32_t e = pp.e;
    if (e == 1) {
        const std::uint64_t v = (static_cast<std::uint64_t>(a.coeffs()[0]) * b.coeffs()[0]) % p;
        return FieldElem(a.ctx(), {static_cast<std::uint32_t>(v)});
    }
    std::vector<std::uint32_t> conv(2 * e - 1, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
        if (a.coeffs()[i] == 0) continue;
        const std::uint64_t ai = a.coeffs()[i];
        for (std::uint32_t j = 0; j < e; ++j) {
            conv[i + j] = static_cast<std::uint32_t>((conv[i + j] + ai * b.coeffs()[j]) % p);
        }
    }
    return FieldElem(a.ctx(), a.ctx()->reduce(std::move(conv)));
}

FieldElem inv(const FieldElem& a) {
    if (a.is_zero()) throw DomainError("inverse of zero");
    return pow(a, a.ctx()->size().q - 2);
}

FieldElem pow(const FieldElem& a, const Int& k) {
    if (k < 0) throw DomainError("pow: negative exponent");
    FieldElem result = a.ctx()->one();
    if (k == 0) return result;
    FieldElem base = a;
    Int exp = k;
    while (exp > 0) {
        if (boost::multiprecision::bit_test(exp, 0)) result = result * base;
        exp >>= 1;
        if (exp > 0) base = base * base;
    }
    return result;
}

FieldElem frobenius(const FieldElem& a, std::uint32_t i) {
    Int exp = 1;
    for (std::uint32_t k = 0; k < i; ++k) exp *= a.ctx()->size().p;
    return pow(a, exp);
}

// --- FieldCtx ---------------------------------------------------------------

std::vector<std::uint32_t> FieldCtx::reduce(std::vector<std::uint32_t> conv) const {
    const std::uint64_t p = pp_.p;
    const std::uint32_t e = pp_.e;
    conv.resize(2 * e - 1, 0);
    std::vector<std::uint64_t> acc(e, 0);
    for (std::uint32_t j = 0; j < e; ++j) acc[j] = conv[j];
    for (std::uint32_t j = e; j < 2 * e - 1; ++j) {
        const std::uint64_t c = conv[j];
        if (c == 0) continue;
        const auto& row = reduction_[j - e];
        for (std::uint32_t k = 0; k < e; ++k) acc[k] = (acc[k] + c * row[k]) % p;
    }
    std::vector<std::uint32_t> out(e);
    for (std::uint32_t k = 0; k < e; ++k) out[k] = static_cast<std::uint32_t>(acc[k] % p);
    return out;
}

FieldElem FieldCtx::zero() const {
    return FieldElem(shared_from_this(), std::vector<std::uint32_t>(pp_.e, 0));
}

FieldElem FieldCtx::one() const {
    std::vector<std::uint32_t> c(pp_.e, 0);
    c[0] = 1;
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldCtx::from_residue(std::uint64_t v) const {
    std::vector<std::uint32_t> c(pp_.e, 0);
    c[0] = static_cast<std::uint32_t>(v % pp_.p);
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldCtx::from_coeffs(std::vector<std::uint32_t> c) const {
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldCtx::element_at(const Int& index) const {
    if (index < 0 || index >= pp_.q) throw DomainError("element_at: index out of range");
    Int v = index;
    std::vector<std::uint32_t> c(pp_.e, 0);
    for (std::uint32_t j = 0; j < pp_.e; ++j) {
        c[j] = static_cast<std::uint32_t>(v % pp_.p);
        v /= pp_.p;
    }
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldCtx::generator() const {
    if (pp_.e < 2) throw DomainError("generator: defined for e >= 2");
    std::vector<std::uint32_t> c(pp_.e, 0);
    c[1] = 1;
    return FieldElem(shared_from_this(), std::move(c));
}

FieldElem FieldCtx::primitive_root() const {
    std::call_once(root_once_, [this] {
        if (pp_.q64 == 0 || pp_.q64 > caps_.max_enum) {
            return; // checked below; call_once must not throw-and-retry paths
        }
        const std::uint64_t qm1 = pp_.q64 - 1;
        const auto factors = factorize_u64(qm1);
        for (std::uint64_t idx = 1; idx < pp_.q64; ++idx) {
            const FieldElem cand = element_at(Int(idx));
            bool ok = true;
            for (auto [l, mult] : factors) {
                (void)mult;
                if (pow(cand, Int(qm1 / l)).is_one()) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                primitive_root_ = cand.coeffs();
                return;
            }
        }
    });
    if (!primitive_root_) {
        throw DomainError("primitive_root: field order exceeds the enumeration cap");
    }
    return FieldElem(shared_from_this(), *primitive_root_);
}

FieldCtxPtr FieldCtx::create(std::uint64_t p, std::uint32_t e, const SizeCaps& caps) {
    if (e < 1) throw DomainError("field_create: e must be >= 1");
    if (!is_prime_u64(p)) throw DomainError("field_create: p must be prime");
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->caps_ = caps;
    ctx->pp_.p = p;
    ctx->pp_.e = e;
    ctx->pp_.q = int_pow(p, e);
    ctx->pp_.q64 = ctx->pp_.q <= std::numeric_limits<std::uint64_t>::max()
                       ? static_cast<std::uint64_t>(ctx->pp_.q)
                       : 0;
    if (e == 1) {
        ctx->modulus_ = {0, 1};
    } else {
        ctx->modulus_ = find_modulus(p, e);
        ctx->reduction_.resize(e - 1);
        // x^e mod m = -(lower part of m); then shift-and-reduce
        std::vector<std::uint64_t> row(e, 0);
        for (std::uint32_t j = 0; j < e; ++j) row[j] = (p - ctx->modulus_[j]) % p;
        for (std::uint32_t j = 0; j < e - 1; ++j) {
            ctx->reduction_[j].assign(row.begin(), row.end());
            // multiply row by x modulo m
            std::vector<std::uint64_t> next(e, 0);
            const std::uint64_t top = row[e - 1];
            for (std::uint32_t k = e - 1; k >= 1; --k) next[k] = row[k - 1];
            next[0] = 0;
            if (top != 0) {
                for (std::uint32_t k = 0; k < e; ++k) {
                    next[k] = (next[k] + top * ((p - ctx->modulus_[k]) % p)) % p;
                }
            }
            row = std::move(next);
        }
    }
    return ctx;
}

FieldCtxPtr FieldCtx::create_with_modulus(std::uint64_t p, std::vector<std::uint32_t> modulus,
                                          const SizeCaps& caps) {
    if (modulus.size() < 3) throw DomainError("create_with_modulus: degree must be >= 2");
    if (modulus.back() != 1) throw DomainError("create_with_modulus: modulus must be monic");
    Poly m(modulus.begin(), modulus.end());
    if (!poly_is_irreducible(m, p)) throw DomainError("create_with_modulus: modulus is reducible");
    const std::uint32_t e = static_cast<std::uint32_t>(modulus.size() - 1);
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->caps_ = caps;
    ctx->pp_.p = p;
    ctx->pp_.e = e;
    ctx->pp_.q = int_pow(p, e);
    ctx->pp_.q64 = ctx->pp_.q <= std::numeric_limits<std::uint64_t>::max()
                       ? static_cast<std::uint64_t>(ctx->pp_.q)
                       : 0;
    ctx->modulus_ = std::move(modulus);
    ctx->reduction_.resize(e - 1);
    std::vector<std::uint64_t> row(e, 0);
    for (std::uint32_t j = 0; j < e; ++j) row[j] = (p - ctx->modulus_[j]) % p;
    for (std::uint32_t j = 0; j < e - 1; ++j) {
        ctx->reduction_[j].assign(row.begin(), row.end());
        std::vector<std::uint64_t> next(e, 0);
        const std::uint64_t top = row[e - 1];
        for (std::uint32_t k = e - 1; k >= 1; --k) next[k] = row[k - 1];
        next[0] = 0;
        if (top != 0) {
            for (std::uint32_t k = 0; k < e; ++k) {
                next[k] = (next[k] + top * ((p - ctx->modulus_[k]) % p)) % p;
            }
        }
        row = std::move(next);
    }
    return ctx;
}

FieldCtxPtr field_create(std::uint64_t p, std::uint32_t e, const SizeCaps& caps) {
    return FieldCtx::create(p, e, caps);
}

// --- ExponentSet ------------------------------------------------------------

ExponentSet::ExponentSet(std::vector<std::uint64_t> tower_primes,
                         std::vector<std::uint64_t> generators) {
    for (std::uint64_t t : tower_primes) {
        if (t % 2 == 0 || !is_prime_u64(t)) {
            throw DomainError("ExponentSet: tower bases must be odd primes");
        }
    }
    for (std::uint64_t g : generators) {
        if (g == 0 || g % 2 == 0) throw DomainError("ExponentSet: generators must be odd");
    }
    std::sort(tower_primes.begin(), tower_primes.end());
    tower_primes.erase(std::unique(tower_primes.begin(), tower_primes.end()), tower_primes.end());
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    std::erase(generators, 1u); // 1 is always a member
    towers_ = std::move(tower_primes);
    gens_ = std::move(generators);
}

ExponentSet ExponentSet::parse(const std::string& text) {
    std::vector<std::uint64_t> towers, gens;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        const auto caret = tok.find('^');
        if (caret != std::string::npos) {
            const std::string suffix = tok.substr(caret + 1);
            if (suffix != "inf") throw DomainError("ExponentSet: expected '<prime>^inf'");
            towers.push_back(std::strtoull(tok.substr(0, caret).c_str(), nullptr, 10));
        } else {
            gens.push_back(std::strtoull(tok.c_str(), nullptr, 10));
        }
    }
    if (towers.empty() && gens.empty()) throw DomainError("ExponentSet: empty description");
    return ExponentSet(std::move(towers), std::move(gens));
}

bool ExponentSet::contains(std::uint64_t e) const {
    if (e == 0 || e % 2 == 0) return false;
    if (e == 1) return true;
    for (auto [l, k] : factorize_u64(e)) {
        if (std::find(towers_.begin(), towers_.end(), l) != towers_.end()) continue;
        std::uint64_t lk = 1;
        for (std::uint32_t i = 0; i < k; ++i) lk *= l;
        bool covered = false;
        for (std::uint64_t g : gens_) {
            if (g % lk == 0) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

std::vector<std::uint64_t> ExponentSet::members_upto(std::uint64_t cap) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 1; m <= cap; m += 2) {
        if (contains(m)) out.push_back(m);
    }
    return out;
}

std::optional<std::uint64_t> ExponentSet::next_member(std::uint64_t after,
                                                      std::uint64_t scan_cap) const {
    for (std::uint64_t m = after + 1; m <= scan_cap; ++m) {
        if (contains(m)) return m;
    }
    return std::nullopt;
}

bool ExponentSet::all_coprime_to(std::uint64_t d) const {
    for (std::uint64_t t : towers_) {
        if (std::gcd(t, d) != 1) return false;
    }
    for (std::uint64_t g : gens_) {
        if (std::gcd(g, d) != 1) return false;
    }
    return true;
}

std::string ExponentSet::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::uint64_t t : towers_) {
        if (!first) os << ",";
        os << t << "^inf";
        first = false;
    }
    for (std::uint64_t g : gens_) {
        if (!first) os << ",";
        os << g;
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

std::uint64_t min_common_level(const ExponentSet& E, std::uint64_t e1, std::uint64_t e2) {
    if (!E.contains(e1) || !E.contains(e2)) {
        throw DomainError("min_common_level: argument outside the exponent set");
    }
    return std::lcm(e1, e2);
}

// --- embeddings ---------------------------------------------------------------

FieldElem Embedding::apply(const FieldElem& x) const {
    if (src_e == dst_f) return x;
    const auto& dst_ctx = gen_powers[0].ctx();
    FieldElem acc = dst_ctx->zero();
    for (std::size_t j = 0; j < x.coeffs().size(); ++j) {
        const std::uint32_t c = x.coeffs()[j];
        if (c == 0) continue;
        acc = acc + gen_powers[j] * dst_ctx->from_residue(c);
    }
    return acc;
}

std::vector<FieldElem> roots_in_field(const std::vector<std::uint32_t>& poly,
                                      const FieldCtxPtr& big) {
    const std::uint64_t p = big->size().p;
    const std::uint32_t f = big->size().e;
    const std::uint32_t e = static_cast<std::uint32_t>(poly.size() - 1);
    if (f % e != 0) throw DomainError("roots_in_field: degree does not divide");

    auto eval_poly = [&](const FieldElem& x) {
        FieldElem acc = big->from_residue(poly[e]);
        for (std::uint32_t j = e; j-- > 0;) {
            acc = acc * x + big->from_residue(poly[j]);
        }
        return acc;
    };

    std::optional<FieldElem> first_root;

    if (big->size().q64 != 0 && big->size().q64 <= 1'000'000) {
        for (std::uint64_t idx = 0; idx < big->size().q64 && !first_root; ++idx) {
            FieldElem cand = big->element_at(Int(idx));
            if (eval_poly(cand).is_zero()) first_root = cand;
        }
    } else {
        // fixed subspace of Frobenius^e: solve (F^e - I) v = 0 over GF(p)
        Mat m(f, Vec(f, 0));
        for (std::uint32_t j = 0; j < f; ++j) {
            std::vector<std::uint32_t> mono(f, 0);
            mono[j] = 1;
            const FieldElem img = frobenius(big->from_coeffs(std::move(mono)), e);
            for (std::uint32_t i = 0; i < f; ++i) {
                m[i][j] = img.coeffs()[i];
            }
            m[j][j] = (m[j][j] + p - 1) % p;
        }
        const auto basis = gf_nullspace(std::move(m), p);
        if (basis.size() != e) throw DomainError("roots_in_field: unexpected subspace dimension");
        auto combo_elem = [&](const std::vector<std::uint64_t>& lambda) {
            std::vector<std::uint32_t> c(f, 0);
            for (std::uint32_t i = 0; i < e; ++i) {
                if (lambda[i] == 0) continue;
                for (std::uint32_t k = 0; k < f; ++k) {
                    c[k] = static_cast<std::uint32_t>((c[k] + lambda[i] * basis[i][k]) % p);
                }
            }
            return big->from_coeffs(std::move(c));
        };
        Int subfield_size = int_pow(p, e);
        if (subfield_size <= 10'000) {
            std::vector<std::uint64_t> lambda(e, 0);
            const std::uint64_t total = static_cast<std::uint64_t>(subfield_size);
            for (std::uint64_t n = 0; n < total && !first_root; ++n) {
                FieldElem cand = combo_elem(lambda);
                if (eval_poly(cand).is_zero()) first_root = cand;
                for (std::uint32_t pos = 0; pos < e; ++pos) {
                    if (++lambda[pos] < p) break;
                    lambda[pos] = 0;
                }
            }
        } else {
            if (subfield_size > big->caps().max_enum) {
                throw BudgetError("roots_in_field: subfield order exceeds the enumeration cap");
            }
            // transport: pick z in the subspace with minimal polynomial of
            // degree e, realize GF(p^e) as GF(p)[w]/mu, find the root there,
            // then map it back through w -> z
            auto minpoly_of = [&](const FieldElem& z) -> std::optional<std::vector<std::uint32_t>> {
                std::vector<Vec> pows;
                FieldElem zp = big->one();
                for (std::uint32_t k = 0; k <= e; ++k) {
                    Vec row(f);
                    for (std::uint32_t i = 0; i < f; ++i) row[i] = zp.coeffs()[i];
                    if (k < e) {
                        if (gf_solve(pows, row, p)) return std::nullopt; // degree < e
                    } else {
                        auto sol = gf_solve(pows, row, p);
                        if (!sol) return std::nullopt;
                        std::vector<std::uint32_t> mu(e + 1, 0);
                        mu[e] = 1;
                        for (std::uint32_t j = 0; j < e; ++j) {
                            mu[j] = static_cast<std::uint32_t>((p - (*sol)[j] % p) % p);
                        }
                        return mu;
                    }
                    pows.push_back(std::move(row));
                    zp = zp * z;
                }
                return std::nullopt;
            };

            std::optional<FieldElem> z;
            std::vector<std::uint32_t> mu;
            std::vector<std::vector<std::uint64_t>> candidates;
            for (std::uint32_t i = 0; i < e; ++i) { // partial sums of the basis
                std::vector<std::uint64_t> lambda(e, 0);
                for (std::uint32_t j = 0; j <= i; ++j) lambda[j] = 1;
                candidates.push_back(std::move(lambda));
            }
            std::uint64_t seed = 0x5eedULL;
            for (int extra = 0; extra < 64; ++extra) { // deterministic fallback draws
                std::vector<std::uint64_t> lambda(e, 0);
                for (std::uint32_t j = 0; j < e; ++j) lambda[j] = splitmix64(seed) % p;
                candidates.push_back(std::move(lambda));
            }
            for (const auto& lambda : candidates) {
                FieldElem cand = combo_elem(lambda);
                if (cand.is_zero()) continue;
                if (auto m2 = minpoly_of(cand)) {
                    z = cand;
                    mu = *m2;
                    break;
                }
            }
            if (!z) throw DomainError("roots_in_field: no primitive subspace element (internal)");

            FieldCtxPtr small = FieldCtx::create_with_modulus(p, mu, big->caps());
            std::optional<FieldElem> s;
            const std::uint64_t total = small->size().q64;
            for (std::uint64_t idx = 0; idx < total && !s; ++idx) {
                FieldElem cand = small->element_at(Int(idx));
                FieldElem acc = small->from_residue(poly[e]);
                for (std::uint32_t j = e; j-- > 0;) {
                    acc = acc * cand + small->from_residue(poly[j]);
                }
                if (acc.is_zero()) s = cand;
            }
            if (!s) throw DomainError("roots_in_field: polynomial has no root (internal)");
            // map back: r = sum s_j * z^j
            FieldElem r = big->zero();
            FieldElem zp = big->one();
            for (std::uint32_t j = 0; j < e; ++j) {
                const std::uint32_t c = s->coeffs()[j];
                if (c != 0) r = r + zp * big->from_residue(c);
                zp = zp * *z;
            }
            first_root = r;
        }
    }

    if (!first_root) throw DomainError("roots_in_field: polynomial has no root (internal)");

    // all roots are Frobenius conjugates of the first
    std::vector<FieldElem> roots;
    FieldElem r = *first_root;
    for (std::uint32_t k = 0; k < e; ++k) {
        if (!eval_poly(r).is_zero()) throw DomainError("roots_in_field: conjugate check failed");
        roots.push_back(r);
        r = frobenius(r, 1);
    }
    std::sort(roots.begin(), roots.end(),
              [](const FieldElem& a, const FieldElem& b) { return a.index() < b.index(); });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](const FieldElem& a, const FieldElem& b) { return a == b; }),
                roots.end());
    if (roots.size() != e) throw DomainError("roots_in_field: expected e distinct roots");
    return roots;
}

EmbeddingLattice::EmbeddingLattice(std::uint64_t p, const SizeCaps& caps) : p_(p), caps_(caps) {
    if (!is_prime_u64(p)) throw DomainError("EmbeddingLattice: p must be prime");
}

FieldCtxPtr EmbeddingLattice::level(std::uint32_t e) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = levels_.find(e);
    if (it != levels_.end()) return it->second;
    auto ctx = field_create(p_, e, caps_);
    levels_.emplace(e, ctx);
    return ctx;
}

const Embedding& EmbeddingLattice::embedding(std::uint32_t e, std::uint32_t f) {
    std::lock_guard<std::mutex> lock(mu_);
    return pin_locked(e, f);
}

const Embedding& EmbeddingLattice::pin_locked(std::uint32_t e, std::uint32_t f) {
    if (e == 0 || f % e != 0) throw DomainError("embedding: source degree must divide target");
    const auto key = std::make_pair(e, f);
    auto it = pinned_.find(key);
    if (it != pinned_.end()) return it->second;

    auto level_ctx = [&](std::uint32_t deg) {
        auto lit = levels_.find(deg);
        if (lit != levels_.end()) return lit->second;
        auto ctx = field_create(p_, deg, caps_);
        levels_.emplace(deg, ctx);
        return ctx;
    };

    FieldCtxPtr dst = level_ctx(f);
    Embedding emb;
    emb.src_e = e;
    emb.dst_f = f;

    if (e == f) {
        it = pinned_.emplace(key, std::move(emb)).first;
        return it->second;
    }
    if (e == 1) {
        emb.gen_powers = {dst->one()};
        it = pinned_.emplace(key, std::move(emb)).first;
        return it->second;
    }

    // pin all divisor paths first so the compatibility filter is complete
    std::vector<std::uint32_t> divisors;
    for (std::uint32_t d = 2; d < e; ++d) {
        if (e % d == 0) divisors.push_back(d);
    }
    for (std::uint32_t d : divisors) {
        pin_locked(d, e);
        pin_locked(d, f);
    }

    FieldCtxPtr src = level_ctx(e);
    const auto roots = roots_in_field(src->modulus(), dst);

    std::optional<Embedding> result;
    for (const FieldElem& r : roots) {
        std::vector<FieldElem> powers;
        powers.reserve(e);
        FieldElem acc = dst->one();
        for (std::uint32_t j = 0; j < e; ++j) {
            powers.push_back(acc);
            if (j + 1 < e) acc = acc * r;
        }
        auto apply_candidate = [&](const FieldElem& x) {
            FieldElem out = dst->zero();
            for (std::size_t j = 0; j < x.coeffs().size(); ++j) {
                const std::uint32_t c = x.coeffs()[j];
                if (c != 0) out = out + powers[j] * dst->from_residue(c);
            }
            return out;
        };
        bool compatible = true;
        for (std::uint32_t d : divisors) {
            const FieldElem& gen_in_e = pinned_.at({d, e}).gen_powers[1];
            const FieldElem& gen_in_f = pinned_.at({d, f}).gen_powers[1];
            if (apply_candidate(gen_in_e) != gen_in_f) {
                compatible = false;
                break;
            }
        }
        if (compatible) {
            result = Embedding{e, f, std::move(powers)};
            break; // roots are in ascending index order: first survivor is least
        }
    }
    if (!result) throw DomainError("embedding: no compatible root (internal)");
    it = pinned_.emplace(key, std::move(*result)).first;
    return it->second;
}

FieldElem EmbeddingLattice::embed(const FieldElem& x, std::uint32_t f) {
    const std::uint32_t e = x.ctx()->size().e;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto lit = levels_.find(e);
        if (lit == levels_.end() || lit->second.get() != x.ctx().get()) {
            throw DomainError("embed: element does not belong to this lattice");
        }
    }
    if (e == f) return x;
    const Embedding& emb = embedding(e, f);
    return emb.apply(x);
}

} // namespace radoforge
