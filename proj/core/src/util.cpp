#include "radoforge/util.hpp"

#include <algorithm>
#include <cstring>
#include <thread>

namespace radoforge {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline void sipround(std::uint64_t& v0, std::uint64_t& v1, std::uint64_t& v2, std::uint64_t& v3) {
    v0 += v1; v1 = rotl64(v1, 13); v1 ^= v0; v0 = rotl64(v0, 32);
    v2 += v3; v3 = rotl64(v3, 16); v3 ^= v2;
    v0 += v3; v3 = rotl64(v3, 21); v3 ^= v0;
    v2 += v1; v1 = rotl64(v1, 17); v1 ^= v2; v2 = rotl64(v2, 32);
}

} // namespace

std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, const unsigned char* data,
                        std::size_t len) {
    std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
    std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
    std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
    std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

    const std::size_t blocks = len / 8;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::uint64_t m;
        std::memcpy(&m, data + 8 * i, 8);
        v3 ^= m;
        sipround(v0, v1, v2, v3);
        sipround(v0, v1, v2, v3);
        v0 ^= m;
    }

    std::uint64_t last = static_cast<std::uint64_t>(len & 0xff) << 56;
    const unsigned char* tail = data + 8 * blocks;
    switch (len & 7) {
        case 7: last |= static_cast<std::uint64_t>(tail[6]) << 48; [[fallthrough]];
        case 6: last |= static_cast<std::uint64_t>(tail[5]) << 40; [[fallthrough]];
        case 5: last |= static_cast<std::uint64_t>(tail[4]) << 32; [[fallthrough]];
        case 4: last |= static_cast<std::uint64_t>(tail[3]) << 24; [[fallthrough]];
        case 3: last |= static_cast<std::uint64_t>(tail[2]) << 16; [[fallthrough]];
        case 2: last |= static_cast<std::uint64_t>(tail[1]) << 8; [[fallthrough]];
        case 1: last |= static_cast<std::uint64_t>(tail[0]); break;
        case 0: break;
    }
    v3 ^= last;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    v0 ^= last;

    v2 ^= 0xff;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    return v0 ^ v1 ^ v2 ^ v3;
}

int jacobi(Int a, Int n) {
    if (n <= 0 || n % 2 == 0) throw DomainError("jacobi: n must be odd and positive");
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const Int r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        a.swap(n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int jacobi_u64(std::uint64_t a, std::uint64_t n) {
    if (n == 0 || n % 2 == 0) throw DomainError("jacobi: n must be odd and positive");
    a %= n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::uint64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

namespace {

constexpr std::uint64_t kSprpBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin_round(const Int& n, const Int& d, unsigned r, const Int& base) {
    Int x = boost::multiprecision::powm(base % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    for (std::uint64_t p : kSprpBases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    unsigned r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (std::uint64_t b : kSprpBases) {
        if (!miller_rabin_round(n, d, r, Int(b))) return false;
    }
    return true;
}

bool is_prime_u64(std::uint64_t n) { return is_probable_prime(Int(n)); }

std::vector<std::uint64_t> primes_upto(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (!sieve[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (sieve[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> prime_powers_upto(std::uint64_t limit) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    std::vector<std::uint64_t> value;
    for (std::uint64_t p : primes_upto(limit)) {
        std::uint64_t q = p;
        std::uint32_t e = 1;
        while (q <= limit) {
            out.emplace_back(q, e);
            value.push_back(q);
            if (q > limit / p) break;
            q *= p;
            ++e;
        }
    }
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    std::vector<std::pair<std::uint64_t, std::uint32_t>> sorted;
    sorted.reserve(out.size());
    for (std::size_t i : order) sorted.push_back(out[i]);
    return sorted;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize_u64(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        std::uint32_t k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.emplace_back(p, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn) {
    if (threads == 0) threads = 1;
    threads = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n, 1));
    if (threads <= 1 || n == 0) {
        fn(0, n, 0);
        return;
    }
    const std::uint64_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = std::min<std::uint64_t>(n, t * chunk);
        const std::uint64_t hi = std::min<std::uint64_t>(n, lo + chunk);
        pool.emplace_back([=, &fn] { fn(lo, hi, t); });
    }
    for (auto& th : pool) th.join();
}

std::string to_string(const Int& v) { return v.str(); }

} // namespace radoforge
