#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace radoforge {

using Int = boost::multiprecision::cpp_int;

// Invalid arguments and violated preconditions. The CLI maps this to exit code 2.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configurable search budget ran out. Signals "not found within budget",
// never "does not exist". The CLI maps this to exit code 2 as well.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A verified mathematical claim failed on a concrete instance. Never thrown
// for bad input; reaching it means either a bug or a falsifying instance.
// The CLI maps this to exit code 1.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Budgets for witness searches and other unbounded scans.
struct SearchBudget {
    std::uint64_t max_candidates = 1'000'000; // scanned vertices / progression steps
    std::uint64_t max_level = 27;             // highest tower level a scan may enter
    std::uint64_t max_bits = 1'000'000;       // bit size cap for constructed integers
};

// Size caps for enumeration-based operations over finite fields.
struct SizeCaps {
    std::uint64_t max_enum = 100'000'000; // largest field order that may be enumerated
    std::uint32_t max_graph_order = 8192; // largest dense adjacency matrix
};

// splitmix64; used to expand seeds into hash keys and to drive test sampling.
std::uint64_t splitmix64(std::uint64_t& state);

// SipHash-2-4 over an arbitrary byte message with a 128-bit key.
std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, const unsigned char* data,
                        std::size_t len);

// Jacobi symbol (a/n) for odd n > 0. Returns -1, 0 or +1.
int jacobi(Int a, Int n);
int jacobi_u64(std::uint64_t a, std::uint64_t n);

// Strong probable prime test with the fixed base set {2,3,...,37}.
// Deterministic for n < 3.3e24; for larger n it is a heuristic (no desk-scale
// counterexample is known).
bool is_probable_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

// All primes <= limit, ascending.
std::vector<std::uint64_t> primes_upto(std::uint64_t limit);

// All prime powers p^e <= limit (e >= 1), ascending, as (p^e, e) pairs.
std::vector<std::pair<std::uint64_t, std::uint32_t>> prime_powers_upto(std::uint64_t limit);

// Factorization of n by trial division, as (prime, multiplicity) pairs.
std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize_u64(std::uint64_t n);

// Runs fn(begin, end) over [0, n) split into chunks on `threads` threads.
// Chunk boundaries depend only on n and threads, so reductions that combine
// per-chunk results in chunk order stay deterministic.
void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn);

// Decimal rendering without locale surprises.
std::string to_string(const Int& v);

} // namespace radoforge
