#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trinom/gf2poly.hpp"
#include "trinom/swan.hpp"
#include "trinom/trinomial.hpp"

namespace trinom {

enum class SearchMode { Naive, SingleLevel, TwoLevel };

// Parameters for the DDF scan. block_m is the number of consecutive degrees
// folded into one accumulated product; cost_ratio_hint approximates the
// multiplication/squaring (or GCD/multiplication) cost ratio and sets the
// default block_m = max(2, round(sqrt(hint))). The blocking level is a
// performance transformation only: all modes return identical outcomes.
struct BlockingSchedule {
    SearchMode mode = SearchMode::TwoLevel;
    unsigned block_m = 20;
    double cost_ratio_hint = 400.0;

    static BlockingSchedule naive();
    static BlockingSchedule single_level(unsigned m = 0);  // m = 0: default from hint 40
    static BlockingSchedule two_level(unsigned m = 0);     // m = 0: default from hint 400
};

struct SearchOutcome {
    enum class Verdict { SmallestFactor, Irreducible };
    Verdict verdict = Verdict::Irreducible;
    DensePoly factor;                 // lexicographically least, SmallestFactor only
    std::uint64_t factor_degree = 0;  // d, SmallestFactor only
    std::vector<DensePoly> siblings;  // all degree-d irreducible factors, ascending
};

// Raised when the arithmetic contradicts itself (e.g. Swan says Even but no
// factor was found, or a block GCD hit vanishes on rescan). Mirrors the
// double-checking stance of the search: such a state means a bug or a
// hardware fault, not a mathematical outcome.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// Small-degree sieve via the congruence trick: a factor of degree d (or a
// divisor of d) shows up in gcd(x^(r mod d') + x^(s mod d') + 1, x^d' - 1)
// with d' = 2^d - 1. Scans d = 2..dmax ascending and returns the first hit
// together with the product of its degree-d factors. Requires 2^dmax < r.
std::optional<std::pair<std::uint64_t, DensePoly>> sieve_small(const Trinomial& t, unsigned dmax);

// Hooks into the long-running scan, used for checkpointing. The chain
// callback fires in Naive mode every chain_checkpoint_every squarings;
// resume_chain (Naive mode) restarts a scan from a checkpointed chain state,
// treating all degrees <= its step as already cleared.
struct ScanHooks {
    std::uint64_t chain_checkpoint_every = 0;
    std::function<void(const PowerChain&)> on_chain_checkpoint;
    const PowerChain* resume_chain = nullptr;
};

// Ascending DDF capped at dmax: returns the smallest factor degree d <= dmax
// together with gcd(T, x^(2^d) + x), the product of all degree-d irreducible
// factors, or nullopt when no factor of degree <= dmax exists.
std::optional<std::pair<std::uint64_t, DensePoly>> smallest_factor_up_to(
    const Trinomial& t, const BlockingSchedule& schedule, std::uint64_t dmax,
    const ScanHooks* hooks = nullptr);

// Full verdict for one trinomial: scans degrees ascending up to r/3 (Odd
// parity) or r/2 (Even), splits the first hit with edf and returns the
// lexicographically least smallest-degree factor, or Irreducible (confirmed
// by the direct test). Even parity with no factor found is impossible and
// raises InternalConsistencyError.
SearchOutcome ddf_smallest(const Trinomial& t, const BlockingSchedule& schedule, FactorParity parity,
                           const ScanHooks* hooks = nullptr);

// Equal-degree factorization by trace splitting with the deterministic
// splitter sequence x, x+1, x^2, x^2+1, ... Input must be a product of
// distinct irreducibles of degree exactly d; output is sorted ascending.
std::vector<DensePoly> edf(const DensePoly& g, std::uint64_t d);

// Direct irreducibility test: x^(2^n) = x (mod p) plus, for composite n,
// gcd(x^(2^(n/q)) + x, p) = 1 for every prime q | n. A zero constant term
// short-circuits to false (factor x).
bool irreducible_direct(const DensePoly& p);

// Primitivity of an irreducible p of degree n given the complete prime
// factorization of 2^n - 1: true iff x^((2^n-1)/q) != 1 (mod p) for every
// prime q. Throws if the factorization does not multiply back to 2^n - 1.
bool primitive_small(const DensePoly& p, std::span<const std::uint64_t> mersenne_factors);

// Complete factorization of 2^n - 1 for 1 <= n <= 40, ascending with
// multiplicity, by trial division over odd primes below 2^20 plus a
// primality check on the cofactor. Never returns a partial answer.
std::vector<std::uint64_t> factor_mersenne_small(unsigned n);

// Independent factorization oracle for degree <= 24: trial division against
// irreducibles enumerated in ascending bit-pattern order (checked with
// irreducible_direct). Returns the full multiset, ascending.
std::vector<DensePoly> brute_force_factorization(const DensePoly& p);

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

}  // namespace trinom
