#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace trinom {

// Parity of the number of irreducible factors (counted with multiplicity).
// Even implies reducible.
enum class FactorParity { Even, Odd };

// Classifies x^r + x^s + 1 by (r, s) arithmetic alone: both even is a
// square (Even); both odd defers to the reciprocal (r, r-s); otherwise the
// three even-parity cases are
//   a) r even, r != 2s, rs/2 = 0 or 1 (mod 4)
//   b) r odd, s not a divisor of 2r, r = +-3 (mod 8)
//   c) r odd, s a divisor of 2r,     r = +-1 (mod 8)
// and everything else is Odd. Throws std::invalid_argument unless r > s > 0.
FactorParity factor_parity(std::uint64_t r, std::uint64_t s);

enum class MersenneStatus { Candidate, RuledOutBySwan, NotKnownMersenneExponent };

// Known Mersenne exponents, embedded through 43112609. extended() is the
// hook for exponents discovered later.
class MersenneTable {
public:
    static const MersenneTable& known();
    MersenneTable extended(std::span<const std::uint64_t> extra) const;

    bool contains(std::uint64_t r) const;
    std::span<const std::uint64_t> exponents() const { return exponents_; }

private:
    std::vector<std::uint64_t> exponents_;
    MersenneTable() = default;
};

// Candidate iff r is a known Mersenne exponent with r = +-1 (mod 8);
// RuledOutBySwan for +-3 (mod 8). Degrees ruled out here still admit the
// s in {2, r-2} exceptions, which the search driver tests explicitly.
// Requires r > 2.
MersenneStatus mersenne_candidate(std::uint64_t r, const MersenneTable& table = MersenneTable::known());

}  // namespace trinom
