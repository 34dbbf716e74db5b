#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trinom/factor_engine.hpp"
#include "trinom/trinomial.hpp"

namespace trinom {

// Verifiable evidence for one trinomial verdict. One certificate per line:
//   <r> <s> factor <d> <hex>     smallest-degree, lexicographically least factor
//   <r> <s> irreducible
//   <r> <s> residue <hex8+>      low coefficients of x^(2^r) + x mod T,
//                                width 32/64/128 implied by the hex length
struct Certificate {
    enum class Kind { Factor, Irreducible, Residue };

    std::uint64_t r = 0;
    std::uint64_t s = 0;
    Kind kind = Kind::Irreducible;
    std::uint64_t factor_degree = 0;  // Factor only
    std::string factor_hex;           // Factor only
    std::string residue_hex;          // Residue only

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

Certificate emit(const Trinomial& t, const SearchOutcome& outcome);

// Residue fallback for reducible trinomials; widens 32 -> 64 -> 128 while
// the low window is all zero. Throws if the full residue vanishes (the
// trinomial passes the x^(2^r) = x test, so there is nothing to certify).
Certificate emit_residue(const Trinomial& t);

std::string serialize(const Certificate& c);

struct CertificateParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Certificate parse_certificate(std::string_view line);

enum class VerifyTier { Quick, Full };

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    bool valid = true;
    bool full_tier_applied = false;  // Full requested and r within the desk bound
    std::vector<VerifyCheck> checks;
};

// Quick tier re-derives everything reachable at any degree: factor decode,
// degree, divisibility (via exponentiation mod the factor, so cost is
// independent of r), irreducibility of the factor, the direct test for
// Irreducible certificates, and residue recomputation. Full tier (r up to
// full_bound) additionally re-searches to confirm minimality and
// lexicographic leastness. Failed checks mark the report invalid; only a
// malformed certificate object itself throws.
VerifyReport verify(const Certificate& c, VerifyTier tier, std::uint64_t full_bound = 512);

}  // namespace trinom
