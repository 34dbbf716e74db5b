#include "trinom/swan.hpp"

#include <algorithm>
#include <stdexcept>

namespace trinom {

FactorParity factor_parity(std::uint64_t r, std::uint64_t s) {
    if (s == 0 || s >= r) throw std::invalid_argument("factor_parity requires r > s > 0");

    if ((r & 1) == 0 && (s & 1) == 0) {
        // T = U^2 for the trinomial (r/2, s/2): twice U's factor count.
        return FactorParity::Even;
    }
    if ((r & 1) == 1 && (s & 1) == 1) {
        // Reciprocal has the same factor count and lands in the r+s odd case.
        s = r - s;
    }

    bool even = false;
    if ((r & 1) == 0) {
        // rs/2 mod 4 without forming the full product.
        const std::uint64_t m = ((r / 2) % 4) * (s % 4) % 4;
        even = r != 2 * s && (m == 0 || m == 1);
    } else {
        const bool s_divides_2r = (2 * (r % s)) % s == 0;
        const std::uint64_t r8 = r % 8;
        if (!s_divides_2r) {
            even = r8 == 3 || r8 == 5;
        } else {
            even = r8 == 1 || r8 == 7;
        }
    }
    return even ? FactorParity::Even : FactorParity::Odd;
}

const MersenneTable& MersenneTable::known() {
    static const MersenneTable table = [] {
        MersenneTable t;
        t.exponents_ = {2,        3,        5,        7,        13,       17,       19,
                        31,       61,       89,       107,      127,      521,      607,
                        1279,     2203,     2281,     3217,     4253,     4423,     9689,
                        9941,     11213,    19937,    21701,    23209,    44497,    86243,
                        110503,   132049,   216091,   756839,   859433,   1257787,  1398269,
                        2976221,  3021377,  6972593,  13466917, 20996011, 24036583, 25964951,
                        30402457, 32582657, 37156667, 42643801, 43112609};
        return t;
    }();
    return table;
}

MersenneTable MersenneTable::extended(std::span<const std::uint64_t> extra) const {
    MersenneTable t;
    t.exponents_ = exponents_;
    t.exponents_.insert(t.exponents_.end(), extra.begin(), extra.end());
    std::sort(t.exponents_.begin(), t.exponents_.end());
    t.exponents_.erase(std::unique(t.exponents_.begin(), t.exponents_.end()), t.exponents_.end());
    return t;
}

bool MersenneTable::contains(std::uint64_t r) const {
    return std::binary_search(exponents_.begin(), exponents_.end(), r);
}

MersenneStatus mersenne_candidate(std::uint64_t r, const MersenneTable& table) {
    if (r <= 2) throw std::invalid_argument("mersenne_candidate requires r > 2");
    if (!table.contains(r)) return MersenneStatus::NotKnownMersenneExponent;
    const std::uint64_t r8 = r % 8;
    return (r8 == 1 || r8 == 7) ? MersenneStatus::Candidate : MersenneStatus::RuledOutBySwan;
}

}  // namespace trinom
