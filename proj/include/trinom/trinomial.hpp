#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trinom/gf2poly.hpp"

namespace trinom {

// The sparse modulus x^r + x^s + 1 with r > s > 0. Binomials and x^r + 1 are
// not representable. The canonical search form additionally has s <= r/2;
// reciprocals with s > r/2 remain representable.
struct Trinomial {
    std::uint64_t r;
    std::uint64_t s;

    Trinomial(std::uint64_t r_, std::uint64_t s_);

    bool is_canonical() const { return s <= r - s; }
    Trinomial reciprocal() const { return Trinomial(r, r - s); }
    DensePoly dense() const;

    friend bool operator==(const Trinomial&, const Trinomial&) = default;
};

// Fold-reduce p modulo t using x^n = x^(n+s-r) + x^(n-r): each pass moves the
// part above x^r down by (r-s) and r. Two passes suffice for s <= r/2; the
// loop also covers reciprocal moduli. Requires deg p <= 2r-2 (throws
// std::invalid_argument above that; the identity would need pre-splitting).
DensePoly reduce(const DensePoly& p, const Trinomial& t);

// square / multiply followed by reduce; inputs must have degree < r.
DensePoly mod_square(const DensePoly& a, const Trinomial& t);
DensePoly mod_mul(const DensePoly& a, const DensePoly& b, const Trinomial& t);

// a * x mod t, one shift and at most one tap. Input degree < r.
DensePoly mod_mul_x(const DensePoly& a, const Trinomial& t);

// The iterate x^(2^d) mod t, advanced by repeated modular squaring. Owns its
// buffers so long chains do not allocate per step; single-owner mutable
// state, distinct chains may run concurrently.
class PowerChain {
public:
    explicit PowerChain(Trinomial t);

    const Trinomial& trinomial() const { return t_; }
    std::uint64_t step() const { return d_; }
    DensePoly value() const;

    void advance(std::uint64_t steps = 1);

    // Checkpoint record: "chain r s d hex(value)".
    std::string checkpoint_line() const;
    static PowerChain from_checkpoint_line(std::string_view line);

private:
    Trinomial t_;
    std::uint64_t d_ = 0;
    std::vector<Word> value_;    // r bits, current x^(2^d) mod t
    std::vector<Word> scratch_;  // 2r bits, square target

    friend class BlockScanner;
};

namespace detail {
// In-place fold of an n-word buffer to degree < r modulo x^r+x^s+1.
void fold_reduce(Word* words, std::size_t nwords, std::uint64_t r, std::uint64_t s);
}  // namespace detail

}  // namespace trinom
