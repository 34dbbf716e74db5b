#include "trinom/trinomial.hpp"

#include <charconv>
#include <stdexcept>

namespace trinom {

Trinomial::Trinomial(std::uint64_t r_, std::uint64_t s_) : r(r_), s(s_) {
    if (!(r > s && s > 0)) throw std::invalid_argument("trinomial requires r > s > 0");
}

DensePoly Trinomial::dense() const {
    std::vector<Word> w(r / kWordBits + 1, 0);
    w[0] |= 1;
    w[s / kWordBits] |= Word{1} << (s % kWordBits);
    w[r / kWordBits] |= Word{1} << (r % kWordBits);
    return DensePoly::from_words(std::move(w));
}

namespace detail {

void fold_reduce(Word* w, std::size_t n, std::uint64_t r, std::uint64_t s) {
    const std::size_t bw = static_cast<std::size_t>(r / kWordBits);
    const unsigned bsh = static_cast<unsigned>(r % kWordBits);
    while (true) {
        const std::int64_t deg = degree_of_words(w, n);
        if (deg < static_cast<std::int64_t>(r)) return;
        // One top-down sweep. Clearing word jw and folding it to (64*jw - r)
        // and (64*jw - r + s) only touches strictly lower words, so bits
        // rippled back in are picked up as the sweep descends. Ripple above
        // x^r out of the straddle word is caught by the outer loop; for
        // canonical s <= r/2 that second pass is the last.
        for (std::size_t jw = static_cast<std::size_t>(deg / kWordBits);
             jw > bw || (jw == bw && bsh == 0); --jw) {
            const Word v = w[jw];
            if (v) {
                w[jw] = 0;
                const std::uint64_t base = jw * kWordBits - r;
                xor_shifted(w, &v, 1, base);
                xor_shifted(w, &v, 1, base + s);
            }
            if (jw == 0) break;
        }
        if (bsh != 0) {
            const Word high = w[bw] >> bsh;
            if (high) {
                w[bw] &= (Word{1} << bsh) - 1;
                xor_shifted(w, &high, 1, 0);
                xor_shifted(w, &high, 1, s);
            }
        }
    }
}

}  // namespace detail

DensePoly reduce(const DensePoly& p, const Trinomial& t) {
    if (p.degree() < static_cast<std::int64_t>(t.r)) return p;
    if (p.degree() > static_cast<std::int64_t>(2 * t.r - 2))
        throw std::invalid_argument("reduce: degree must be <= 2r-2; split the input first");
    std::vector<Word> w(2 * ((t.r + kWordBits - 1) / kWordBits), 0);
    const auto src = p.words();
    std::copy(src.begin(), src.end(), w.begin());
    detail::fold_reduce(w.data(), w.size(), t.r, t.s);
    return DensePoly::from_words(std::move(w));
}

DensePoly mod_square(const DensePoly& a, const Trinomial& t) {
    if (a.degree() >= static_cast<std::int64_t>(t.r))
        throw std::invalid_argument("mod_square: input degree must be < r");
    return reduce(square(a), t);
}

DensePoly mod_mul(const DensePoly& a, const DensePoly& b, const Trinomial& t) {
    if (a.degree() >= static_cast<std::int64_t>(t.r) || b.degree() >= static_cast<std::int64_t>(t.r))
        throw std::invalid_argument("mod_mul: input degrees must be < r");
    return reduce(mul(a, b), t);
}

DensePoly mod_mul_x(const DensePoly& a, const Trinomial& t) {
    if (a.degree() >= static_cast<std::int64_t>(t.r))
        throw std::invalid_argument("mod_mul_x: input degree must be < r");
    DensePoly v = shift_left(a, 1);
    if (v.degree() == static_cast<std::int64_t>(t.r)) {
        std::vector<Word> w(v.words().begin(), v.words().end());
        w[t.r / kWordBits] ^= Word{1} << (t.r % kWordBits);
        w.resize(t.r / kWordBits + 1, 0);
        w[t.s / kWordBits] ^= Word{1} << (t.s % kWordBits);
        w[0] ^= 1;
        return DensePoly::from_words(std::move(w));
    }
    return v;
}

PowerChain::PowerChain(Trinomial t) : t_(t) {
    const std::size_t nw = (t_.r + kWordBits - 1) / kWordBits;
    value_.assign(nw, 0);
    scratch_.assign(2 * nw, 0);
    value_[1 / kWordBits] |= Word{1} << 1;  // x (r >= 2 so deg 1 < r)
}

DensePoly PowerChain::value() const {
    return DensePoly::from_words(std::vector<Word>(value_.begin(), value_.end()));
}

void PowerChain::advance(std::uint64_t steps) {
    const std::size_t nw = value_.size();
    for (std::uint64_t k = 0; k < steps; ++k) {
        detail::square_words(scratch_.data(), value_.data(), nw);
        detail::fold_reduce(scratch_.data(), scratch_.size(), t_.r, t_.s);
        std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(nw), value_.begin());
        std::fill(scratch_.begin() + static_cast<std::ptrdiff_t>(nw), scratch_.end(), 0);
        ++d_;
    }
}

std::string PowerChain::checkpoint_line() const {
    return "chain " + std::to_string(t_.r) + " " + std::to_string(t_.s) + " " + std::to_string(d_) +
           " " + encode_hex(value());
}

namespace {
std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument(std::string("chain checkpoint: bad ") + what);
    return v;
}
}  // namespace

PowerChain PowerChain::from_checkpoint_line(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const std::size_t sp = line.find(' ', pos);
        const std::size_t end = sp == std::string_view::npos ? line.size() : sp;
        if (end > pos) f.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    if (f.size() != 5 || f[0] != "chain")
        throw std::invalid_argument("chain checkpoint: expected 'chain r s d hex'");
    PowerChain c(Trinomial(parse_u64(f[1], "r"), parse_u64(f[2], "s")));
    c.d_ = parse_u64(f[3], "d");
    const DensePoly v = decode_hex(f[4]);
    if (v.degree() >= static_cast<std::int64_t>(c.t_.r))
        throw std::invalid_argument("chain checkpoint: value degree out of range");
    const auto wv = v.words();
    std::copy(wv.begin(), wv.end(), c.value_.begin());
    return c;
}

}  // namespace trinom
