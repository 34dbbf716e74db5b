#include "trinom/gf2poly.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace trinom {

namespace detail {

std::int64_t degree_of_words(const Word* w, std::size_t n) {
    for (std::size_t i = n; i-- > 0;) {
        if (w[i]) {
            return static_cast<std::int64_t>(i) * kWordBits + (kWordBits - 1 - std::countl_zero(w[i]));
        }
    }
    return -1;
}

void xor_shifted(Word* dst, const Word* src, std::size_t nsrc, std::uint64_t bit_shift) {
    const std::size_t off = bit_shift / kWordBits;
    const unsigned sh = bit_shift % kWordBits;
    if (sh == 0) {
        for (std::size_t i = 0; i < nsrc; ++i) dst[off + i] ^= src[i];
    } else {
        Word carry = 0;
        for (std::size_t i = 0; i < nsrc; ++i) {
            dst[off + i] ^= (src[i] << sh) | carry;
            carry = src[i] >> (kWordBits - sh);
        }
        // A zero carry is skipped so the destination never needs a spare
        // word beyond the mathematical result.
        if (carry) dst[off + nsrc] ^= carry;
    }
}

namespace {

// Interleaves each byte's bits with zeros: abcd efgh -> 0a0b0c0d 0e0f0g0h.
constexpr std::array<std::uint16_t, 256> make_spread_table() {
    std::array<std::uint16_t, 256> t{};
    for (unsigned v = 0; v < 256; ++v) {
        std::uint16_t s = 0;
        for (unsigned b = 0; b < 8; ++b)
            if (v & (1u << b)) s |= static_cast<std::uint16_t>(1u << (2 * b));
        t[v] = s;
    }
    return t;
}

constexpr auto kSpread = make_spread_table();

inline Word spread_half(std::uint32_t half) {
    return static_cast<Word>(kSpread[half & 0xff]) | static_cast<Word>(kSpread[(half >> 8) & 0xff]) << 16 |
           static_cast<Word>(kSpread[(half >> 16) & 0xff]) << 32 |
           static_cast<Word>(kSpread[(half >> 24) & 0xff]) << 48;
}

}  // namespace

void square_words(Word* out, const Word* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = spread_half(static_cast<std::uint32_t>(src[i]));
        out[2 * i + 1] = spread_half(static_cast<std::uint32_t>(src[i] >> 32));
    }
}

void mul_comb(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb) {
    // 4-bit window: tab[u] = u(x)*b, one extra word for the <<3 spill.
    const std::size_t tw = nb + 1;
    std::vector<Word> tab(16 * tw, 0);
    auto entry = [&](unsigned u) { return tab.data() + u * tw; };
    std::copy(b, b + nb, entry(1));
    for (unsigned u : {2u, 4u, 8u}) {
        const Word* prev = entry(u >> 1);
        Word* e = entry(u);
        Word carry = 0;
        for (std::size_t i = 0; i < tw; ++i) {
            e[i] = (prev[i] << 1) | carry;
            carry = prev[i] >> (kWordBits - 1);
        }
    }
    for (unsigned u = 3; u < 16; ++u) {
        if ((u & (u - 1)) == 0) continue;
        const unsigned hi = 1u << (31 - std::countl_zero(u));
        const Word* p = entry(hi);
        const Word* q = entry(u ^ hi);
        Word* e = entry(u);
        for (std::size_t i = 0; i < tw; ++i) e[i] = p[i] ^ q[i];
    }

    // High nibble slots first; shift the accumulated result left 4 bits
    // between slots so each pass lands at the right offset.
    const std::size_t nr = na + nb + 1;
    for (unsigned slot = 16; slot-- > 0;) {
        if (slot != 15) {
            Word carry = 0;
            for (std::size_t i = 0; i < nr; ++i) {
                Word v = res[i];
                res[i] = (v << 4) | carry;
                carry = v >> (kWordBits - 4);
            }
        }
        const unsigned sh = slot * 4;
        for (std::size_t i = 0; i < na; ++i) {
            const unsigned u = (a[i] >> sh) & 0xf;
            if (u) {
                Word* d = res + i;
                const Word* e = entry(u);
                for (std::size_t k = 0; k < tw; ++k) d[k] ^= e[k];
            }
        }
    }
}

namespace {

void mul_dispatch(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb);

void mul_karatsuba(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb) {
    const std::size_t k = (std::max(na, nb) + 1) / 2;
    if (na <= k || nb <= k) {
        // Too lopsided to split both sides; halve the longer operand.
        if (na >= nb) {
            mul_dispatch(res, a, k, b, nb);
            std::vector<Word> hi(na - k + nb + 1, 0);
            mul_dispatch(hi.data(), a + k, na - k, b, nb);
            for (std::size_t i = 0; i < hi.size() && k + i < na + nb + 1; ++i) res[k + i] ^= hi[i];
        } else {
            mul_dispatch(res, a, na, b, k);
            std::vector<Word> hi(nb - k + na + 1, 0);
            mul_dispatch(hi.data(), a, na, b + k, nb - k);
            for (std::size_t i = 0; i < hi.size() && k + i < na + nb + 1; ++i) res[k + i] ^= hi[i];
        }
        return;
    }
    const std::size_t na1 = na - k, nb1 = nb - k;
    std::vector<Word> z0(2 * k + 1, 0);
    mul_dispatch(z0.data(), a, k, b, k);
    std::vector<Word> z2(na1 + nb1 + 1, 0);
    mul_dispatch(z2.data(), a + k, na1, b + k, nb1);

    std::vector<Word> as(k, 0), bs(k, 0);
    std::copy(a, a + k, as.begin());
    for (std::size_t i = 0; i < na1; ++i) as[i] ^= a[k + i];
    std::copy(b, b + k, bs.begin());
    for (std::size_t i = 0; i < nb1; ++i) bs[i] ^= b[k + i];
    std::vector<Word> z1(2 * k + 1, 0);
    mul_dispatch(z1.data(), as.data(), k, bs.data(), k);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] ^= z0[i];
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] ^= z2[i];

    for (std::size_t i = 0; i < z0.size(); ++i) res[i] ^= z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) res[k + i] ^= z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) res[2 * k + i] ^= z2[i];
}

void mul_dispatch(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb) {
    if (na == 0 || nb == 0) return;
    if (std::min(na, nb) <= detail::kKaratsubaThresholdWords) {
        if (detail::clmul_available()) {
            detail::mul_clmul(res, a, na, b, nb);
        } else {
            detail::mul_comb(res, a, na, b, nb);
        }
        return;
    }
    mul_karatsuba(res, a, na, b, nb);
}

}  // namespace

void mul_words(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb) {
    mul_dispatch(res, a, na, b, nb);
}

}  // namespace detail

void DensePoly::normalize() {
    degree_ = detail::degree_of_words(words_.data(), words_.size());
    words_.resize(degree_ < 0 ? 0 : static_cast<std::size_t>(degree_ / kWordBits + 1));
}

DensePoly DensePoly::monomial(std::uint64_t k) {
    DensePoly p;
    p.words_.assign(k / kWordBits + 1, 0);
    p.words_.back() = Word{1} << (k % kWordBits);
    p.degree_ = static_cast<std::int64_t>(k);
    return p;
}

DensePoly DensePoly::from_coeff_bits(Word bits) {
    DensePoly p;
    if (bits) {
        p.words_.push_back(bits);
        p.degree_ = kWordBits - 1 - std::countl_zero(bits);
    }
    return p;
}

DensePoly DensePoly::from_words(std::vector<Word> words) {
    DensePoly p;
    p.words_ = std::move(words);
    p.normalize();
    return p;
}

bool DensePoly::coeff(std::uint64_t k) const {
    const std::size_t i = k / kWordBits;
    if (i >= words_.size()) return false;
    return (words_[i] >> (k % kWordBits)) & 1;
}

bool operator<(const DensePoly& a, const DensePoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const auto& aw = a.words();
    const auto& bw = b.words();
    for (std::size_t i = aw.size(); i-- > 0;) {
        if (aw[i] != bw[i]) return aw[i] < bw[i];
    }
    return false;
}

DensePoly add(const DensePoly& a, const DensePoly& b) {
    const DensePoly& lo = a.word_count() <= b.word_count() ? a : b;
    const DensePoly& hi = a.word_count() <= b.word_count() ? b : a;
    DensePoly r;
    r.words_ = hi.words_;
    for (std::size_t i = 0; i < lo.words_.size(); ++i) r.words_[i] ^= lo.words_[i];
    r.normalize();
    return r;
}

DensePoly mul(const DensePoly& a, const DensePoly& b) {
    if (a.is_zero() || b.is_zero()) return DensePoly::zero();
    DensePoly r;
    r.words_.assign(a.word_count() + b.word_count() + 1, 0);
    detail::mul_words(r.words_.data(), a.words_.data(), a.word_count(), b.words_.data(), b.word_count());
    r.normalize();
    return r;
}

DensePoly square(const DensePoly& a) {
    if (a.is_zero()) return DensePoly::zero();
    DensePoly r;
    r.words_.assign(2 * a.word_count(), 0);
    detail::square_words(r.words_.data(), a.words_.data(), a.word_count());
    r.normalize();
    return r;
}

DensePoly shift_left(const DensePoly& a, std::uint64_t k) {
    if (a.is_zero() || k == 0) return a;
    DensePoly r;
    r.words_.assign(a.word_count() + k / kWordBits + 1, 0);
    detail::xor_shifted(r.words_.data(), a.words_.data(), a.word_count(), k);
    r.normalize();
    return r;
}

DensePoly shift_right(const DensePoly& a, std::uint64_t k) {
    if (a.is_zero()) return a;
    if (k == 0) return a;
    if (static_cast<std::int64_t>(k) > a.degree()) return DensePoly::zero();
    const std::size_t off = k / kWordBits;
    const unsigned sh = k % kWordBits;
    DensePoly r;
    r.words_.assign(a.word_count() - off, 0);
    for (std::size_t i = 0; i < r.words_.size(); ++i) {
        Word v = a.words_[off + i] >> sh;
        if (sh && off + i + 1 < a.word_count()) v |= a.words_[off + i + 1] << (kWordBits - sh);
        r.words_[i] = v;
    }
    r.normalize();
    return r;
}

DensePoly truncate(const DensePoly& a, std::uint64_t k) {
    if (a.is_zero() || k == 0) return k == 0 ? DensePoly::zero() : a;
    if (static_cast<std::int64_t>(k) > a.degree()) return a;
    DensePoly r;
    r.words_.assign(a.words_.begin(), a.words_.begin() + (k + kWordBits - 1) / kWordBits);
    if (k % kWordBits) r.words_.back() &= (Word{1} << (k % kWordBits)) - 1;
    r.normalize();
    return r;
}

DivRem divrem(const DensePoly& a, const DensePoly& b) {
    if (b.is_zero()) throw std::invalid_argument("divrem: division by zero polynomial");
    if (a.degree() < b.degree()) return {DensePoly::zero(), a};

    const std::int64_t db = b.degree();
    DivRem out;
    out.remainder = a;
    auto& rw = out.remainder.words_;
    out.quotient.words_.assign(static_cast<std::size_t>((a.degree() - db) / kWordBits + 1), 0);
    auto& qw = out.quotient.words_;

    std::int64_t n = a.degree();
    while (n >= db) {
        if ((rw[n / kWordBits] >> (n % kWordBits)) & 1) {
            const std::uint64_t k = static_cast<std::uint64_t>(n - db);
            qw[k / kWordBits] |= Word{1} << (k % kWordBits);
            detail::xor_shifted(rw.data(), b.words_.data(), b.word_count(), k);
        }
        --n;
        // Skip over zero words when scanning down for the next set bit.
        while (n >= db) {
            const Word w = rw[n / kWordBits] & (n % kWordBits == kWordBits - 1
                                                    ? ~Word{0}
                                                    : ((Word{1} << (n % kWordBits + 1)) - 1));
            if (w) {
                n = (n / kWordBits) * kWordBits + (kWordBits - 1 - std::countl_zero(w));
                break;
            }
            n = (n / kWordBits) * kWordBits - 1;
        }
    }
    out.quotient.normalize();
    out.remainder.normalize();
    return out;
}

DensePoly gcd(const DensePoly& a, const DensePoly& b) {
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;

    // In-place Euclid on two word buffers; reduce the larger modulo the
    // smaller one shift-xor at a time, then swap roles.
    std::vector<Word> u(a.words_.begin(), a.words_.end());
    std::vector<Word> v(b.words_.begin(), b.words_.end());
    std::int64_t du = a.degree(), dv = b.degree();
    if (du < dv) {
        std::swap(u, v);
        std::swap(du, dv);
    }
    while (true) {
        while (du >= dv) {
            detail::xor_shifted(u.data(), v.data(), static_cast<std::size_t>(dv / kWordBits + 1),
                                static_cast<std::uint64_t>(du - dv));
            // Recompute the degree from just below the cancelled bit.
            std::int64_t n = du - 1;
            du = -1;
            while (n >= 0) {
                const Word w = u[n / kWordBits] & (n % kWordBits == kWordBits - 1
                                                       ? ~Word{0}
                                                       : ((Word{1} << (n % kWordBits + 1)) - 1));
                if (w) {
                    du = (n / kWordBits) * kWordBits + (kWordBits - 1 - std::countl_zero(w));
                    break;
                }
                n = (n / kWordBits) * kWordBits - 1;
            }
            if (du < 0) break;
        }
        if (du < 0) {
            u.resize(static_cast<std::size_t>(dv / kWordBits + 1));
            std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(u.size()), u.begin());
            return DensePoly::from_words(std::move(u));
        }
        std::swap(u, v);
        std::swap(du, dv);
    }
}

std::string encode_hex(const DensePoly& a) {
    if (a.is_zero()) return "0";
    static const char digits[] = "0123456789abcdef";
    const std::uint64_t top = static_cast<std::uint64_t>(a.degree());
    std::string out;
    out.reserve(top / 4 + 1);
    for (std::int64_t nib = static_cast<std::int64_t>(top / 4); nib >= 0; --nib) {
        const std::size_t wi = static_cast<std::size_t>(nib) / 16;
        const unsigned sh = (static_cast<unsigned>(nib) % 16) * 4;
        out.push_back(digits[(a.words()[wi] >> sh) & 0xf]);
    }
    return out;
}

DensePoly decode_hex(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("decode_hex: empty input");
    std::vector<Word> w((text.size() * 4) / kWordBits + 1, 0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        unsigned v;
        if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a') + 10;
        else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A') + 10;
        else throw std::invalid_argument("decode_hex: invalid digit at position " + std::to_string(i));
        const std::size_t nib = text.size() - 1 - i;
        w[nib / 16] |= static_cast<Word>(v) << ((nib % 16) * 4);
    }
    return DensePoly::from_words(std::move(w));
}

}  // namespace trinom
