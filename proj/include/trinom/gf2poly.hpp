#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trinom {

// Machine word holding packed GF(2) coefficients. All word-level code is
// written against these two names so the width is changed in one place.
using Word = std::uint64_t;
inline constexpr unsigned kWordBits = 64;

class DensePoly;
struct DivRem;
DivRem divrem(const DensePoly& a, const DensePoly& b);

// Dense polynomial over GF(2), bit k of the packed words = coefficient of x^k.
// The zero polynomial has degree -1 and no stored words. Every public
// operation returns a normalized value: no stale bits above the degree.
class DensePoly {
public:
    DensePoly() = default;

    static DensePoly zero() { return DensePoly(); }
    static DensePoly one() { return from_coeff_bits(1); }
    static DensePoly x() { return from_coeff_bits(2); }
    static DensePoly monomial(std::uint64_t k);
    // Low-word constructor: bit k of `bits` = coefficient of x^k.
    static DensePoly from_coeff_bits(Word bits);
    static DensePoly from_words(std::vector<Word> words);

    std::int64_t degree() const { return degree_; }
    bool is_zero() const { return degree_ < 0; }
    bool is_one() const { return degree_ == 0; }
    bool coeff(std::uint64_t k) const;

    std::span<const Word> words() const { return words_; }
    std::size_t word_count() const { return words_.size(); }

    // Total order: by degree, then by coefficient patterns compared as
    // integers (bit k = coefficient of x^k). The smallest polynomial of a
    // given degree under this order is the "lexicographically least" one
    // used when choosing among same-degree factors.
    friend bool operator==(const DensePoly& a, const DensePoly& b) {
        return a.degree_ == b.degree_ && a.words_ == b.words_;
    }
    friend bool operator<(const DensePoly& a, const DensePoly& b);

private:
    std::vector<Word> words_;
    std::int64_t degree_ = -1;

    void normalize();
    friend DensePoly add(const DensePoly&, const DensePoly&);
    friend DensePoly mul(const DensePoly&, const DensePoly&);
    friend DensePoly square(const DensePoly&);
    friend DensePoly shift_left(const DensePoly&, std::uint64_t);
    friend DensePoly shift_right(const DensePoly&, std::uint64_t);
    friend DensePoly truncate(const DensePoly&, std::uint64_t);
    friend DivRem divrem(const DensePoly&, const DensePoly&);
    friend DensePoly gcd(const DensePoly&, const DensePoly&);
};

DensePoly add(const DensePoly& a, const DensePoly& b);
DensePoly mul(const DensePoly& a, const DensePoly& b);

// Squaring is linear time: bit k of the input becomes bit 2k of the output.
DensePoly square(const DensePoly& a);

struct DivRem {
    DensePoly quotient;
    DensePoly remainder;
};

// Euclidean division: a = q*b + rem with deg(rem) < deg(b). Throws
// std::invalid_argument when b is zero.
DivRem divrem(const DensePoly& a, const DensePoly& b);

// Monic GCD (monic is automatic over GF(2)); gcd(a, 0) = a. Throws
// std::invalid_argument when both inputs are zero.
DensePoly gcd(const DensePoly& a, const DensePoly& b);

DensePoly shift_left(const DensePoly& a, std::uint64_t k);   // a * x^k
DensePoly shift_right(const DensePoly& a, std::uint64_t k);  // a div x^k
DensePoly truncate(const DensePoly& a, std::uint64_t k);     // a mod x^k

// Hex text encoding: 4 coefficients per digit, least significant digit holds
// the coefficients of x^0..x^3, no leading zero digits ("0" for the zero
// polynomial). Digits are emitted lowercase; decoding accepts either case
// and throws std::invalid_argument naming the offending position.
std::string encode_hex(const DensePoly& a);
DensePoly decode_hex(std::string_view text);

namespace detail {

// Word-array kernels shared by the public operations and the modular
// arithmetic layer. Result spans must be pre-zeroed unless stated otherwise.
void mul_comb(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb);
void mul_words(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb);

// out must hold 2*n words; out may not alias src.
void square_words(Word* out, const Word* src, std::size_t n);

// dst[i..] ^= src << bit_shift, for nsrc words of src.
void xor_shifted(Word* dst, const Word* src, std::size_t nsrc, std::uint64_t bit_shift);

std::int64_t degree_of_words(const Word* w, std::size_t n);

// Carry-less multiply accelerator (PCLMULQDQ). Detected at runtime; the
// portable comb is the normative path and the arbiter in tests.
bool clmul_available();
void mul_clmul(Word* res, const Word* a, std::size_t na, const Word* b, std::size_t nb);

// Comb/Karatsuba crossover, in words. Tunable.
inline constexpr std::size_t kKaratsubaThresholdWords = 512;

}  // namespace detail

}  // namespace trinom
