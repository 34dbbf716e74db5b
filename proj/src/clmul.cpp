// PCLMULQDQ base-case multiplier. Compiled with -mpclmul where the compiler
// supports it; availability is still checked at runtime so the binary stays
// portable. The comb in gf2poly.cpp is the normative implementation and the
// reference this one is tested against.
#include "trinom/gf2poly.hpp"

#if defined(TRINOM_HAVE_CLMUL)
#include <wmmintrin.h>
#include <emmintrin.h>
#endif

namespace trinom::detail {

bool clmul_available() {
#if defined(TRINOM_HAVE_CLMUL)
    static const bool ok = __builtin_cpu_supports("pclmul");
    return ok;
#else
    return false;
#endif
}

#if defined(TRINOM_HAVE_CLMUL)
__attribute__((target("pclmul,sse2"))) void mul_clmul(Word* res, const Word* a, std::size_t na,
                                                      const Word* b, std::size_t nb) {
    for (std::size_t j = 0; j < nb; ++j) {
        const __m128i bj = _mm_cvtsi64_si128(static_cast<long long>(b[j]));
        Word* out = res + j;
        for (std::size_t i = 0; i < na; ++i) {
            const __m128i p =
                _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a[i])), bj, 0x00);
            out[i] ^= static_cast<Word>(_mm_cvtsi128_si64(p));
            out[i + 1] ^= static_cast<Word>(_mm_cvtsi128_si64(_mm_srli_si128(p, 8)));
        }
    }
}
#else
void mul_clmul(Word*, const Word*, std::size_t, const Word*, std::size_t) {}
#endif

}  // namespace trinom::detail
