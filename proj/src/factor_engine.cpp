#include "trinom/factor_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace trinom {

namespace {

unsigned default_block(double hint) {
    const double m = std::round(std::sqrt(hint));
    return static_cast<unsigned>(std::max(2.0, m));
}

DensePoly gcd_with(const DensePoly& t_dense, const DensePoly& cand) {
    // gcd(T, x^(2^d)+x) with the convention gcd(T, 0) = T: a vanishing
    // candidate means T divides it, i.e. every factor degree divides d.
    if (cand.is_zero()) return t_dense;
    return gcd(t_dense, cand);
}

// Per-degree scan over [from, to]; chain enters at step from-1.
std::optional<std::pair<std::uint64_t, DensePoly>> naive_scan(const DensePoly& t_dense,
                                                              PowerChain& chain, std::uint64_t from,
                                                              std::uint64_t to,
                                                              const ScanHooks* hooks) {
    const DensePoly x = DensePoly::x();
    std::uint64_t since_checkpoint = 0;
    for (std::uint64_t d = from; d <= to; ++d) {
        chain.advance();
        const DensePoly g = gcd_with(t_dense, add(chain.value(), x));
        if (g.degree() > 0) return std::make_pair(d, g);
        // Checkpoint only after the gcd: a chain at step d certifies that
        // every degree <= d has been cleared.
        if (hooks && hooks->chain_checkpoint_every && hooks->on_chain_checkpoint &&
            ++since_checkpoint >= hooks->chain_checkpoint_every) {
            since_checkpoint = 0;
            hooks->on_chain_checkpoint(chain);
        }
    }
    return std::nullopt;
}

// One accumulated product per block of m degrees, one gcd per block,
// backtracking by per-degree rescan from the block-entry chain state.
std::optional<std::pair<std::uint64_t, DensePoly>> single_scan(const Trinomial& t,
                                                               const DensePoly& t_dense,
                                                               PowerChain& chain, std::uint64_t from,
                                                               std::uint64_t to, unsigned m) {
    const DensePoly x = DensePoly::x();
    std::uint64_t d = from;
    while (d <= to) {
        const std::uint64_t block_end = std::min(to, d + m - 1);
        PowerChain entry = chain;
        DensePoly acc = DensePoly::one();
        for (std::uint64_t dd = d; dd <= block_end; ++dd) {
            chain.advance();
            // A vanishing term x^(2^dd)+x = 0 zeroes the accumulator, which
            // the gcd convention then reports as a full hit.
            acc = mod_mul(acc, add(chain.value(), x), t);
        }
        if (gcd_with(t_dense, acc).degree() > 0) {
            auto hit = naive_scan(t_dense, entry, d, block_end, nullptr);
            if (!hit)
                throw InternalConsistencyError("block gcd was non-trivial but the rescan found no factor");
            return hit;
        }
        d = block_end + 1;
    }
    return std::nullopt;
}

// Two-level scan. h[j] carries the elementary symmetric function e_{j+1} of
// the m consecutive chain powers x^(2^(k+i)), i < m, so the block product
//   prod_j (x + x^(2^(k+j))) = x^m + h[0] x^(m-1) + ... + h[m-1]
// comes out of a Horner pass with shifts and adds only: one full modular
// multiplication per m degrees. Advancing every h[j] by m squarings maps the
// symmetric functions to the next block (Frobenius commutes with them), and
// one gcd covers a super-block of m blocks.
class TwoLevelScanner {
public:
    TwoLevelScanner(const Trinomial& t, const DensePoly& t_dense, unsigned m)
        : t_(t), t_dense_(t_dense), m_(m), chain_(t) {}

    std::optional<std::pair<std::uint64_t, DensePoly>> run(std::uint64_t from, std::uint64_t to) {
        if (from > to) return std::nullopt;
        // Blocks need at least m degrees; the remainder runs as a plain
        // single-level tail so partial blocks never need partial symmetric
        // functions.
        init_h(from);
        std::uint64_t k = from;
        while (k + m_ - 1 <= to) {
            // Super-block of up to m_ blocks ending with one gcd.
            const std::uint64_t sb_start = k;
            PowerChain sb_chain = chain_;
            std::vector<DensePoly> sb_h = h_;
            DensePoly acc = DensePoly::one();
            unsigned blocks = 0;
            while (blocks < m_ && k + m_ - 1 <= to) {
                acc = mod_mul(acc, block_product(), t_);
                advance_block();
                k += m_;
                ++blocks;
            }
            if (gcd_with(t_dense_, acc).degree() > 0)
                return backtrack(sb_start, k - 1, sb_chain, sb_h);
        }
        if (k <= to) {
            auto tail = single_scan(t_, t_dense_, chain_, k, to, m_);
            if (tail) return tail;
        }
        return std::nullopt;
    }

private:
    const Trinomial& t_;
    const DensePoly& t_dense_;
    const unsigned m_;
    PowerChain chain_;  // kept at step (current block start - 1)
    std::vector<DensePoly> h_;

    // Pascal-style build of e_1..e_m over (x^(2^0), ..., x^(2^(m-1))) using
    // only squarings and multiplications by x, then squares everything up to
    // the block starting at degree `from`.
    void init_h(std::uint64_t from) {
        const DensePoly x = DensePoly::x();
        h_.assign(m_, DensePoly::zero());
        for (unsigned j = 1; j <= m_; ++j) {
            for (unsigned i = j; i-- > 0;) {
                DensePoly a;
                if (i > 0) {
                    h_[i - 1] = mod_square(h_[i - 1], t_);
                    a = mod_mul_x(h_[i - 1], t_);
                } else {
                    a = x;
                }
                h_[i] = add(h_[i], a);
            }
        }
        for (auto& h : h_)
            for (std::uint64_t k = 0; k < from; ++k) h = mod_square(h, t_);
        chain_.advance(from - 1);
    }

    DensePoly block_product() {
        DensePoly c = DensePoly::one();
        for (unsigned j = 0; j < m_; ++j) c = add(mod_mul_x(c, t_), h_[j]);
        return c;
    }

    void advance_block() {
        for (auto& h : h_)
            for (unsigned k = 0; k < m_; ++k) h = mod_square(h, t_);
        chain_.advance(m_);
    }

    std::optional<std::pair<std::uint64_t, DensePoly>> backtrack(std::uint64_t sb_start,
                                                                 std::uint64_t sb_end,
                                                                 PowerChain& chain,
                                                                 std::vector<DensePoly>& h) {
        std::swap(h_, h);
        std::swap(chain_, chain);
        for (std::uint64_t k = sb_start; k <= sb_end; k += m_) {
            const DensePoly c = block_product();
            if (gcd_with(t_dense_, c).degree() > 0) {
                auto hit = naive_scan(t_dense_, chain_, k, k + m_ - 1, nullptr);
                if (!hit)
                    throw InternalConsistencyError(
                        "super-block gcd was non-trivial but the rescan found no factor");
                return hit;
            }
            advance_block();
        }
        throw InternalConsistencyError("super-block gcd was non-trivial but no block reproduced it");
    }
};

std::vector<std::uint64_t> prime_factors_of(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

DensePoly powmod_x(std::uint64_t e, const DensePoly& p) {
    // x^e mod p by square-and-multiply, multiplications by x as shifts.
    DensePoly v = DensePoly::one();
    for (int bit = 63; bit >= 0; --bit) {
        v = divrem(square(v), p).remainder;
        if ((e >> bit) & 1) v = divrem(shift_left(v, 1), p).remainder;
    }
    return v;
}

}  // namespace

BlockingSchedule BlockingSchedule::naive() { return {SearchMode::Naive, 1, 1.0}; }

BlockingSchedule BlockingSchedule::single_level(unsigned m) {
    BlockingSchedule s{SearchMode::SingleLevel, m, 40.0};
    if (m == 0) s.block_m = default_block(s.cost_ratio_hint);
    return s;
}

BlockingSchedule BlockingSchedule::two_level(unsigned m) {
    BlockingSchedule s{SearchMode::TwoLevel, m, 400.0};
    if (m == 0) s.block_m = default_block(s.cost_ratio_hint);
    if (s.block_m < 2) throw std::invalid_argument("two-level blocking requires block_m >= 2");
    return s;
}

std::optional<std::pair<std::uint64_t, DensePoly>> sieve_small(const Trinomial& t, unsigned dmax) {
    if (dmax >= 64 || (std::uint64_t{1} << dmax) >= t.r)
        throw std::invalid_argument(
            "sieve_small requires 2^dmax < r; use ddf_smallest for deeper scans");
    for (unsigned d = 2; d <= dmax; ++d) {
        const std::uint64_t dp = (std::uint64_t{1} << d) - 1;
        std::vector<Word> folded(dp / kWordBits + 1, 0);
        folded[0] ^= 1;
        const std::uint64_t rp = t.r % dp, sp = t.s % dp;
        folded[rp / kWordBits] ^= Word{1} << (rp % kWordBits);
        folded[sp / kWordBits] ^= Word{1} << (sp % kWordBits);
        // Three xored bits never cancel to zero, so lhs != 0 and the gcd is
        // well defined even when r' = s' or one of them is 0.
        const DensePoly lhs = DensePoly::from_words(std::move(folded));
        const DensePoly cyc = add(DensePoly::monomial(dp), DensePoly::one());
        const DensePoly g = gcd(lhs, cyc);
        if (g.degree() > 0) return std::pair<std::uint64_t, DensePoly>(d, g);
    }
    return std::nullopt;
}

std::optional<std::pair<std::uint64_t, DensePoly>> smallest_factor_up_to(
    const Trinomial& t, const BlockingSchedule& schedule, std::uint64_t dmax,
    const ScanHooks* hooks) {
    if (dmax == 0) return std::nullopt;
    const DensePoly t_dense = t.dense();
    std::uint64_t from = 1;
    PowerChain chain(t);
    if (hooks && hooks->resume_chain && schedule.mode == SearchMode::Naive &&
        hooks->resume_chain->trinomial() == t) {
        chain = *hooks->resume_chain;
        from = chain.step() + 1;
        if (from > dmax) return std::nullopt;
    }
    switch (schedule.mode) {
        case SearchMode::Naive:
            return naive_scan(t_dense, chain, from, dmax, hooks);
        case SearchMode::SingleLevel:
            return single_scan(t, t_dense, chain, from, dmax, std::max(1u, schedule.block_m));
        case SearchMode::TwoLevel: {
            if (schedule.block_m < 2)
                throw std::invalid_argument("two-level blocking requires block_m >= 2");
            TwoLevelScanner scanner(t, t_dense, schedule.block_m);
            return scanner.run(from, dmax);
        }
    }
    return std::nullopt;
}

SearchOutcome ddf_smallest(const Trinomial& t, const BlockingSchedule& schedule, FactorParity parity,
                           const ScanHooks* hooks) {
    const std::uint64_t bound = parity == FactorParity::Odd ? t.r / 3 : t.r / 2;
    auto hit = smallest_factor_up_to(t, schedule, bound, hooks);
    if (hit) {
        const auto& [d, g] = *hit;
        if (g.degree() % static_cast<std::int64_t>(d) != 0)
            throw InternalConsistencyError("DDF gcd degree is not a multiple of the hit degree");
        SearchOutcome out;
        out.verdict = SearchOutcome::Verdict::SmallestFactor;
        out.factor_degree = d;
        out.siblings = edf(g, d);
        out.factor = out.siblings.front();
        return out;
    }
    if (parity == FactorParity::Even)
        throw InternalConsistencyError(
            "Swan parity is Even (reducible) but no factor was found up to r/2");
    if (!irreducible_direct(t.dense()))
        throw InternalConsistencyError(
            "no factor found up to r/3 with Odd parity, yet the direct test says reducible");
    SearchOutcome out;
    out.verdict = SearchOutcome::Verdict::Irreducible;
    return out;
}

std::vector<DensePoly> edf(const DensePoly& g, std::uint64_t d) {
    if (d == 0 || g.degree() < static_cast<std::int64_t>(d) ||
        g.degree() % static_cast<std::int64_t>(d) != 0)
        throw std::invalid_argument("edf: degree of g must be a positive multiple of d");

    std::vector<DensePoly> out;
    std::vector<DensePoly> stack{g};
    while (!stack.empty()) {
        DensePoly cur = stack.back();
        stack.pop_back();
        if (cur.degree() == static_cast<std::int64_t>(d)) {
            out.push_back(cur);
            continue;
        }
        // Trace splitting: Tr(a) = a + a^2 + ... + a^(2^(d-1)) mod cur maps
        // each factor's residue to GF(2); a splitter separating two factors
        // exists among the monomials, so the scan below terminates.
        bool split = false;
        const std::uint64_t splitter_limit = 4 * static_cast<std::uint64_t>(cur.degree()) + 8;
        for (std::uint64_t i = 1; i <= splitter_limit && !split; ++i) {
            for (unsigned plus_one = 0; plus_one < 2 && !split; ++plus_one) {
                DensePoly alpha = divrem(DensePoly::monomial(i), cur).remainder;
                if (plus_one) alpha = add(alpha, DensePoly::one());
                DensePoly tr = alpha;
                DensePoly v = alpha;
                for (std::uint64_t k = 1; k < d; ++k) {
                    v = divrem(square(v), cur).remainder;
                    tr = add(tr, v);
                }
                if (tr.is_zero()) continue;
                const DensePoly h = gcd(cur, tr);
                if (h.degree() > 0 && h.degree() < cur.degree()) {
                    stack.push_back(h);
                    stack.push_back(divrem(cur, h).quotient);
                    split = true;
                }
            }
        }
        if (!split)
            throw InternalConsistencyError(
                "edf failed to split; input was not a product of distinct degree-d irreducibles");
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool irreducible_direct(const DensePoly& p) {
    const std::int64_t n = p.degree();
    if (n < 1) throw std::invalid_argument("irreducible_direct requires degree >= 1");
    if (!p.coeff(0)) return false;
    if (n == 1) return true;

    const auto subdegrees = [&] {
        std::vector<std::uint64_t> subs;
        for (std::uint64_t q : prime_factors_of(static_cast<std::uint64_t>(n)))
            subs.push_back(static_cast<std::uint64_t>(n) / q);
        std::sort(subs.begin(), subs.end());
        return subs;
    }();

    const DensePoly x = DensePoly::x();
    DensePoly v = x;
    std::vector<DensePoly> at_subdegree;
    for (std::uint64_t step = 1; step <= static_cast<std::uint64_t>(n); ++step) {
        v = divrem(square(v), p).remainder;
        if (std::binary_search(subdegrees.begin(), subdegrees.end(), step))
            at_subdegree.push_back(v);
    }
    if (!(v == x)) return false;
    for (const DensePoly& w : at_subdegree) {
        const DensePoly c = add(w, x);
        if (c.is_zero()) return false;  // all factor degrees divide n/q
        if (gcd(p, c).degree() != 0) return false;
    }
    return true;
}

bool primitive_small(const DensePoly& p, std::span<const std::uint64_t> mersenne_factors) {
    const std::int64_t n = p.degree();
    if (n < 1 || n > 62)
        throw std::invalid_argument("primitive_small handles degrees 1..62; supply larger degrees externally");
    const std::uint64_t order = (std::uint64_t{1} << n) - 1;
    unsigned __int128 prod = 1;
    for (std::uint64_t q : mersenne_factors) {
        prod *= q;
        if (prod > order) break;
    }
    if (prod != order)
        throw std::invalid_argument("primitive_small: factorization does not multiply to 2^n - 1");

    std::vector<std::uint64_t> distinct(mersenne_factors.begin(), mersenne_factors.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::uint64_t q : distinct) {
        if (powmod_x(order / q, p).is_one()) return false;
    }
    return true;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    const auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    };
    std::uint64_t d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = 1, base = a % n, e = d;
        while (e) {
            if (e & 1) x = mulmod(x, base, n);
            base = mulmod(base, base, n);
            e >>= 1;
        }
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < r && witness; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::uint64_t> factor_mersenne_small(unsigned n) {
    if (n < 1 || n > 40)
        throw std::invalid_argument("factor_mersenne_small handles 1 <= n <= 40");
    std::uint64_t m = (std::uint64_t{1} << n) - 1;
    std::vector<std::uint64_t> out;
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1u << 20;
        std::vector<bool> sieve(limit, true);
        std::vector<std::uint32_t> ps;
        for (std::uint32_t i = 3; i < limit; i += 2) {
            if (!sieve[i]) continue;
            ps.push_back(i);
            for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j < limit; j += 2 * i)
                sieve[static_cast<std::uint32_t>(j)] = false;
        }
        return ps;
    }();
    for (std::uint32_t p : primes) {
        if (static_cast<std::uint64_t>(p) * p > m) break;
        while (m % p == 0) {
            out.push_back(p);
            m /= p;
        }
    }
    if (m > 1) {
        if (!is_prime(m))
            throw std::runtime_error("factor_mersenne_small: factorization incomplete (composite cofactor)");
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DensePoly> brute_force_factorization(const DensePoly& p) {
    if (p.is_zero()) throw std::invalid_argument("brute_force_factorization of zero");
    if (p.degree() > 24) throw std::invalid_argument("brute_force_factorization handles degree <= 24");

    std::vector<DensePoly> out;
    DensePoly rest = p;
    while (!rest.coeff(0)) {
        out.push_back(DensePoly::x());
        rest = shift_right(rest, 1);
    }
    // Irreducibles with non-zero constant term, ascending bit patterns up to
    // the largest possible proper-divisor degree, cached across calls.
    static const std::vector<DensePoly> divisors = [] {
        std::vector<DensePoly> ds;
        for (Word pattern = 3; pattern < (Word{1} << 13); pattern += 2) {
            const DensePoly c = DensePoly::from_coeff_bits(pattern);
            if (irreducible_direct(c)) ds.push_back(c);
        }
        return ds;
    }();
    for (const DensePoly& c : divisors) {
        if (c.degree() * 2 > rest.degree()) break;
        while (true) {
            const auto [q, rem] = divrem(rest, c);
            if (!rem.is_zero()) break;
            out.push_back(c);
            rest = q;
        }
    }
    if (rest.degree() >= 1) out.push_back(rest);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace trinom
