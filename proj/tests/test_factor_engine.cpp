#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "trinom/factor_engine.hpp"

using namespace trinom;
using testutil::from_bits;

namespace {

// All irreducibles of degree exactly d, via the independent trial-division
// check (not irreducible_direct), ascending.
std::vector<DensePoly> independent_irreducibles(unsigned d) {
    std::vector<DensePoly> out;
    for (Word bits = Word{1} << d; bits < (Word{1} << (d + 1)); ++bits) {
        const DensePoly p = from_bits(bits);
        if (testutil::naive_irreducible(p)) out.push_back(p);
    }
    return out;
}

std::optional<std::pair<std::uint64_t, DensePoly>> oracle_smallest(const DensePoly& p) {
    const auto factors = brute_force_factorization(p);
    if (factors.size() == 1) return std::nullopt;
    const std::int64_t dmin = factors.front().degree();
    DensePoly product = DensePoly::one();
    std::vector<DensePoly> seen;
    for (const auto& f : factors) {
        if (f.degree() != dmin) break;
        if (!seen.empty() && f == seen.back()) continue;  // squarefree product of distinct factors
        seen.push_back(f);
        product = mul(product, f);
    }
    return std::make_pair(static_cast<std::uint64_t>(dmin), product);
}

}  // namespace

TEST_CASE("irreducible_direct: paper facts and the trial-division oracle") {
    CHECK(irreducible_direct(from_bits(0b100101)));        // x^5+x^2+1
    CHECK_FALSE(irreducible_direct(from_bits(0b100011)));  // x^5+x+1
    CHECK(irreducible_direct(from_bits(0b1001001)));       // x^6+x^3+1
    CHECK(irreducible_direct(from_bits(0b11)));            // x+1
    CHECK_FALSE(irreducible_direct(from_bits(0b10)));      // x: zero constant term short-circuit
    CHECK_THROWS_AS(irreducible_direct(DensePoly::one()), std::invalid_argument);

    for (Word bits = 2; bits < (Word{1} << 12); ++bits) {
        const DensePoly p = from_bits(bits);
        const bool expected = p.coeff(0) ? testutil::naive_irreducible(p) : false;
        CHECK(irreducible_direct(p) == expected);
    }
}

TEST_CASE("brute_force_factorization: examples and product law") {
    const auto p3 = brute_force_factorization(add(DensePoly::monomial(8), DensePoly::x()));
    REQUIRE(p3.size() == 4);  // x^8+x = x(x+1)(x^3+x+1)(x^3+x^2+1)
    CHECK(p3[0] == from_bits(0b10));
    CHECK(p3[1] == from_bits(0b11));
    CHECK(p3[2] == from_bits(0b1011));
    CHECK(p3[3] == from_bits(0b1101));

    const auto f = brute_force_factorization(from_bits(0b100011));
    REQUIRE(f.size() == 2);
    CHECK(f[0] == from_bits(0b111));
    CHECK(f[1] == from_bits(0b1101));

    const auto self = brute_force_factorization(from_bits(0b100101));
    REQUIRE(self.size() == 1);
    CHECK(self[0] == from_bits(0b100101));

    CHECK_THROWS_AS(brute_force_factorization(DensePoly::zero()), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_factorization(DensePoly::monomial(25)), std::invalid_argument);

    testutil::Rng rng(30);
    for (int i = 0; i < 120; ++i) {
        DensePoly p = rng.poly(20);
        if (p.is_zero()) continue;
        DensePoly product = DensePoly::one();
        for (const auto& fac : brute_force_factorization(p)) product = mul(product, fac);
        CHECK(product == p);
    }
}

TEST_CASE("x^(2^d) + x is the product of all irreducibles of degree dividing d") {
    // independent_irreducibles(1) is {x, x+1}, so x is already included
    for (unsigned d = 1; d <= 8; ++d) {
        DensePoly product = DensePoly::one();
        for (unsigned e = 1; e <= d; ++e) {
            if (d % e != 0) continue;
            for (const auto& p : independent_irreducibles(e)) product = mul(product, p);
        }
        CHECK(product == add(DensePoly::monomial(std::uint64_t{1} << d), DensePoly::x()));
    }
}

TEST_CASE("sieve_small: examples") {
    auto hit = sieve_small(Trinomial(5, 1), 2);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 2);
    CHECK(hit->second == from_bits(0b111));

    CHECK_FALSE(sieve_small(Trinomial(5, 2), 2).has_value());

    hit = sieve_small(Trinomial(5, 4), 2);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 2);
    CHECK(hit->second == from_bits(0b111));

    CHECK_THROWS_AS(sieve_small(Trinomial(5, 2), 3), std::invalid_argument);  // 2^3 >= 5
}

TEST_CASE("sieve_small never reports degree 1 and matches the power-chain gcd") {
    testutil::Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const std::uint64_t r = 4100 + rng.below(3000);
        const std::uint64_t s = 1 + rng.below(r / 2);
        const Trinomial t(r, s);
        const DensePoly dense = t.dense();
        PowerChain chain(t);
        std::optional<std::uint64_t> chain_first;
        for (std::uint64_t d = 1; d <= 12; ++d) {
            chain.advance();
            const DensePoly cand = add(chain.value(), DensePoly::x());
            const DensePoly g = cand.is_zero() ? dense : gcd(dense, cand);
            if (g.degree() > 0) {
                chain_first = d;
                break;
            }
        }
        const auto sieved = sieve_small(t, 12);
        if (sieved) {
            CHECK(sieved->first >= 2);
            REQUIRE(chain_first.has_value());
            CHECK(*chain_first == sieved->first);
        } else {
            CHECK_FALSE(chain_first.has_value());
        }
    }
}

TEST_CASE("edf: examples, determinism, errors") {
    const DensePoly two_cubics = mul(from_bits(0b1011), from_bits(0b1101));
    const auto split = edf(two_cubics, 3);
    REQUIRE(split.size() == 2);
    CHECK(split[0] == from_bits(0b1011));
    CHECK(split[1] == from_bits(0b1101));
    CHECK(edf(two_cubics, 3) == split);  // deterministic

    CHECK(edf(from_bits(0b111), 2) == std::vector<DensePoly>{from_bits(0b111)});
    CHECK(edf(from_bits(0b1011), 3) == std::vector<DensePoly>{from_bits(0b1011)});
    CHECK_THROWS_AS(edf(two_cubics, 4), std::invalid_argument);

    // all three degree-4 irreducibles at once
    const auto quartics = independent_irreducibles(4);
    REQUIRE(quartics.size() == 3);
    DensePoly product = DensePoly::one();
    for (const auto& q : quartics) product = mul(product, q);
    CHECK(edf(product, 4) == quartics);
}

TEST_CASE("ddf_smallest: paper examples") {
    const auto sched = BlockingSchedule::two_level();

    auto out = ddf_smallest(Trinomial(5, 1), sched, FactorParity::Even);
    CHECK(out.verdict == SearchOutcome::Verdict::SmallestFactor);
    CHECK(out.factor_degree == 2);
    CHECK(out.factor == from_bits(0b111));
    CHECK(out.siblings == std::vector<DensePoly>{from_bits(0b111)});

    out = ddf_smallest(Trinomial(5, 2), sched, FactorParity::Odd);
    CHECK(out.verdict == SearchOutcome::Verdict::Irreducible);

    out = ddf_smallest(Trinomial(11, 5), BlockingSchedule::naive(), FactorParity::Even);
    CHECK(out.verdict == SearchOutcome::Verdict::SmallestFactor);
    CHECK(out.factor_degree == 3);
    CHECK(out.factor == from_bits(0b1011));  // x^11+x^5+1 = (x^3+x+1)(...)
}

TEST_CASE("ddf_smallest: oracle equivalence and mode independence, r <= 14") {
    const BlockingSchedule modes[] = {BlockingSchedule::naive(), BlockingSchedule::single_level(3),
                                      BlockingSchedule::two_level(2), BlockingSchedule::two_level(5)};
    for (std::uint64_t r = 2; r <= 14; ++r) {
        for (std::uint64_t s = 1; s < r; ++s) {
            const Trinomial t(r, s);
            const FactorParity parity = factor_parity(r, s);
            const auto expected = oracle_smallest(t.dense());
            SearchOutcome first;
            bool have_first = false;
            for (const auto& mode : modes) {
                const SearchOutcome out = ddf_smallest(t, mode, parity);
                INFO("r=", r, " s=", s, " mode=", static_cast<int>(mode.mode), " m=", mode.block_m);
                if (expected) {
                    CHECK(out.verdict == SearchOutcome::Verdict::SmallestFactor);
                    CHECK(out.factor_degree == expected->first);
                    CHECK(divrem(expected->second, out.factor).remainder.is_zero());
                    CHECK(irreducible_direct(out.factor));
                    // lexicographically least among the same-degree factors
                    for (const auto& sib : out.siblings) CHECK_FALSE(sib < out.factor);
                    DensePoly sib_product = DensePoly::one();
                    for (const auto& sib : out.siblings) sib_product = mul(sib_product, sib);
                    CHECK(sib_product == expected->second);
                } else {
                    CHECK(out.verdict == SearchOutcome::Verdict::Irreducible);
                }
                if (!have_first) {
                    first = out;
                    have_first = true;
                } else {
                    CHECK(out.verdict == first.verdict);
                    CHECK(out.factor_degree == first.factor_degree);
                    CHECK(out.factor == first.factor);
                    CHECK(out.siblings == first.siblings);
                }
            }
        }
    }
}

TEST_CASE("ddf_smallest raises on an impossible Even verdict") {
    // x^5+x^2+1 is irreducible; forcing Even parity must trip the
    // internal-consistency diagnostic rather than return a wrong answer.
    CHECK_THROWS_AS(ddf_smallest(Trinomial(5, 2), BlockingSchedule::naive(), FactorParity::Even),
                    InternalConsistencyError);
}

TEST_CASE("irreducible trinomial counts match the frozen table, r <= 20") {
    // counts over all s in 1..r-1, computed with an independent tool
    const std::uint64_t expected[] = {1, 2, 2, 2, 3, 4, 0, 4, 2, 2, 4, 0, 2, 6, 0, 6, 5, 0, 4};
    for (std::uint64_t r = 2; r <= 20; ++r) {
        std::uint64_t count = 0;
        for (std::uint64_t s = 1; s < r; ++s) {
            const auto out =
                ddf_smallest(Trinomial(r, s), BlockingSchedule::two_level(), factor_parity(r, s));
            if (out.verdict == SearchOutcome::Verdict::Irreducible) ++count;
        }
        CHECK(count == expected[r - 2]);
    }
}

TEST_CASE("irreducibility of a trinomial and its reciprocal coincide, r <= 16") {
    for (std::uint64_t r = 2; r <= 16; ++r)
        for (std::uint64_t s = 1; s < r; ++s)
            CHECK(brute_force_factorization(Trinomial(r, s).dense()).size() ==
                  brute_force_factorization(Trinomial(r, r - s).dense()).size());
}

TEST_CASE("smallest_factor_up_to respects the cap") {
    // x^11+x^5+1 has factors of degree 3 and 8 only
    CHECK_FALSE(smallest_factor_up_to(Trinomial(11, 5), BlockingSchedule::naive(), 2).has_value());
    const auto hit = smallest_factor_up_to(Trinomial(11, 5), BlockingSchedule::naive(), 3);
    REQUIRE(hit.has_value());
    CHECK(hit->first == 3);
}

TEST_CASE("primitive_small: examples and errors") {
    const DensePoly p5 = from_bits(0b100101);   // primitive
    const DensePoly p6 = from_bits(0b1001001);  // irreducible, not primitive
    CHECK(primitive_small(p5, factor_mersenne_small(5)));
    CHECK_FALSE(primitive_small(p6, factor_mersenne_small(6)));
    CHECK(primitive_small(from_bits(0b111), factor_mersenne_small(2)));
    const std::uint64_t wrong[] = {3, 7};
    CHECK_THROWS_AS(primitive_small(p5, wrong), std::invalid_argument);
}

TEST_CASE("factor_mersenne_small: examples, completeness, errors") {
    CHECK(factor_mersenne_small(11) == std::vector<std::uint64_t>{23, 89});
    CHECK(factor_mersenne_small(6) == std::vector<std::uint64_t>{3, 3, 7});
    CHECK(factor_mersenne_small(5) == std::vector<std::uint64_t>{31});
    CHECK(factor_mersenne_small(1).empty());
    CHECK_THROWS_AS(factor_mersenne_small(0), std::invalid_argument);
    CHECK_THROWS_AS(factor_mersenne_small(41), std::invalid_argument);
    for (unsigned n = 1; n <= 40; ++n) {
        unsigned __int128 product = 1;
        for (std::uint64_t q : factor_mersenne_small(n)) {
            CHECK(is_prime(q));
            product *= q;
        }
        CHECK(product == ((std::uint64_t{1} << n) - 1));
    }
}

TEST_CASE("is_prime spot checks") {
    CHECK(is_prime(2));
    CHECK(is_prime(3021377));
    CHECK(is_prime(43112609));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(11 * 13));
    CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
}
