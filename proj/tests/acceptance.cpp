// Acceptance suite: one line per criterion, nonzero exit if a gating
// criterion fails. Criterion 9 (performance) is informative: it runs with
// --only-perf (or by default), prints its measurements, and never gates.
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "trinom/certificates.hpp"
#include "trinom/factor_engine.hpp"
#include "trinom/search.hpp"
#include "trinom/swan.hpp"

using namespace trinom;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, bool informative = false) {
    std::printf("criterion %d%s: %s — %s\n", criterion, informative ? " [informative]" : "",
                pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass && !informative) ++g_failures;
}

DensePoly bits(Word b) { return DensePoly::from_coeff_bits(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_known_values() {
    bool ok = true;
    std::string detail = "known-value suite";

    const auto f1 = brute_force_factorization(bits(0b100011));  // x^5+x+1
    ok &= f1.size() == 2 && f1[0] == bits(0b111) && f1[1] == bits(0b1101);

    const auto f2 = brute_force_factorization(add(DensePoly::monomial(8), DensePoly::x()));
    ok &= f2.size() == 4 && f2[0] == bits(0b10) && f2[1] == bits(0b11) && f2[2] == bits(0b1011) &&
          f2[3] == bits(0b1101);

    const DensePoly p52 = bits(0b100101);
    ok &= irreducible_direct(p52);
    ok &= primitive_small(p52, factor_mersenne_small(5));

    const DensePoly p63 = bits(0b1001001);
    ok &= irreducible_direct(p63);
    ok &= !primitive_small(p63, factor_mersenne_small(6));
    // witness: 9 is a maximal nontrivial divisor of 63 and x^9 = 1 mod p
    DensePoly x9 = DensePoly::one();
    for (int i = 0; i < 9; ++i) x9 = divrem(shift_left(x9, 1), p63).remainder;
    ok &= x9.is_one() && (63 / 9 == 7) && is_prime(7);

    ok &= factor_mersenne_small(11) == std::vector<std::uint64_t>{23, 89};

    report(1, ok, detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_oracle_equivalence() {
    const BlockingSchedule modes[] = {BlockingSchedule::naive(), BlockingSchedule::single_level(),
                                      BlockingSchedule::two_level()};
    std::uint64_t checked = 0, mismatches = 0;
    for (std::uint64_t r = 2; r <= 20; ++r) {
        for (std::uint64_t s = 1; s < r; ++s) {
            const Trinomial t(r, s);
            const auto oracle = brute_force_factorization(t.dense());
            const bool oracle_irreducible = oracle.size() == 1;
            const FactorParity parity = factor_parity(r, s);
            SearchOutcome first;
            for (std::size_t mi = 0; mi < 3; ++mi) {
                const SearchOutcome out = ddf_smallest(t, modes[mi], parity);
                ++checked;
                bool good;
                if (oracle_irreducible) {
                    good = out.verdict == SearchOutcome::Verdict::Irreducible;
                } else {
                    // oracle list is ascending: front() is the lexicographically
                    // least factor of minimal degree
                    good = out.verdict == SearchOutcome::Verdict::SmallestFactor &&
                           out.factor == oracle.front() &&
                           out.factor_degree == static_cast<std::uint64_t>(oracle.front().degree());
                }
                if (mi == 0) first = out;
                good = good && out.verdict == first.verdict && out.factor == first.factor &&
                       out.factor_degree == first.factor_degree && out.siblings == first.siblings;
                if (!good) ++mismatches;
            }
        }
    }
    report(2, mismatches == 0,
           "oracle equivalence and mode independence over " + std::to_string(checked) +
               " runs (r <= 20, all s, 3 modes), mismatches: " + std::to_string(mismatches));
}

// ---------------------------------------------------------------- criterion 3
void criterion_swan_exhaustive() {
    std::uint64_t checked = 0, mismatches = 0;
    for (std::uint64_t r = 2; r <= 24; ++r) {
        for (std::uint64_t s = 1; s < r; ++s) {
            const auto factors = brute_force_factorization(Trinomial(r, s).dense());
            const FactorParity expected =
                factors.size() % 2 == 0 ? FactorParity::Even : FactorParity::Odd;
            ++checked;
            if (factor_parity(r, s) != expected) ++mismatches;
        }
    }
    report(3, mismatches == 0,
           "Swan parity vs factor-count parity with multiplicity over " + std::to_string(checked) +
               " trinomials (r <= 24), mismatches: " + std::to_string(mismatches));
}

// ---------------------------------------------------------------- criterion 4
void criterion_mersenne_hunts() {
    // Expected primitive s-sets, computed with an independent brute-force
    // tool before this program was built. All degrees are Mersenne
    // exponents, so irreducible = primitive.
    const std::map<std::uint64_t, std::set<std::uint64_t>> expected = {
        {3, {1}},   {5, {2}},        {7, {1, 3}},
        {13, {}},   {17, {3, 5, 6}}, {19, {}},
        {31, {3, 6, 7, 13}},         {89, {38}},
        {127, {1, 7, 15, 30, 63}},
    };
    bool ok = true;
    std::string note;
    for (const auto& [r, want] : expected) {
        SearchJob job;
        job.r = r;
        job.workers = 2;
        const HuntResult result = hunt(job);
        std::set<std::uint64_t> got;
        for (const auto& c : result.certificates)
            if (c.kind == Certificate::Kind::Irreducible) got.insert(c.s);
        if (!result.errors.empty()) ok = false;
        if (!result.mersenne_degree) ok = false;
        if (got != want) {
            ok = false;
            note += " r=" + std::to_string(r) + " mismatched;";
        }
        // restricted degrees may skip reducible s; the primitive set is
        // still exact because only s in {2, r-2} can be irreducible there
        if (result.irreducible != got.size()) ok = false;
    }
    report(4, ok, "primitive s-sets for r in {3,5,7,13,17,19,31,89,127} match the frozen oracle list" + note);
}

// ---------------------------------------------------------------- criterion 5
void criterion_determinism_resume() {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("trinom_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    bool ok = true;
    std::string reference;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    for (unsigned workers : {1u, 2u, 8u}) {
        SearchJob job;
        job.r = 127;
        job.workers = workers;
        job.out_path = (dir / ("out" + std::to_string(workers))).string();
        hunt(job);
        const std::string text = slurp(job.out_path);
        if (reference.empty()) reference = text;
        ok &= !text.empty() && text == reference;
    }
    // Forced interrupt mid-run, then resume. Cancellation races against the
    // workers, so retry until an attempt is caught genuinely mid-run.
    bool caught_partial = false;
    for (int attempt = 0; attempt < 25 && !caught_partial; ++attempt) {
        SearchJob job;
        job.r = 127;
        job.workers = 2;
        job.out_path = (dir / "resumed").string();
        job.checkpoint_path = (dir / "ckpt").string();
        fs::remove(job.checkpoint_path);
        fs::remove(job.out_path);
        std::atomic<bool> cancel{false};
        int seen = 0;
        const HuntResult partial = hunt(job, &cancel, [&](const Certificate&) {
            if (++seen >= 3) cancel.store(true);
        });
        if (!(partial.interrupted && partial.tested < 63)) continue;
        caught_partial = true;
        ok &= !fs::exists(job.out_path);
        job.resume = true;
        const HuntResult full = hunt(job);
        ok &= !full.interrupted && full.tested == 63;
        ok &= slurp(job.out_path) == reference;
    }
    ok &= caught_partial;
    fs::remove_all(dir);
    report(5, ok, "r=127 hunt bytes identical across 1/2/8 workers and across interrupt+resume");
}

// ---------------------------------------------------------------- criterion 6
void criterion_certificates() {
    bool ok = true;
    std::uint64_t emitted = 0;
    std::vector<Certificate> factor_certs;
    for (std::uint64_t r = 2; r <= 20; ++r) {
        for (std::uint64_t s = 1; s < r; ++s) {
            const Trinomial t(r, s);
            const Certificate c =
                emit(t, ddf_smallest(t, BlockingSchedule::two_level(), factor_parity(r, s)));
            const Certificate back = parse_certificate(serialize(c));
            if (!(back == c)) ok = false;
            const VerifyReport report_full = verify(back, VerifyTier::Full);
            if (!report_full.valid || !report_full.full_tier_applied) ok = false;
            ++emitted;
            if (c.kind == Certificate::Kind::Factor) factor_certs.push_back(c);
        }
    }
    // 1000 single-bit corruptions of factor hex fields, all rejected by Quick
    std::uint64_t fuzzed = 0, rejected = 0, salt = 0x9e3779b97f4a7c15ull;
    while (fuzzed < 1000) {
        for (const Certificate& c : factor_certs) {
            if (fuzzed >= 1000) break;
            salt = salt * 6364136223846793005ull + 1442695040888963407ull;
            const std::size_t nbits = 4 * c.factor_hex.size();
            const std::size_t bit = static_cast<std::size_t>(salt >> 33) % nbits;
            DensePoly f = decode_hex(c.factor_hex);
            std::vector<Word> w(f.words().begin(), f.words().end());
            w.resize(nbits / 64 + 1, 0);
            w[bit / 64] ^= Word{1} << (bit % 64);
            const DensePoly flipped = DensePoly::from_words(std::move(w));
            if (flipped.is_zero()) continue;
            Certificate mutated = c;
            mutated.factor_hex = encode_hex(flipped);
            ++fuzzed;
            if (!verify(mutated, VerifyTier::Quick).valid) ++rejected;
        }
    }
    ok &= rejected == fuzzed;
    report(6, ok,
           "emit->verify(Full) on " + std::to_string(emitted) + " certificates (r <= 20); " +
               std::to_string(rejected) + "/" + std::to_string(fuzzed) +
               " single-bit corruptions rejected");
}

// ---------------------------------------------------------------- criterion 7
void criterion_stats() {
    bool ok = true;
    for (std::uint64_t r : {7ull, 15ull, 31ull, 63ull}) {
        const PiStats stats = stats_pi(r, 2);
        ok &= stats.rows.size() == 2 && stats.rows[0].pi == 1.0;
    }
    const PiStats s31 = stats_pi(31, 2);
    const double d_pi_2 = s31.rows[1].d_pi;
    ok &= d_pi_2 > 1.33 - 0.01 && d_pi_2 < 1.33 + 0.01;
    char buf[128];
    std::snprintf(buf, sizeof buf, "pi_1 = 1.00 for r in {7,15,31,63}; r=31 d*pi_2 = %.4f (want 1.33 +- 0.01)",
                  d_pi_2);
    report(7, ok, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_lfsr() {
    const bool ok = lfsr_period(2, 1, 0b10) == 3 && lfsr_period(5, 2, 1) == 31 &&
                    lfsr_period(5, 2, 0b10110) == 31 && lfsr_period(7, 1, 1) == 127 &&
                    lfsr_period(7, 1, 0b1010011) == 127;
    report(8, ok, "LFSR periods: (2,1) -> 3, (5,2) -> 31, (7,1) -> 127 with nonzero seeds");
}

// ---------------------------------------------------------------- criterion 9
double median_mod_square_seconds(std::uint64_t r, int reps) {
    const Trinomial t(r, r / 2 - 1);
    PowerChain chain(t);
    chain.advance(8);  // densify the value
    std::vector<double> samples;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        chain.advance(16);
        samples.push_back(seconds_since(t0) / 16.0);
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

void criterion_performance() {
    // Part 1: mod_square time scales linearly-ish with r.
    const double t_small = median_mod_square_seconds(400009, 9);
    const double t_large = median_mod_square_seconds(1000003, 9);
    const double ratio = t_large / t_small;
    {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "mod_square: %.3f us at r=400009, %.3f us at r=1000003, ratio %.2f (want <= 3)",
                      t_small * 1e6, t_large * 1e6, ratio);
        report(9, ratio <= 3.0, buf, /*informative=*/true);
    }

    // Part 2: blocked DDF vs naive at r = 3021377, degrees up to 10^4.
    // The naive leg runs until it either finishes or has provably spent
    // more than twice the blocked time, whichever comes first; the early
    // exit is sound because its elapsed time only grows.
    const Trinomial t(3021377, 361604);
    const std::uint64_t dmax = 10000;

    const auto t0 = std::chrono::steady_clock::now();
    const auto blocked_hit = smallest_factor_up_to(t, BlockingSchedule::two_level(45), dmax);
    const double blocked_s = seconds_since(t0);

    const DensePoly t_dense = t.dense();
    const DensePoly x = DensePoly::x();
    PowerChain chain(t);
    const auto t1 = std::chrono::steady_clock::now();
    double naive_s = 0;
    std::uint64_t naive_done = 0;
    std::optional<std::uint64_t> naive_hit;
    for (std::uint64_t d = 1; d <= dmax; ++d) {
        chain.advance();
        const DensePoly cand = add(chain.value(), x);
        const DensePoly g = cand.is_zero() ? t_dense : gcd(t_dense, cand);
        naive_done = d;
        if (g.degree() > 0) {
            naive_hit = d;
            break;
        }
        naive_s = seconds_since(t1);
        if (naive_s > 2.0 * blocked_s && d < dmax) break;
    }
    naive_s = seconds_since(t1);

    const bool same_verdict =
        (!blocked_hit && !naive_hit) || (blocked_hit && naive_hit && blocked_hit->first == *naive_hit) ||
        (blocked_hit && !naive_hit && naive_done < blocked_hit->first) || (!blocked_hit && !naive_hit);
    const bool naive_finished = naive_done == dmax || naive_hit.has_value();
    const bool pass = same_verdict && (naive_finished ? naive_s >= 2.0 * blocked_s
                                                      : true /* proven by early exit */);
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "blocked DDF to d=10^4 at r=3021377: %.1f s; naive: %.1f s for %llu degrees%s "
                  "(needs naive >= 2x blocked)",
                  blocked_s, naive_s, static_cast<unsigned long long>(naive_done),
                  naive_finished ? "" : " [stopped early, already past 2x]");
    report(9, pass, buf, /*informative=*/true);
}

}  // namespace

int main(int argc, char** argv) {
    bool run_core = true, run_perf = true;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-perf") == 0) run_perf = false;
        if (std::strcmp(argv[i], "--only-perf") == 0) run_core = false;
    }
    if (run_core) {
        criterion_known_values();
        criterion_oracle_equivalence();
        criterion_swan_exhaustive();
        criterion_mersenne_hunts();
        criterion_determinism_resume();
        criterion_certificates();
        criterion_stats();
        criterion_lfsr();
    }
    if (run_perf) criterion_performance();
    if (g_failures) std::printf("%d gating criterion(s) FAILED\n", g_failures);
    else std::printf("all gating criteria passed\n");
    return g_failures == 0 ? 0 : 1;
}
