// Command-line driver for the trinomial search library: candidate hunts with
// checkpoint/resume, certificate verification, and the small diagnostic
// subcommands (swan, irred, factor, stats, lfsr).
#include <atomic>
#include <csignal>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "trinom/certificates.hpp"
#include "trinom/factor_engine.hpp"
#include "trinom/search.hpp"
#include "trinom/swan.hpp"

namespace {

std::atomic<bool> g_cancel{false};

void handle_signal(int) { g_cancel.store(true); }

trinom::BlockingSchedule make_schedule(const std::string& mode, unsigned block_m) {
    if (mode == "naive") return trinom::BlockingSchedule::naive();
    if (mode == "block") return trinom::BlockingSchedule::single_level(block_m);
    if (mode == "block2") return trinom::BlockingSchedule::two_level(block_m);
    throw CLI::ValidationError("--mode must be naive, block or block2");
}

std::pair<std::uint64_t, std::uint64_t> parse_s_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("--s-range expects LO..HI");
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
}

void print_json(const trinom::Certificate& c) {
    switch (c.kind) {
        case trinom::Certificate::Kind::Factor:
            std::printf("{\"r\":%llu,\"s\":%llu,\"status\":\"factor\",\"d\":%llu,\"factor\":\"%s\"}\n",
                        static_cast<unsigned long long>(c.r), static_cast<unsigned long long>(c.s),
                        static_cast<unsigned long long>(c.factor_degree), c.factor_hex.c_str());
            break;
        case trinom::Certificate::Kind::Irreducible:
            std::printf("{\"r\":%llu,\"s\":%llu,\"status\":\"irreducible\"}\n",
                        static_cast<unsigned long long>(c.r), static_cast<unsigned long long>(c.s));
            break;
        case trinom::Certificate::Kind::Residue:
            std::printf("{\"r\":%llu,\"s\":%llu,\"status\":\"residue\",\"factor\":\"%s\"}\n",
                        static_cast<unsigned long long>(c.r), static_cast<unsigned long long>(c.s),
                        c.residue_hex.c_str());
            break;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search for irreducible and primitive trinomials x^r + x^s + 1 over GF(2)"};
    app.require_subcommand(1);

    // hunt
    auto* hunt_cmd = app.add_subcommand("hunt", "Test all candidate s for one degree r");
    std::uint64_t r = 0;
    std::string s_range, mode = "block2", out_path, checkpoint_path;
    unsigned block_m = 0, threads = 1;
    bool resume = false, residue = false, json = false, no_swan = false;
    hunt_cmd->add_option("-r,--degree", r, "degree r")->required();
    hunt_cmd->add_option("--s-range", s_range, "candidate range LO..HI (default 1..r/2)");
    hunt_cmd->add_option("--mode", mode, "naive|block|block2 (default block2)");
    hunt_cmd->add_option("--block-m", block_m, "blocking parameter m (0 = auto)");
    hunt_cmd->add_option("--threads,-t", threads, "worker count");
    hunt_cmd->add_option("--out", out_path, "certificate output file");
    hunt_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file");
    hunt_cmd->add_flag("--resume", resume, "resume from the checkpoint file");
    hunt_cmd->add_flag("--residue", residue, "emit residue certificates for reducibles");
    hunt_cmd->add_flag("--json", json, "emit one JSON object per result");
    hunt_cmd->add_flag("--no-swan-filter", no_swan, "test every s even when Swan rules the degree out");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Verify a certificate file");
    std::string verify_path;
    bool full = false, verify_verbose = false;
    std::uint64_t full_bound = 512;
    verify_cmd->add_option("file", verify_path, "certificate file")->required();
    verify_cmd->add_flag("--full", full, "re-search to confirm minimality (r <= full bound)");
    verify_cmd->add_option("--full-bound", full_bound, "degree bound for the full tier");
    verify_cmd->add_flag("-v,--verbose", verify_verbose, "print a result line per record");

    // swan
    auto* swan_cmd = app.add_subcommand("swan", "Factor-count parity of x^r + x^s + 1");
    std::uint64_t swan_r = 0, swan_s = 0;
    swan_cmd->add_option("r", swan_r)->required();
    swan_cmd->add_option("s", swan_s)->required();

    // irred
    auto* irred_cmd = app.add_subcommand("irred", "Direct irreducibility test for x^r + x^s + 1");
    std::uint64_t irred_r = 0, irred_s = 0;
    irred_cmd->add_option("r", irred_r)->required();
    irred_cmd->add_option("s", irred_s)->required();

    // factor
    auto* factor_cmd = app.add_subcommand("factor", "Smallest factor (certificate line) of one trinomial");
    std::uint64_t fac_r = 0, fac_s = 0;
    std::string fac_mode = "block2";
    unsigned fac_m = 0;
    factor_cmd->add_option("r", fac_r)->required();
    factor_cmd->add_option("s", fac_s)->required();
    factor_cmd->add_option("--mode", fac_mode, "naive|block|block2");
    factor_cmd->add_option("--block-m", fac_m, "blocking parameter m (0 = auto)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Survival fractions pi_d for one degree");
    std::uint64_t stats_r = 0, stats_dmax = 10;
    stats_cmd->add_option("-r,--degree", stats_r, "degree r")->required();
    stats_cmd->add_option("--dmax", stats_dmax, "largest factor degree to tabulate");

    // lfsr
    auto* lfsr_cmd = app.add_subcommand("lfsr", "Period of z_n = z_{n-s} + z_{n-r} (mod 2)");
    std::uint64_t lfsr_r = 0, lfsr_s = 0;
    std::string seed = "1";
    lfsr_cmd->add_option("r", lfsr_r)->required();
    lfsr_cmd->add_option("s", lfsr_s)->required();
    lfsr_cmd->add_option("--seed", seed, "seed bits z_0 z_1 ... as a 0/1 string");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*hunt_cmd) {
            trinom::SearchJob job;
            job.r = r;
            if (!s_range.empty()) std::tie(job.s_lo, job.s_hi) = parse_s_range(s_range);
            job.schedule = make_schedule(mode, block_m);
            job.workers = threads;
            job.out_path = out_path;
            job.checkpoint_path = checkpoint_path;
            job.resume = resume;
            job.residue_certificates = residue;
            job.swan_restrict = !no_swan;

            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            const auto result = trinom::hunt(job, &g_cancel,
                                             [&](const trinom::Certificate& c) {
                                                 if (json) print_json(c);
                                                 else std::printf("%s\n", trinom::serialize(c).c_str());
                                                 std::fflush(stdout);
                                             });
            std::fprintf(stderr, "hunt r=%llu: tested %llu, %s %llu, reducible %llu, skipped by Swan %llu\n",
                         static_cast<unsigned long long>(r),
                         static_cast<unsigned long long>(result.tested),
                         result.mersenne_degree ? "primitive" : "irreducible",
                         static_cast<unsigned long long>(result.irreducible),
                         static_cast<unsigned long long>(result.reducible),
                         static_cast<unsigned long long>(result.skipped_by_swan));
            for (const auto& [s, what] : result.errors)
                std::fprintf(stderr, "hunt r=%llu s=%llu: internal consistency error: %s\n",
                             static_cast<unsigned long long>(r), static_cast<unsigned long long>(s),
                             what.c_str());
            if (result.interrupted) {
                std::fprintf(stderr, "interrupted; checkpoint saved\n");
                return 130;
            }
            return result.errors.empty() ? 0 : 3;
        }

        if (*verify_cmd) {
            const auto report = trinom::verify_file(
                verify_path, full ? trinom::VerifyTier::Full : trinom::VerifyTier::Quick, full_bound);
            if (verify_verbose)
                for (const auto& rec : report.records_detail)
                    std::printf("line %zu: %s: %s\n", rec.line_number, rec.ok ? "ok" : "FAIL",
                                rec.line.c_str());
            for (const auto& f : report.failures)
                std::fprintf(stderr, "line %zu: FAIL (%s): %s\n", f.line_number, f.reason.c_str(),
                             f.line.c_str());
            std::printf("%llu records: %llu passed, %llu failed\n",
                        static_cast<unsigned long long>(report.records),
                        static_cast<unsigned long long>(report.passed),
                        static_cast<unsigned long long>(report.failed));
            return report.failed == 0 ? 0 : 1;
        }

        if (*swan_cmd) {
            const auto parity = trinom::factor_parity(swan_r, swan_s);
            std::printf("%s\n", parity == trinom::FactorParity::Even ? "even" : "odd");
            return 0;
        }

        if (*irred_cmd) {
            const trinom::Trinomial t(irred_r, irred_s);
            std::printf("%s\n", trinom::irreducible_direct(t.dense()) ? "irreducible" : "reducible");
            return 0;
        }

        if (*factor_cmd) {
            const trinom::Trinomial t(fac_r, fac_s);
            const auto parity = trinom::factor_parity(fac_r, fac_s);
            const auto outcome = trinom::ddf_smallest(t, make_schedule(fac_mode, fac_m), parity);
            std::printf("%s\n", trinom::serialize(trinom::emit(t, outcome)).c_str());
            return 0;
        }

        if (*stats_cmd) {
            const auto stats = trinom::stats_pi(stats_r, stats_dmax);
            std::printf("# r=%llu  columns: d pi_d d*pi_d\n", static_cast<unsigned long long>(stats.r));
            for (const auto& row : stats.rows)
                std::printf("%llu %.4f %.2f\n", static_cast<unsigned long long>(row.d), row.pi, row.d_pi);
            return 0;
        }

        if (*lfsr_cmd) {
            std::uint64_t bits = 0;
            for (std::size_t i = 0; i < seed.size(); ++i) {
                if (seed[i] == '1') bits |= std::uint64_t{1} << i;
                else if (seed[i] != '0') throw std::invalid_argument("--seed must be a 0/1 string");
            }
            std::printf("%llu\n",
                        static_cast<unsigned long long>(trinom::lfsr_period(lfsr_r, lfsr_s, bits)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
