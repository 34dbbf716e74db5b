#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trinom/certificates.hpp"
#include "trinom/factor_engine.hpp"

namespace trinom {

// One degree-r batch: test every canonical candidate s in [s_lo, s_hi].
struct SearchJob {
    std::uint64_t r = 0;
    std::uint64_t s_lo = 1;
    std::uint64_t s_hi = 0;  // 0 means floor(r/2)
    BlockingSchedule schedule = BlockingSchedule::two_level();
    unsigned workers = 1;
    std::string out_path;         // certificate file; empty keeps results in memory only
    std::string checkpoint_path;  // empty disables checkpointing
    bool resume = false;
    bool residue_certificates = false;  // residue instead of factor for reducibles
    bool swan_restrict = true;          // prime r = +-3 (mod 8): test only s in {2, r-2}
    std::uint64_t chain_checkpoint_every = 1000000;  // squarings within one s
    double checkpoint_min_interval_s = 5.0;
};

struct HuntResult {
    std::vector<Certificate> certificates;  // ascending s
    std::vector<std::pair<std::uint64_t, std::string>> errors;  // per-s internal faults
    std::uint64_t tested = 0;
    std::uint64_t irreducible = 0;
    std::uint64_t reducible = 0;
    std::uint64_t skipped_by_swan = 0;
    bool mersenne_degree = false;  // irreducible => primitive at this degree
    bool interrupted = false;
};

// Runs the job over a worker pool with a dynamic queue of single-s tasks.
// on_certificate fires in ascending s order. A set cancel flag stops the run
// after the in-flight tasks finish, leaving a resumable checkpoint; the
// certificate file is only written on clean completion so a finished run's
// bytes never depend on worker count or interruption history.
HuntResult hunt(const SearchJob& job, std::atomic<bool>* cancel = nullptr,
                const std::function<void(const Certificate&)>& on_certificate = {});

// Resumable state: which s values are done plus their certificates, and
// power-chain lines for long-running in-progress scans.
struct Checkpoint {
    std::uint64_t r = 0;
    std::uint64_t s_lo = 0, s_hi = 0;
    SearchMode mode = SearchMode::TwoLevel;
    unsigned block_m = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> done;  // inclusive ranges
    std::vector<Certificate> found;
    std::vector<std::string> chain_lines;

    std::string to_text() const;
    static Checkpoint from_text(std::string_view text);
};

// Survival statistics: pi_d = fraction of candidates s <= r/2 whose
// trinomial has no factor of degree <= d.
struct PiStats {
    std::uint64_t r = 0;
    struct Row {
        std::uint64_t d;
        double pi;
        double d_pi;
    };
    std::vector<Row> rows;
};

PiStats stats_pi(std::uint64_t r, std::uint64_t dmax,
                 const BlockingSchedule& schedule = BlockingSchedule::two_level());

// Least period of the shift-register state sequence for
// z_n = z_{n-s} + z_{n-r} (mod 2), seed bit k = z_k. The all-zero seed is a
// fixed point with period 1. Desk-scale only: r <= 32.
std::uint64_t lfsr_period(std::uint64_t r, std::uint64_t s, std::uint64_t seed_bits);

struct FileVerifyResult {
    std::uint64_t records = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    struct Record {
        std::size_t line_number;
        std::string line;
        bool ok;
        std::string reason;  // failed checks, empty when ok
    };
    std::vector<Record> records_detail;  // one entry per certificate line
    std::vector<Record> failures;        // the failing subset
};

// Verifies every certificate line of a file (Quick by default); '#' lines
// and blank lines are ignored. Parse errors count as failures, not crashes.
FileVerifyResult verify_file(const std::string& path, VerifyTier tier, std::uint64_t full_bound = 512);

}  // namespace trinom
