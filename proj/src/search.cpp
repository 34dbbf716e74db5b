#include "trinom/search.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace trinom {

namespace {

const char* mode_name(SearchMode m) {
    switch (m) {
        case SearchMode::Naive: return "naive";
        case SearchMode::SingleLevel: return "block";
        case SearchMode::TwoLevel: return "block2";
    }
    return "?";
}

SearchMode mode_from_name(std::string_view name) {
    if (name == "naive") return SearchMode::Naive;
    if (name == "block") return SearchMode::SingleLevel;
    if (name == "block2") return SearchMode::TwoLevel;
    throw std::invalid_argument("unknown search mode '" + std::string(name) + "'");
}

std::uint64_t header_field(std::string_view line, std::string_view key) {
    const std::string token = std::string(key) + "=";
    const std::size_t at = line.find(token);
    if (at == std::string_view::npos)
        throw std::invalid_argument("checkpoint header missing '" + std::string(key) + "'");
    std::uint64_t v = 0;
    std::size_t p = at + token.size();
    if (p >= line.size() || !isdigit(static_cast<unsigned char>(line[p])))
        throw std::invalid_argument("checkpoint header: bad '" + std::string(key) + "'");
    for (; p < line.size() && isdigit(static_cast<unsigned char>(line[p])); ++p)
        v = v * 10 + static_cast<std::uint64_t>(line[p] - '0');
    return v;
}

void write_file_atomically(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << contents;
        if (!out.flush()) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic rename to '" + path + "' failed");
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> compress_ranges(const std::set<std::uint64_t>& vals) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t v : vals) {
        if (!out.empty() && out.back().second + 1 == v) {
            out.back().second = v;
        } else {
            out.emplace_back(v, v);
        }
    }
    return out;
}

}  // namespace

std::string Checkpoint::to_text() const {
    std::ostringstream out;
    out << "checkpoint v1 r=" << r << " slo=" << s_lo << " shi=" << s_hi << " mode=" << mode_name(mode)
        << " m=" << block_m << "\n";
    for (const auto& [lo, hi] : done) out << "done " << lo << ".." << hi << "\n";
    for (const auto& line : chain_lines) out << line << "\n";
    for (const auto& cert : found) out << serialize(cert) << "\n";
    return out.str();
}

Checkpoint Checkpoint::from_text(std::string_view text) {
    Checkpoint ck;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("checkpoint v1 ", 0) != 0)
        throw std::invalid_argument("checkpoint: missing 'checkpoint v1' header");
    ck.r = header_field(line, "r");
    ck.s_lo = header_field(line, "slo");
    ck.s_hi = header_field(line, "shi");
    ck.block_m = static_cast<unsigned>(header_field(line, "m"));
    const std::size_t mode_at = line.find("mode=");
    std::string mode_str;
    for (std::size_t p = mode_at + 5; p < line.size() && line[p] != ' '; ++p) mode_str += line[p];
    ck.mode = mode_from_name(mode_str);

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("done ", 0) == 0) {
            const std::size_t dots = line.find("..");
            if (dots == std::string::npos) throw std::invalid_argument("checkpoint: bad done range");
            ck.done.emplace_back(std::stoull(line.substr(5, dots - 5)), std::stoull(line.substr(dots + 2)));
        } else if (line.rfind("chain ", 0) == 0) {
            ck.chain_lines.push_back(line);
        } else {
            ck.found.push_back(parse_certificate(line));
        }
    }
    return ck;
}

HuntResult hunt(const SearchJob& job, std::atomic<bool>* cancel,
                const std::function<void(const Certificate&)>& on_certificate) {
    if (job.r < 2) throw std::invalid_argument("hunt: r must be at least 2");
    const std::uint64_t r = job.r;
    const std::uint64_t s_hi = job.s_hi == 0 ? r / 2 : job.s_hi;
    if (!(1 <= job.s_lo && job.s_lo <= s_hi && s_hi <= r / 2))
        throw std::invalid_argument("hunt: need 1 <= s_lo <= s_hi <= floor(r/2)");
    if (job.workers < 1) throw std::invalid_argument("hunt: need at least one worker");

    HuntResult result;
    result.mersenne_degree = MersenneTable::known().contains(r);

    // Prime r = +-3 (mod 8): every s outside {2, r-2} gives an even factor
    // count, so the driver only tests the exception cases.
    std::vector<std::uint64_t> candidates;
    const bool restricted = job.swan_restrict && (r % 8 == 3 || r % 8 == 5) && is_prime(r);
    if (restricted) {
        for (std::uint64_t s : {std::uint64_t{2}, r - 2})
            if (job.s_lo <= s && s <= s_hi) candidates.push_back(s);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::fprintf(stderr,
                     "hunt: r=%llu is prime and = %llu (mod 8); Swan rules out all s except 2 and r-2\n",
                     static_cast<unsigned long long>(r), static_cast<unsigned long long>(r % 8));
    } else {
        for (std::uint64_t s = job.s_lo; s <= s_hi; ++s) candidates.push_back(s);
    }
    result.skipped_by_swan = (s_hi - job.s_lo + 1) - candidates.size();

    std::map<std::uint64_t, Certificate> certs;       // completed, by s
    std::map<std::uint64_t, PowerChain> chain_seeds;  // in-progress chains from a checkpoint
    std::set<std::uint64_t> done;

    if (job.resume && !job.checkpoint_path.empty()) {
        std::ifstream in(job.checkpoint_path, std::ios::binary);
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            Checkpoint ck = Checkpoint::from_text(buf.str());
            if (ck.r != r || ck.s_lo != job.s_lo || ck.s_hi != s_hi ||
                ck.mode != job.schedule.mode || ck.block_m != job.schedule.block_m)
                throw std::invalid_argument("checkpoint does not match this job");
            for (const auto& [lo, hi] : ck.done)
                for (std::uint64_t s = lo; s <= hi; ++s) done.insert(s);
            for (const auto& cert : ck.found)
                if (done.count(cert.s)) certs[cert.s] = cert;
            for (const auto& line : ck.chain_lines) {
                PowerChain chain = PowerChain::from_checkpoint_line(line);
                if (chain.trinomial().r == r) chain_seeds.emplace(chain.trinomial().s, std::move(chain));
            }
        }
    }

    std::vector<std::uint64_t> queue;
    for (std::uint64_t s : candidates)
        if (!done.count(s)) queue.push_back(s);

    struct Shared {
        std::mutex m;
        std::condition_variable cv;
        std::size_t next = 0;
        std::map<std::uint64_t, Certificate> fresh;
        std::vector<std::pair<std::uint64_t, std::string>> errors;
        std::map<std::uint64_t, std::string> chains;  // live chain checkpoint lines
        std::size_t open_tasks = 0;
        bool dirty = false;
    } shared;
    shared.open_tasks = queue.size();

    auto save_checkpoint = [&](bool force) {
        static_cast<void>(force);
        if (job.checkpoint_path.empty()) return;
        Checkpoint ck;
        ck.r = r;
        ck.s_lo = job.s_lo;
        ck.s_hi = s_hi;
        ck.mode = job.schedule.mode;
        ck.block_m = job.schedule.block_m;
        std::set<std::uint64_t> done_now = done;
        for (const auto& [s, c] : certs) done_now.insert(s);
        ck.done = compress_ranges(done_now);
        for (const auto& [s, c] : certs) ck.found.push_back(c);
        for (const auto& [s, line] : shared.chains) ck.chain_lines.push_back(line);
        write_file_atomically(job.checkpoint_path, ck.to_text());
    };

    auto worker_fn = [&] {
        while (true) {
            std::uint64_t s;
            {
                std::lock_guard<std::mutex> lk(shared.m);
                if (shared.next >= queue.size()) return;
                if (cancel && cancel->load()) return;
                s = queue[shared.next++];
            }
            const Trinomial t(r, s);
            ScanHooks hooks;
            hooks.chain_checkpoint_every = job.chain_checkpoint_every;
            hooks.on_chain_checkpoint = [&shared, s](const PowerChain& chain) {
                std::lock_guard<std::mutex> lk(shared.m);
                shared.chains[s] = chain.checkpoint_line();
                shared.dirty = true;
                shared.cv.notify_all();
            };
            const auto seed = chain_seeds.find(s);
            if (seed != chain_seeds.end()) hooks.resume_chain = &seed->second;

            std::optional<Certificate> made;
            std::string error;
            try {
                const FactorParity parity = factor_parity(r, s);
                const SearchOutcome outcome = ddf_smallest(t, job.schedule, parity, &hooks);
                if (job.residue_certificates &&
                    outcome.verdict == SearchOutcome::Verdict::SmallestFactor) {
                    made = emit_residue(t);
                } else {
                    made = emit(t, outcome);
                }
            } catch (const InternalConsistencyError& e) {
                error = e.what();
            }
            {
                std::lock_guard<std::mutex> lk(shared.m);
                if (made) {
                    shared.fresh[s] = *made;
                } else {
                    shared.errors.emplace_back(s, error);
                }
                shared.chains.erase(s);
                --shared.open_tasks;
                shared.dirty = true;
                shared.cv.notify_all();
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < job.workers; ++i) pool.emplace_back(worker_fn);

    // Collector: drain results, invoke the callback in ascending s order,
    // checkpoint on completions (throttled).
    std::size_t emitted_upto = 0;  // index into candidates
    auto last_save = std::chrono::steady_clock::now() - std::chrono::hours(1);
    auto flush_ordered = [&](std::vector<Certificate>& ready) {
        while (emitted_upto < candidates.size()) {
            const std::uint64_t s = candidates[emitted_upto];
            const auto it = certs.find(s);
            if (it != certs.end()) {
                ready.push_back(it->second);
                ++emitted_upto;
                continue;
            }
            const bool errored = std::any_of(result.errors.begin(), result.errors.end(),
                                             [&](const auto& e) { return e.first == s; });
            if (errored) {
                ++emitted_upto;
                continue;
            }
            break;
        }
    };

    while (true) {
        std::vector<Certificate> ready;
        bool finished;
        {
            std::unique_lock<std::mutex> lk(shared.m);
            shared.cv.wait_for(lk, std::chrono::milliseconds(200),
                               [&] { return shared.dirty || shared.open_tasks == 0; });
            shared.dirty = false;
            for (auto& [s, c] : shared.fresh) certs[s] = std::move(c);
            shared.fresh.clear();
            for (auto& e : shared.errors) result.errors.push_back(e);
            shared.errors.clear();
            finished = shared.open_tasks == 0 || (cancel && cancel->load());
        }
        flush_ordered(ready);
        for (const Certificate& c : ready)
            if (on_certificate) on_certificate(c);

        const auto now = std::chrono::steady_clock::now();
        if (std::chrono::duration<double>(now - last_save).count() >= job.checkpoint_min_interval_s) {
            std::lock_guard<std::mutex> lk(shared.m);
            save_checkpoint(false);
            last_save = now;
        }
        if (finished) break;
    }
    for (auto& th : pool) th.join();

    // Late results that arrived while finishing.
    {
        std::lock_guard<std::mutex> lk(shared.m);
        for (auto& [s, c] : shared.fresh) certs[s] = std::move(c);
        shared.fresh.clear();
        for (auto& e : shared.errors) result.errors.push_back(e);
        shared.errors.clear();
    }
    {
        std::vector<Certificate> ready;
        flush_ordered(ready);
        for (const Certificate& c : ready)
            if (on_certificate) on_certificate(c);
    }
    {
        std::lock_guard<std::mutex> lk(shared.m);
        save_checkpoint(true);
    }

    result.interrupted = cancel && cancel->load();
    for (const auto& [s, c] : certs) {
        result.certificates.push_back(c);
        ++result.tested;
        if (c.kind == Certificate::Kind::Irreducible) ++result.irreducible;
        else ++result.reducible;
    }
    std::sort(result.errors.begin(), result.errors.end());
    result.tested += result.errors.size();

    if (!result.interrupted && !job.out_path.empty()) {
        std::string contents;
        for (const Certificate& c : result.certificates) contents += serialize(c) + "\n";
        write_file_atomically(job.out_path, contents);
    }
    return result;
}

PiStats stats_pi(std::uint64_t r, std::uint64_t dmax, const BlockingSchedule& schedule) {
    if (r < 3) throw std::invalid_argument("stats_pi: r must be at least 3");
    if (dmax < 1) throw std::invalid_argument("stats_pi: dmax must be at least 1");
    const std::uint64_t n = r / 2;
    const std::uint64_t cap = std::min(dmax, r - 1);
    std::vector<std::uint64_t> min_degree(n + 1, 0);  // 0 = no factor <= cap
    for (std::uint64_t s = 1; s <= n; ++s) {
        const auto hit = smallest_factor_up_to(Trinomial(r, s), schedule, cap);
        min_degree[s] = hit ? hit->first : 0;
    }
    PiStats stats;
    stats.r = r;
    for (std::uint64_t d = 1; d <= dmax; ++d) {
        std::uint64_t surviving = 0;
        for (std::uint64_t s = 1; s <= n; ++s)
            if (min_degree[s] == 0 || min_degree[s] > d) ++surviving;
        const double pi = static_cast<double>(surviving) / static_cast<double>(n);
        stats.rows.push_back({d, pi, static_cast<double>(d) * pi});
    }
    return stats;
}

std::uint64_t lfsr_period(std::uint64_t r, std::uint64_t s, std::uint64_t seed_bits) {
    if (r > 32) throw std::invalid_argument("lfsr_period: r must be <= 32 at desk scale");
    if (!(r > s && s > 0)) throw std::invalid_argument("lfsr_period requires r > s > 0");
    const std::uint64_t mask = (std::uint64_t{1} << r) - 1;
    const std::uint64_t start = seed_bits & mask;
    if (start == 0) return 1;
    std::uint64_t state = start;
    std::uint64_t period = 0;
    do {
        const std::uint64_t bit = ((state >> (r - s)) ^ state) & 1;
        state = (state >> 1) | (bit << (r - 1));
        ++period;
    } while (state != start);
    return period;
}

FileVerifyResult verify_file(const std::string& path, VerifyTier tier, std::uint64_t full_bound) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    FileVerifyResult result;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        ++result.records;
        std::string reason;
        bool ok = false;
        try {
            const Certificate c = parse_certificate(line);
            const VerifyReport report = verify(c, tier, full_bound);
            ok = report.valid;
            if (!ok) {
                for (const auto& chk : report.checks)
                    if (!chk.passed) reason += (reason.empty() ? "" : "; ") + chk.name;
            }
        } catch (const std::exception& e) {
            reason = e.what();
        }
        result.records_detail.push_back({line_number, line, ok, reason});
        if (ok) {
            ++result.passed;
        } else {
            ++result.failed;
            result.failures.push_back({line_number, line, ok, reason});
        }
    }
    return result;
}

}  // namespace trinom
