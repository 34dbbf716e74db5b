#include "trinom/certificates.hpp"

#include <charconv>

namespace trinom {

namespace {

std::uint64_t parse_u64_field(std::string_view f, const char* what) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size())
        throw CertificateParseError(std::string("certificate: bad ") + what + " field");
    return v;
}

bool valid_hex(std::string_view h) {
    if (h.empty()) return false;
    for (char c : h) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        if (!ok) return false;
    }
    return true;
}

// Fixed-width encoding of the low `width` coefficients; unlike encode_hex
// the leading zeros are kept, since the width is the message.
std::string encode_low_window(const DensePoly& p, unsigned width) {
    static const char digits[] = "0123456789abcdef";
    std::string out(width / 4, '0');
    for (unsigned nib = 0; nib < width / 4; ++nib) {
        unsigned v = 0;
        for (unsigned b = 0; b < 4; ++b)
            if (p.coeff(4 * nib + b)) v |= 1u << b;
        out[width / 4 - 1 - nib] = digits[v];
    }
    return out;
}

// x^e mod f with e = r presented in binary; cost depends on deg f and log e
// only, so factor certificates for huge r verify quickly.
DensePoly pow_x_mod(std::uint64_t e, const DensePoly& f) {
    DensePoly v = DensePoly::one();
    for (int bit = 63; bit >= 0; --bit) {
        v = divrem(square(v), f).remainder;
        if ((e >> bit) & 1) v = divrem(shift_left(v, 1), f).remainder;
    }
    return v;
}

bool divides_trinomial(const DensePoly& f, std::uint64_t r, std::uint64_t s) {
    const DensePoly sum = add(add(pow_x_mod(r, f), pow_x_mod(s, f)), divrem(DensePoly::one(), f).remainder);
    return sum.is_zero();
}

}  // namespace

Certificate emit(const Trinomial& t, const SearchOutcome& outcome) {
    Certificate c;
    c.r = t.r;
    c.s = t.s;
    if (outcome.verdict == SearchOutcome::Verdict::Irreducible) {
        c.kind = Certificate::Kind::Irreducible;
    } else {
        c.kind = Certificate::Kind::Factor;
        c.factor_degree = outcome.factor_degree;
        c.factor_hex = encode_hex(outcome.factor);
    }
    return c;
}

Certificate emit_residue(const Trinomial& t) {
    PowerChain chain(t);
    chain.advance(t.r);
    const DensePoly residue = add(chain.value(), DensePoly::x());
    if (residue.is_zero())
        throw std::invalid_argument(
            "emit_residue: x^(2^r) = x mod T, residue certificates only certify reducibility");
    Certificate c;
    c.r = t.r;
    c.s = t.s;
    c.kind = Certificate::Kind::Residue;
    for (unsigned width : {32u, 64u, 128u}) {
        if (!truncate(residue, width).is_zero() || width == 128) {
            c.residue_hex = encode_low_window(residue, width);
            break;
        }
    }
    return c;
}

std::string serialize(const Certificate& c) {
    std::string line = std::to_string(c.r) + " " + std::to_string(c.s) + " ";
    switch (c.kind) {
        case Certificate::Kind::Factor:
            line += "factor " + std::to_string(c.factor_degree) + " " + c.factor_hex;
            break;
        case Certificate::Kind::Irreducible:
            line += "irreducible";
            break;
        case Certificate::Kind::Residue:
            line += "residue " + c.residue_hex;
            break;
    }
    return line;
}

Certificate parse_certificate(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
        if (end > pos) f.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    if (f.size() < 3) throw CertificateParseError("certificate: expected '<r> <s> <kind> ...'");

    Certificate c;
    c.r = parse_u64_field(f[0], "r");
    c.s = parse_u64_field(f[1], "s");
    const std::string_view kind = f[2];
    if (kind == "factor") {
        if (f.size() != 5) throw CertificateParseError("certificate: factor needs '<d> <hex>'");
        c.kind = Certificate::Kind::Factor;
        c.factor_degree = parse_u64_field(f[3], "degree");
        if (!valid_hex(f[4])) throw CertificateParseError("certificate: bad factor hex");
        c.factor_hex = std::string(f[4]);
    } else if (kind == "irreducible") {
        if (f.size() != 3) throw CertificateParseError("certificate: irreducible takes no extra fields");
        c.kind = Certificate::Kind::Irreducible;
    } else if (kind == "residue") {
        if (f.size() != 4) throw CertificateParseError("certificate: residue needs '<hex>'");
        c.kind = Certificate::Kind::Residue;
        if (!valid_hex(f[3]) || f[3].size() < 8)
            throw CertificateParseError("certificate: residue hex must be at least 8 digits");
        c.residue_hex = std::string(f[3]);
    } else {
        throw CertificateParseError("certificate: unknown kind '" + std::string(kind) + "'");
    }
    return c;
}

VerifyReport verify(const Certificate& c, VerifyTier tier, std::uint64_t full_bound) {
    VerifyReport report;
    auto check = [&](std::string name, bool ok, std::string detail = "") {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
        report.valid = report.valid && ok;
    };

    if (c.r <= c.s || c.s == 0) {
        check("trinomial shape", false, "requires r > s > 0");
        return report;
    }
    const Trinomial t(c.r, c.s);

    switch (c.kind) {
        case Certificate::Kind::Factor: {
            DensePoly f;
            try {
                f = decode_hex(c.factor_hex);
            } catch (const std::invalid_argument& e) {
                check("factor decodes", false, e.what());
                return report;
            }
            check("factor decodes", true);
            check("degree matches",
                  f.degree() >= 1 && static_cast<std::uint64_t>(f.degree()) == c.factor_degree);
            check("proper divisor degree", c.factor_degree >= 1 && c.factor_degree < c.r);
            if (!report.valid) return report;
            check("divides trinomial", divides_trinomial(f, c.r, c.s));
            check("factor irreducible", irreducible_direct(f));
            break;
        }
        case Certificate::Kind::Irreducible: {
            check("direct irreducibility test", irreducible_direct(t.dense()));
            break;
        }
        case Certificate::Kind::Residue: {
            const unsigned width = static_cast<unsigned>(4 * c.residue_hex.size());
            check("residue width", width == 32 || width == 64 || width == 128);
            if (!report.valid) return report;
            PowerChain chain(t);
            chain.advance(t.r);
            const DensePoly residue = add(chain.value(), DensePoly::x());
            check("trinomial fails x^(2^r) = x", !residue.is_zero());
            check("residue window nonzero or maximal",
                  !truncate(residue, width).is_zero() || width == 128);
            check("residue matches recomputation",
                  encode_low_window(residue, width) == c.residue_hex ||
                      [&] {
                          // accept either case on input
                          std::string lower(c.residue_hex);
                          for (char& ch : lower)
                              if (ch >= 'A' && ch <= 'F') ch = static_cast<char>(ch - 'A' + 'a');
                          return encode_low_window(residue, width) == lower;
                      }());
            break;
        }
    }

    if (tier == VerifyTier::Full && c.r <= full_bound && report.valid) {
        report.full_tier_applied = true;
        const FactorParity parity = factor_parity(c.r, c.s);
        const SearchOutcome truth = ddf_smallest(t, BlockingSchedule::two_level(), parity);
        if (c.kind == Certificate::Kind::Irreducible) {
            check("re-search agrees irreducible",
                  truth.verdict == SearchOutcome::Verdict::Irreducible);
        } else {
            check("re-search finds a factor", truth.verdict == SearchOutcome::Verdict::SmallestFactor);
            if (c.kind == Certificate::Kind::Factor &&
                truth.verdict == SearchOutcome::Verdict::SmallestFactor) {
                check("factor degree minimal", truth.factor_degree == c.factor_degree);
                check("factor lexicographically least", encode_hex(truth.factor) == c.factor_hex);
            }
        }
    }
    return report;
}

}  // namespace trinom
