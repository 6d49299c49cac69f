#pragma once

// Coding-theorem allocation: halting events (p, x) raise S_x by 2^-|p|; every
// time the leading one of S_x moves, x gets the lexicographically first free
// node at depth leading_one_position(S_x) + 1.  Also the interval construction
// turning a dyadic semimeasure into a prefix-free set of programs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/codes.hpp"
#include "ait/dyadic.hpp"
#include "ait/errors.hpp"
#include "ait/prefix_tree.hpp"

namespace ait {

struct ProgramOutput {
    BitString p;
    BitString x;

    friend bool operator==(const ProgramOutput&, const ProgramOutput&) = default;
};

struct AllocationQuadruple {
    BitString p;
    BitString x;
    DyadicRational s;
    std::optional<BitString> a;

    friend bool operator==(const AllocationQuadruple&, const AllocationQuadruple&) = default;
};

class Allocator {
public:
    const AllocationQuadruple& feed(const ProgramOutput& ev) {
        auto& s = totals_[ev.x];
        std::optional<std::uint32_t> before;
        if (!s.is_zero()) before = leading_one_position(s);
        s += DyadicRational::pow2_neg(static_cast<std::uint32_t>(ev.p.size()));
        std::uint32_t after = leading_one_position(s);  // throws if S_x > 1

        AllocationQuadruple q{ev.p, ev.x, s, std::nullopt};
        if (!before || *before != after) {
            try {
                q.a = tree_.allocate_first_available(after + 1);
            } catch (const CapacityError& e) {
                throw std::logic_error(std::string("allocator ran out of nodes, which the mass bound rules out: ") + e.what());
            }
            code_[*q.a] = ev.x;
        }
        log_.push_back(std::move(q));
        return log_.back();
    }

    const std::vector<AllocationQuadruple>& log() const { return log_; }
    // node -> string, nodes in dictionary order
    const std::map<BitString, BitString, decltype(&BitString::lex_less)>& code() const { return code_; }
    const std::map<BitString, DyadicRational>& totals() const { return totals_; }
    const PrefixTree& tree() const { return tree_; }

private:
    std::map<BitString, DyadicRational> totals_;
    PrefixTree tree_;
    std::vector<AllocationQuadruple> log_;
    std::map<BitString, BitString, decltype(&BitString::lex_less)> code_{&BitString::lex_less};
};

inline Allocator allocate_stream(const std::vector<ProgramOutput>& events) {
    Allocator a;
    for (const auto& ev : events) a.feed(ev);
    return a;
}

inline BitString decode_address(const BitString& address, const std::vector<ProgramOutput>& events) {
    auto a = allocate_stream(events);
    auto it = a.code().find(address);
    if (it == a.code().end()) throw LookupError("node " + address.literal() + " was never allocated");
    return it->second;
}

struct CodeLengthRow {
    BitString x;
    std::uint32_t final_depth = 0;
    DyadicRational final_s;
    std::uint32_t ceil_neg_log = 0;  // ceil(-log2 S_x) of the final S_x
    std::uint32_t gap = 0;           // final_depth - ceil_neg_log
    std::size_t nodes = 0;
};

// One row per string that received at least one node.
inline std::vector<CodeLengthRow> code_length_report(const Allocator& alloc) {
    std::map<BitString, CodeLengthRow> rows;
    for (const auto& q : alloc.log()) {
        if (!q.a) continue;
        auto& r = rows[q.x];
        r.x = q.x;
        r.final_depth = static_cast<std::uint32_t>(q.a->size());
        ++r.nodes;
    }
    std::vector<CodeLengthRow> out;
    for (auto& [x, r] : rows) {
        r.final_s = alloc.totals().at(x);
        r.ceil_neg_log = leading_one_position(r.final_s);
        r.gap = r.final_depth - r.ceil_neg_log;
        out.push_back(r);
    }
    return out;
}

inline std::vector<CodeLengthRow> code_length_report(const std::vector<ProgramOutput>& events) {
    return code_length_report(allocate_stream(events));
}

// Deterministic synthetic stream: count programs with random lengths in
// [min_len, max_len] built by kraft_construct (so the set is prefix-free),
// outputs drawn from `strings` random strings, order shuffled.
inline std::vector<ProgramOutput> synthetic_stream(std::size_t count, std::size_t strings, std::uint64_t seed,
                                                   std::uint32_t min_len = 17, std::uint32_t max_len = 40) {
    if (strings == 0 || min_len == 0 || min_len > max_len) throw DomainError("bad synthetic stream parameters");
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
    std::vector<std::uint32_t> lengths(count);
    for (auto& l : lengths) l = static_cast<std::uint32_t>(uniform(min_len, max_len));
    auto programs = kraft_construct(lengths);

    std::vector<BitString> outs;
    std::set<BitString> seen;
    while (outs.size() < strings) {
        BitString x = BitString::from_uint(rng(), static_cast<std::size_t>(uniform(1, 24)));
        if (seen.insert(x).second) outs.push_back(x);
    }
    std::vector<ProgramOutput> ev(count);
    for (std::size_t i = 0; i < count; ++i) ev[i] = {programs[i], outs[static_cast<std::size_t>(uniform(0, strings - 1))]};
    for (std::size_t i = count; i > 1; --i) std::swap(ev[i - 1], ev[static_cast<std::size_t>(uniform(0, i - 1))]);
    return ev;
}

// ---------------------------------------------------------------------------
// Semimeasure to programs
// ---------------------------------------------------------------------------

struct SemimeasureIncrement {
    BitString x;
    DyadicRational delta;
};

struct Interval {
    DyadicRational lower;
    DyadicRational upper;
};

struct SemimeasureResult {
    std::map<BitString, DyadicRational> mu;
    std::map<BitString, std::vector<Interval>> intervals;  // merged, left to right
    std::map<BitString, std::vector<BitString>> programs;  // cylinder bases
    DyadicRational total;
};

// Greedy maximal aligned cylinders covering [lower, upper) exactly.
inline std::vector<BitString> cover_by_cylinders(const DyadicRational& lower, const DyadicRational& upper) {
    std::uint32_t e = std::max(lower.exponent(), upper.exponent());
    Natural a = lower.scaled_floor(e), b = upper.scaled_floor(e);
    std::vector<BitString> out;
    while (a < b) {
        std::uint32_t j = 0;  // cylinder width 2^j in units of 2^-e
        while (j < e && ((a >> j) & 1) == 0 && a + (Natural(1) << (j + 1)) <= b) ++j;
        Natural base = a >> j;
        BitString s;
        for (std::uint32_t i = e - j; i-- > 0;) s.push_back(boost::multiprecision::bit_test(base, i));
        out.push_back(std::move(s));
        a += Natural(1) << j;
    }
    return out;
}

// Seeded dyadic increments whose total stays <= 1.
inline std::vector<SemimeasureIncrement> synthetic_increments(std::size_t count, std::size_t strings, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SemimeasureIncrement> out;
    DyadicRational total;
    for (std::size_t t = 0; t < count; ++t) {
        auto e = static_cast<std::uint32_t>(2 + rng() % 12);
        DyadicRational d(Natural(1 + rng() % 7), e);
        if (total + d > DyadicRational::one()) continue;
        total += d;
        out.push_back({u64_to_string(1 + rng() % strings), d});
    }
    return out;
}

inline SemimeasureResult semimeasure_to_programs(const std::vector<SemimeasureIncrement>& increments) {
    SemimeasureResult r;
    std::map<BitString, std::vector<Interval>> raw;
    for (std::size_t t = 0; t < increments.size(); ++t) {
        const auto& inc = increments[t];
        if (inc.delta.is_zero()) throw DomainError("increment " + std::to_string(t) + " is zero");
        DyadicRational next = r.total + inc.delta;
        if (next > DyadicRational::one())
            throw MeasureError("increment " + std::to_string(t) + " for " + inc.x.literal() + " takes the total to " +
                               next.to_binary_string() + " > 1");
        raw[inc.x].push_back({r.total, next});
        r.mu[inc.x] += inc.delta;
        r.total = std::move(next);
    }
    for (auto& [x, ivs] : raw) {
        std::vector<Interval> merged;
        for (const auto& iv : ivs) {
            if (!merged.empty() && merged.back().upper == iv.lower) merged.back().upper = iv.upper;
            else merged.push_back(iv);
        }
        auto& progs = r.programs[x];
        for (const auto& iv : merged) {
            auto c = cover_by_cylinders(iv.lower, iv.upper);
            progs.insert(progs.end(), c.begin(), c.end());
        }
        r.intervals[x] = std::move(merged);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Domination probe
// ---------------------------------------------------------------------------

struct DominationRow {
    BitString x;
    DyadicRational lifted;  // sum over q of 2^-|lift q|
    DyadicRational scaled;  // 2^-|lift| * sum over q of 2^-|q|
    bool equal = false;
};

struct DominationReport {
    BitString lift;
    std::vector<DominationRow> rows;
    bool all_equal = true;
};

inline DominationReport domination_probe(const BitString& lift, const std::vector<ProgramOutput>& events) {
    std::map<BitString, DyadicRational> lifted, plain;
    for (const auto& ev : events) {
        BitString lq = lift + ev.p;
        lifted[ev.x] += DyadicRational::pow2_neg(static_cast<std::uint32_t>(lq.size()));
        plain[ev.x] += DyadicRational::pow2_neg(static_cast<std::uint32_t>(ev.p.size()));
    }
    DominationReport rep;
    rep.lift = lift;
    DyadicRational factor = DyadicRational::pow2_neg(static_cast<std::uint32_t>(lift.size()));
    for (const auto& [x, l] : lifted) {
        DominationRow row{x, l, factor * plain[x], false};
        row.equal = row.lifted == row.scaled;
        rep.all_equal = rep.all_equal && row.equal;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace ait
