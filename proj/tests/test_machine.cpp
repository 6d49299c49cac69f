#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ait/machine.hpp"

using namespace ait;

namespace {

BitString bs(const char* s) { return BitString(s); }

// Plain reference simulator: map-backed tape, no loop detection.
struct RefResult {
    bool halted;
    BitString output;
    std::uint64_t steps;
};

RefResult reference_run(const std::vector<Rule>& rules, const BitString& input, std::uint64_t budget) {
    std::map<std::int64_t, int> tape;
    for (std::size_t i = 0; i < input.size(); ++i) tape[static_cast<std::int64_t>(i)] = input[i];
    auto get = [&](std::int64_t p) {
        auto it = tape.find(p);
        return it == tape.end() ? 2 : it->second;
    };
    std::uint32_t q = rules.empty() ? 0 : rules[0].state;
    std::int64_t head = 0;
    for (std::uint64_t t = 0;; ++t) {
        const Rule* hit = nullptr;
        for (const auto& r : rules)
            if (r.state == q && static_cast<int>(r.scanned) == get(head)) hit = &r;
        if (!hit) {
            BitString out;
            if (get(head) != 2) {
                std::int64_t lo = head;
                while (get(lo - 1) != 2) --lo;
                for (std::int64_t p = lo; get(p) != 2; ++p) out.push_back(get(p) == 1);
            }
            return {true, out, t};
        }
        if (t == budget) return {false, {}, t};
        switch (hit->action) {
            case Action::Write0: tape[head] = 0; break;
            case Action::Write1: tape[head] = 1; break;
            case Action::WriteBlank: tape.erase(head); break;
            case Action::Left: --head; break;
            case Action::Right: ++head; break;
        }
        q = hit->next;
    }
}

MachineDescription random_machine(std::mt19937_64& rng, std::uint32_t max_states, std::size_t max_rules) {
    MachineDescription m;
    std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % max_states);
    std::set<std::pair<std::uint32_t, int>> used;
    std::size_t r = 1 + rng() % max_rules;
    for (std::size_t i = 0; i < r * 3 && m.rules.size() < r; ++i) {
        std::uint32_t q = m.rules.empty() ? 0 : static_cast<std::uint32_t>(rng() % n);
        int s = static_cast<int>(rng() % 3);
        if (!used.insert({q, s}).second) continue;
        m.rules.push_back({q, static_cast<Symbol>(s), static_cast<Action>(rng() % 5), static_cast<std::uint32_t>(rng() % n)});
    }
    return m;
}

BitString random_bits(std::mt19937_64& rng, std::size_t max_len) {
    BitString x;
    std::size_t n = rng() % (max_len + 1);
    for (std::size_t i = 0; i < n; ++i) x.push_back(rng() & 1);
    return x;
}

// --- structural enumeration oracle -------------------------------------------------
// Encodings as (length, value) pairs; shortlex order is the pair order.

struct Enc {
    std::uint32_t len;
    std::uint64_t value;
    auto operator<=>(const Enc&) const = default;
};

void push_bits(Enc& e, std::uint64_t v, std::uint32_t w) {
    e.value = (e.value << w) | v;
    e.len += w;
}

void push_bar_of_number(Enc& e, std::uint64_t m) {
    std::uint32_t k = 0;
    while ((m >> (k + 1)) != 0) ++k;  // |str(m)|
    push_bits(e, (std::uint64_t{1} << k) - 1, k);
    push_bits(e, 0, 1);
    push_bits(e, m & ((std::uint64_t{1} << k) - 1), k);
}

void generate(std::uint32_t s, std::uint32_t r, std::vector<std::array<std::uint32_t, 4>>& cur, std::uint32_t k,
              std::set<std::pair<std::uint32_t, std::uint32_t>>& used, std::vector<Enc>& out) {
    if (cur.size() == r) {
        std::uint32_t n = k;
        if (ceil_log2(n + 5) != s) return;
        Enc e{0, 0};
        push_bar_of_number(e, s);
        push_bar_of_number(e, r);
        for (auto& f : cur) {
            push_bits(e, f[0], s);
            push_bits(e, n + f[1], s);
            push_bits(e, n + f[2], s);
            push_bits(e, f[3], s);
        }
        out.push_back(e);
        return;
    }
    std::uint32_t max_n = (std::uint32_t{1} << s) - 5;
    for (std::uint32_t q = 0; q <= k && q < max_n; ++q) {
        std::uint32_t k1 = q == k ? k + 1 : k;
        for (std::uint32_t sym = 0; sym < 3; ++sym) {
            if (used.count({q, sym})) continue;
            used.insert({q, sym});
            for (std::uint32_t a = 0; a < 5; ++a)
                for (std::uint32_t q2 = 0; q2 <= k1 && q2 < max_n; ++q2) {
                    std::uint32_t k2 = q2 == k1 ? k1 + 1 : k1;
                    cur.push_back({q, sym, a, q2});
                    generate(s, r, cur, k2, used, out);
                    cur.pop_back();
                }
            used.erase({q, sym});
        }
    }
}

const std::vector<Enc>& oracle_encodings() {
    static std::vector<Enc> all = [] {
        std::vector<Enc> v;
        std::vector<std::array<std::uint32_t, 4>> cur;
        std::set<std::pair<std::uint32_t, std::uint32_t>> used;
        for (auto [s, r] : {std::pair{3u, 1u}, {3u, 2u}, {3u, 3u}, {4u, 1u}, {4u, 2u}}) generate(s, r, cur, 0, used, v);
        std::sort(v.begin(), v.end());
        return v;
    }();
    return all;
}

BitString to_bits(const Enc& e) { return BitString::from_uint(e.value, e.len); }

}  // namespace

TEST(Run, EmptyMachineHaltsOnInputBlock) {
    auto r = run(MachineDescription{}, bs("101"), 100);
    EXPECT_EQ(r.status, RunStatus::Halted);
    EXPECT_EQ(r.output, bs("101"));
    EXPECT_EQ(r.steps, 0u);
    EXPECT_EQ(run(MachineDescription{}, bs("101"), 0).status, RunStatus::Halted);
}

TEST(Run, RewriteThenHalt) {
    auto m = parse_machine_text("q0 1 0 q0\n");
    auto r = run(m, bs("1"), 100);
    EXPECT_EQ(r.status, RunStatus::Halted);
    EXPECT_EQ(r.output, bs("0"));
    EXPECT_EQ(r.steps, 1u);
    EXPECT_EQ(run(m, bs("1"), 0).status, RunStatus::BudgetExceeded);
}

TEST(Run, DriftLoopIsProven) {
    auto m = parse_machine_text("q0 B R q0\n");
    auto r = run(m, BitString(), 1000);
    EXPECT_EQ(r.status, RunStatus::ProvenLooping);
    EXPECT_EQ(r.loop.period, 1u);
    EXPECT_EQ(r.loop.drift, 1);
}

TEST(Run, StationaryLoopIsProven) {
    auto m = parse_machine_text("a 0 1 b\nb 1 0 a\n");
    auto r = run(m, bs("0"), 1000);
    EXPECT_EQ(r.status, RunStatus::ProvenLooping);
    EXPECT_EQ(r.loop.drift, 0);
    EXPECT_EQ(r.loop.period % 2, 0u);
}

// A binary counter never repeats a configuration: budget exceeded, never proven.
TEST(Run, CounterIsNotClaimedLooping) {
    auto m = parse_machine_text(
        "inc 1 0 inc2\n"
        "inc2 0 L inc\n"
        "inc 0 1 back\n"
        "inc B 1 back\n"
        "back 1 R back\n"
        "back 0 R back\n"
        "back B L inc\n");
    auto r = run(m, bs("0"), 5000);
    EXPECT_EQ(r.status, RunStatus::BudgetExceeded);
}

TEST(Run, OutputIsBlockUnderHead) {
    // move right off the input onto a blank and halt: output epsilon
    auto r = run(parse_machine_text("q0 0 R q0\nq0 1 R q0\n"), bs("0110"), 100);
    EXPECT_EQ(r.status, RunStatus::Halted);
    EXPECT_TRUE(r.output.empty());
    // step back left: the whole block
    auto r2 = run(parse_machine_text("q0 0 R q0\nq0 1 R q0\nq0 B L q1\n"), bs("0110"), 100);
    EXPECT_EQ(r2.output, bs("0110"));
}

TEST(Run, MatchesReferenceSimulator) {
    std::mt19937_64 rng(31);
    int halted = 0, looping = 0;
    for (int t = 0; t < 3000; ++t) {
        auto m = random_machine(rng, 4, 8).canonical();
        BitString x = random_bits(rng, 6);
        auto out = run(m, x, 400);
        auto ref = reference_run(m.rules, x, out.status == RunStatus::ProvenLooping ? 4000 : 400);
        switch (out.status) {
            case RunStatus::Halted:
                ++halted;
                ASSERT_TRUE(ref.halted);
                ASSERT_EQ(ref.output, out.output);
                ASSERT_EQ(ref.steps, out.steps);
                break;
            case RunStatus::ProvenLooping: ++looping; ASSERT_FALSE(ref.halted); break;
            case RunStatus::BudgetExceeded: ASSERT_FALSE(ref.halted); break;
        }
    }
    EXPECT_GT(halted, 500);
    EXPECT_GT(looping, 100);
}

TEST(Run, BudgetMonotone) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        auto m = random_machine(rng, 3, 6);
        BitString x = random_bits(rng, 5);
        auto a = run(m, x, 50);
        auto b = run(m, x, 500);
        if (a.halted()) {
            ASSERT_EQ(a, b);
        }
        if (a.status == RunStatus::ProvenLooping) {
            ASSERT_EQ(b.status, RunStatus::ProvenLooping);
        }
        ASSERT_EQ(a, run(m, x, 50));
    }
}

TEST(Text, ParseAndPrint) {
    auto m = parse_machine_text("# comment\nstart 0 R start\nstart B 1 done\n");
    ASSERT_EQ(m.rules.size(), 2u);
    EXPECT_EQ(to_machine_text(m), "q0 0 R q0\nq0 B 1 q1\n");
    EXPECT_EQ(parse_machine_text(to_machine_text(m)), m);
    EXPECT_THROW(parse_machine_text("q0 0 R\n"), ValidationError);
    EXPECT_THROW(parse_machine_text("q0 2 R q0\n"), ValidationError);
    EXPECT_THROW(parse_machine_text("q0 0 R q0\nq0 0 L q0\n"), ValidationError);
}

TEST(Encoding, WorkedExample) {
    MachineDescription m{{{0, Symbol::Zero, Action::Right, 0}}};
    // s = ceil(log 6) = 3 -> str(3) = "1" -> bar "101"; r = 1 -> bar "0";
    // q0 = 000, '0' = n + 0 = 001, R = n + 4 = 101, q0 = 000
    EXPECT_EQ(encode_machine(m), bs("1010000001101000"));
    EXPECT_EQ(decode_machine(bs("1010000001101000")), m);
}

TEST(Encoding, Errors) {
    BitString e = encode_machine(MachineDescription{{{0, Symbol::Zero, Action::Right, 0}}});
    try {
        decode_machine(e + bs("1"));
        FAIL();
    } catch (const ValidationError& err) {
        EXPECT_NE(std::string(err.what()).find("trailing garbage"), std::string::npos);
    }
    EXPECT_THROW(decode_machine(e.substr(0, e.size() - 1)), ValidationError);
    EXPECT_THROW(encode_machine(MachineDescription{}), ValidationError);
    // state 1 used before it is introduced in first-appearance order
    std::string why;
    EXPECT_FALSE(try_decode_machine(bs("1010001001101000"), &why));
    EXPECT_NE(why.find("numbering"), std::string::npos);
    // duplicate (state, symbol)
    // header s = 3, r = 2, then (0,'0',R,0) twice
    EXPECT_FALSE(try_decode_machine(bs("101" "100" "000001101000" "000001100000"), &why));
    EXPECT_NE(why.find("determinism"), std::string::npos);
}

TEST(Encoding, RandomRoundTrip) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10000; ++t) {
        auto m = random_machine(rng, 6, 10).canonical();
        BitString e = encode_machine(m);
        ASSERT_EQ(decode_machine(e), m);
        ASSERT_EQ(encode_machine(decode_machine(e)), e);
    }
}

TEST(Enumeration, GapFreeAgainstExhaustiveScan) {
    std::vector<BitString> valid;
    for (std::size_t n = 0; n <= 20; ++n)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            BitString x = BitString::from_uint(v, n);
            if (try_decode_machine(x)) valid.push_back(x);
        }
    ASSERT_FALSE(valid.empty());
    MachineEnumerator en;
    for (std::size_t i = 0; i < valid.size(); ++i) {
        ASSERT_EQ(en.encoding_by_index(Natural(i + 1)), valid[i]);
        ASSERT_EQ(en.index_of_encoding(valid[i]), Natural(i + 1));
    }
    // the next index is longer than 20 bits
    EXPECT_GT(en.encoding_by_index(Natural(valid.size() + 1)).size(), 20u);
}

TEST(Enumeration, FirstTenThousandAgainstStructuralOracle) {
    const auto& oracle = oracle_encodings();
    ASSERT_GE(oracle.size(), 10000u);
    // the oracle covers every header up to length 42; check coverage is complete there
    ASSERT_GT(oracle[9999].len, 0u);
    ASSERT_LE(oracle[9999].len, 42u);
    MachineEnumerator en;
    for (std::size_t i = 0; i < 10000; ++i) {
        BitString want = to_bits(oracle[i]);
        ASSERT_EQ(en.encoding_by_index(Natural(i + 1)), want) << "index " << i + 1;
        ASSERT_EQ(en.index_of_encoding(want), Natural(i + 1));
        ASSERT_TRUE(try_decode_machine(want));
    }
}

TEST(Enumeration, OrderAndInverse) {
    BitString prev;
    for (int i = 1; i <= 2000; ++i) {
        auto m = machine_by_index(Natural(i));
        BitString e = encode_machine(m);
        if (i > 1) {
            ASSERT_LT(prev, e);
        }
        ASSERT_EQ(index_of_machine(m), Natural(i));
        prev = e;
    }
}

TEST(Enumeration, LargeIndices) {
    MachineEnumerator en;
    for (Natural i : {Natural(123456789), Natural(1) << 80, (Natural(1) << 120) + 7}) {
        BitString e = en.encoding_by_index(i);
        ASSERT_TRUE(try_decode_machine(e));
        ASSERT_EQ(en.index_of_encoding(e), i);
    }
}

TEST(Universal, AgreesWithDirectSimulation) {
    const auto& oracle = oracle_encodings();
    std::mt19937_64 rng(1000);
    for (int t = 0; t < 1000; ++t) {
        std::uint64_t i = 1 + rng() % 500;
        BitString x = random_bits(rng, 6);
        BitString p = pair_encode(u64_to_string(i), x);
        auto u = universal_run(p, 10000);
        auto m = decode_machine(to_bits(oracle[i - 1]));
        auto ref = reference_run(m.rules, x, 10000);
        ASSERT_EQ(u.halted(), ref.halted) << i;
        if (ref.halted) {
            ASSERT_EQ(u.output, ref.output);
            ASSERT_EQ(u.steps, ref.steps);
        }
        ASSERT_EQ(u, run(machine_by_index(Natural(i)), x, 10000));
    }
}

TEST(Universal, FirstMachineAndFormatErrors) {
    // <1, e>: i = e (number 1), j = e
    BitString p = pair_encode(BitString(), BitString());
    EXPECT_EQ(p, bs("0"));
    auto m1 = decode_machine(to_bits(oracle_encodings()[0]));
    EXPECT_EQ(universal_run(p, 1000), run(m1, BitString(), 1000));
    EXPECT_THROW(universal_run(bs("1"), 10), FormatError);
    EXPECT_THROW(universal_run(BitString(), 10), FormatError);
    EXPECT_EQ(parse_universal_program(universal_program(Natural(42), bs("01"))).index, 42);
}

TEST(SelfDelimMachine, SuccessAndFailureModes) {
    // read two bits, echo them, halt
    auto m = parse_sd_machine_text(
        "s - B READ a\n"
        "a 0 B O0 b\n"
        "a 1 B O1 b\n"
        "b 0 B READ c\n"
        "b 1 B READ c\n"
        "c 0 B O0 d\n"
        "c 1 B O1 d\n");
    auto ok = selfdelim_run(m, bs("10"), BitString(), 100);
    EXPECT_EQ(ok.status, SdStatus::Success);
    EXPECT_EQ(ok.output, bs("10"));
    EXPECT_EQ(ok.consumed, 2u);
    // halts after reading the proper prefix "10" of "101"
    EXPECT_EQ(selfdelim_run(m, bs("101"), BitString(), 100).status, SdStatus::HaltedEarly);
    EXPECT_EQ(selfdelim_run(m, bs("1"), BitString(), 100).status, SdStatus::Overshoot);
    EXPECT_EQ(selfdelim_run(m, bs("10"), BitString(), 1).status, SdStatus::BudgetExceeded);
}

TEST(SelfDelimMachine, AuxAndLoops) {
    // copy the aux tape to the output
    auto copy = parse_sd_machine_text(
        "s - 0 O0 m\n"
        "s - 1 O1 m\n"
        "m - 0 R s\n"
        "m - 1 R s\n");
    auto r = selfdelim_run(copy, BitString(), bs("0110"), 100);
    EXPECT_EQ(r.status, SdStatus::Success);
    EXPECT_EQ(r.output, bs("0110"));
    EXPECT_EQ(r.aux, bs("0110"));

    auto spin = parse_sd_machine_text("s - B O1 s\n");
    EXPECT_EQ(selfdelim_run(spin, BitString(), BitString(), 1000).status, SdStatus::ProvenLooping);
    EXPECT_THROW(parse_sd_machine_text("s x B READ s\n"), ValidationError);
}

TEST(SelfDelimMachine, SuccessSetIsPrefixFree) {
    std::mt19937_64 rng(55);
    int nonempty = 0;
    for (int t = 0; t < 200; ++t) {
        SdMachine m;
        std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 4);
        std::set<std::tuple<std::uint32_t, int, int>> used;
        for (int i = 0; i < 12; ++i) {
            SdRule r;
            r.state = m.rules.empty() ? 0 : static_cast<std::uint32_t>(rng() % n);
            r.program = static_cast<ProgramSymbol>(rng() % 3);
            r.work = static_cast<Symbol>(rng() % 3);
            // bias toward reading so programs matter
            r.action = rng() % 3 == 0 ? static_cast<SdAction>(rng() % 8) : SdAction::Read;
            r.next = static_cast<std::uint32_t>(rng() % n);
            if (used.insert({r.state, static_cast<int>(r.program), static_cast<int>(r.work)}).second) m.rules.push_back(r);
        }
        std::vector<BitString> domain;
        for (std::size_t len = 0; len <= 10; ++len)
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
                BitString p = BitString::from_uint(v, len);
                if (selfdelim_run(m, p, BitString(), 500).success()) domain.push_back(p);
            }
        if (domain.size() > 1) ++nonempty;
        for (std::size_t i = 0; i < domain.size(); ++i)
            for (std::size_t j = 0; j < domain.size(); ++j)
                if (i != j) {
                    ASSERT_FALSE(domain[i].is_prefix_of(domain[j]));
                }
    }
    EXPECT_GT(nonempty, 10);
}
