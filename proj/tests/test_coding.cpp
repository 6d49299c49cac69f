#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "ait/coding.hpp"

using namespace ait;
using boost::multiprecision::cpp_rational;

namespace {

std::vector<ProgramOutput> figure_stream() {
    return {{BitString("1100"), BitString("01")},
            {BitString("00110"), BitString("11011")},
            {BitString("000"), BitString("1")},
            {BitString("011101"), BitString("11011")},
            {BitString("111"), BitString("11011")}};
}

bool prefix_free(std::vector<BitString> words) {
    std::sort(words.begin(), words.end(), &BitString::lex_less);
    for (std::size_t i = 1; i < words.size(); ++i)
        if (words[i - 1].is_prefix_of(words[i])) return false;
    return true;
}

cpp_rational rat(const DyadicRational& d) { return cpp_rational(d.numerator(), Natural(1) << d.exponent()); }

}  // namespace

TEST(Allocator, FigureReplay) {
    auto a = allocate_stream(figure_stream());
    const auto& log = a.log();
    ASSERT_EQ(log.size(), 5u);
    const char* s[] = {"0.0001", "0.00001", "0.001", "0.000011", "0.001011"};
    const char* addr[] = {"00000", "000010", "0001", nullptr, "0010"};
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(log[i].s.to_binary_string(), s[i]) << i;
        if (addr[i]) {
            ASSERT_TRUE(log[i].a) << i;
            EXPECT_EQ(*log[i].a, BitString(addr[i])) << i;
        } else {
            EXPECT_FALSE(log[i].a) << i;
        }
    }
}

TEST(Allocator, SingleEvent) {
    auto a = allocate_stream({{BitString("1"), BitString("0")}});
    EXPECT_EQ(a.log()[0].s.to_binary_string(), "0.1");
    EXPECT_EQ(*a.log()[0].a, BitString("00"));
    for (std::uint32_t k = 1; k <= 12; ++k) {
        auto b = allocate_stream({{BitString::repeat(false, k), BitString("1")}});
        EXPECT_EQ(b.log()[0].a->size(), k + 1);
    }
}

TEST(Allocator, DecodeAddress) {
    auto ev = figure_stream();
    EXPECT_EQ(decode_address(BitString("0010"), ev), BitString("11011"));
    EXPECT_EQ(decode_address(BitString("0001"), ev), BitString("1"));
    EXPECT_EQ(decode_address(BitString("00000"), ev), BitString("01"));
    EXPECT_EQ(decode_address(BitString("000010"), ev), BitString("11011"));
    EXPECT_THROW(decode_address(BitString("1"), ev), LookupError);
    EXPECT_THROW(decode_address(BitString("001"), ev), LookupError);
}

TEST(Allocator, CodeLengthReport) {
    auto rows = code_length_report(figure_stream());
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) {
        if (r.x == BitString("11011")) {
            EXPECT_EQ(r.final_depth, 4u);
            EXPECT_EQ(r.ceil_neg_log, 3u);
            EXPECT_EQ(r.gap, 1u);
            EXPECT_EQ(r.nodes, 2u);
        }
        EXPECT_EQ(r.gap, 1u);  // every final S here triggered
    }
}

// After S_11011 = 0.001011 its leading one cannot move without 2^-3 more.
TEST(Allocator, StabilizedLeadingOne) {
    auto ev = figure_stream();
    for (int len : {7, 8, 9, 10}) ev.push_back({BitString::repeat(true, static_cast<std::size_t>(len)), BitString("11011")});
    auto a = allocate_stream(ev);
    for (std::size_t i = 5; i < a.log().size(); ++i) EXPECT_FALSE(a.log()[i].a);
}

TEST(Allocator, SyntheticStreamInvariants) {
    auto ev = synthetic_stream(20000, 300, 77);
    // Oracle totals computed with plain rationals.
    std::map<BitString, cpp_rational> expect;
    for (const auto& e : ev) expect[e.x] += cpp_rational(1, Natural(1) << e.p.size());

    Allocator a;
    std::map<BitString, std::uint32_t> last_depth;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const auto& q = a.feed(ev[i]);
        if (q.a) {
            ASSERT_EQ(q.a->size(), leading_one_position(q.s) + 1);
            auto it = last_depth.find(q.x);
            if (it != last_depth.end()) {
                ASSERT_LT(q.a->size(), it->second);
            }
            last_depth[q.x] = static_cast<std::uint32_t>(q.a->size());
        }
        if (i % 2000 == 0) {
            ASSERT_LT(a.tree().mass(), DyadicRational::one());
        }
    }
    ASSERT_LT(a.tree().mass(), DyadicRational::one());
    for (const auto& [x, s] : a.totals()) ASSERT_EQ(rat(s), expect[x]);
}

TEST(Allocator, CodeIsPrefixFreeAndConsistent) {
    auto ev = synthetic_stream(3000, 50, 5);
    auto a = allocate_stream(ev);
    std::vector<BitString> nodes;
    for (const auto& [node, x] : a.code()) nodes.push_back(node);
    EXPECT_TRUE(prefix_free(nodes));
    EXPECT_EQ(nodes, a.tree().allocated());
    for (std::size_t i = 0; i < nodes.size(); i += 97) EXPECT_EQ(decode_address(nodes[i], ev), a.code().at(nodes[i]));
    EXPECT_EQ(allocate_stream(ev).log(), a.log());
}

TEST(Semimeasure, Examples) {
    auto half = DyadicRational::parse("1/2"), quarter = DyadicRational::parse("1/4");
    BitString x("0"), y("1");
    auto a = semimeasure_to_programs({{x, half}});
    EXPECT_EQ(a.programs[x], std::vector<BitString>{BitString("0")});

    auto b = semimeasure_to_programs({{x, quarter}, {y, quarter}, {x, quarter}});
    EXPECT_EQ(b.programs[x], (std::vector<BitString>{BitString("00"), BitString("10")}));
    EXPECT_EQ(b.programs[y], std::vector<BitString>{BitString("01")});

    auto c = semimeasure_to_programs({{x, DyadicRational::parse("3/8")}});
    EXPECT_EQ(c.programs[x], (std::vector<BitString>{BitString("00"), BitString("010")}));

    auto whole = semimeasure_to_programs({{x, DyadicRational::one()}});
    EXPECT_EQ(whole.programs[x], std::vector<BitString>{BitString()});
}

TEST(Semimeasure, Errors) {
    BitString x("0");
    try {
        semimeasure_to_programs({{x, DyadicRational::parse("1/2")}, {x, DyadicRational::parse("1/4")}, {x, DyadicRational::parse("1/2")}});
        FAIL();
    } catch (const MeasureError& e) {
        EXPECT_NE(std::string(e.what()).find("increment 2"), std::string::npos);
    }
    EXPECT_THROW(semimeasure_to_programs({{x, DyadicRational()}}), DomainError);
    EXPECT_THROW(DyadicRational::parse("1/3"), DomainError);
}

TEST(Semimeasure, SeededStreams) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto inc = synthetic_increments(60, 12, seed);
        auto r = semimeasure_to_programs(inc);
        std::map<BitString, cpp_rational> mu;
        for (const auto& i : inc) mu[i.x] += rat(i.delta);
        std::vector<BitString> all;
        for (const auto& [x, progs] : r.programs) {
            cpp_rational mass = 0;
            for (const auto& p : progs) {
                mass += cpp_rational(1, Natural(1) << p.size());
                all.push_back(p);
            }
            ASSERT_EQ(mass, mu[x]) << seed;
            ASSERT_EQ(rat(r.mu.at(x)), mu[x]);
        }
        ASSERT_TRUE(prefix_free(all)) << seed;
    }
}

// Maximality: no two cylinders of one interval could merge into their parent.
TEST(Semimeasure, CylindersAreMaximal) {
    for (std::uint64_t lo = 0; lo < 64; ++lo)
        for (std::uint64_t hi = lo + 1; hi <= 64; ++hi) {
            auto c = cover_by_cylinders(DyadicRational(Natural(lo), 6), DyadicRational(Natural(hi), 6));
            DyadicRational sum;
            for (std::size_t i = 0; i < c.size(); ++i) {
                sum += DyadicRational::pow2_neg(static_cast<std::uint32_t>(c[i].size()));
                if (i > 0 && c[i].size() == c[i - 1].size() && !c[i].empty()) {
                    BitString p = c[i - 1].substr(0, c[i - 1].size() - 1);
                    ASSERT_FALSE(c[i - 1] == p + BitString("0") && c[i] == p + BitString("1")) << lo << " " << hi;
                }
            }
            ASSERT_EQ(sum, DyadicRational(Natural(hi - lo), 6));
        }
}

TEST(Domination, Identities) {
    auto none = domination_probe(BitString(), figure_stream());
    EXPECT_TRUE(none.all_equal);
    auto three = domination_probe(BitString("101"), {{BitString("01"), BitString("0")}});
    ASSERT_EQ(three.rows.size(), 1u);
    EXPECT_EQ(three.rows[0].lifted, DyadicRational::pow2_neg(5));
    EXPECT_TRUE(three.all_equal);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto ev = synthetic_stream(500, 20, seed, 10, 20);
        EXPECT_TRUE(domination_probe(u64_to_string(seed * 13), ev).all_equal);
    }
}
