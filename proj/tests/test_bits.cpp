#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"
#include "ait/prefix_tree.hpp"

using namespace ait;

namespace {

BitString bs(const char* s) { return BitString(s); }

// All strings of length n in dictionary order.
std::vector<BitString> all_of_length(std::size_t n) {
    std::vector<BitString> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) out.push_back(BitString::from_uint(v, n));
    return out;
}

}  // namespace

TEST(Bijection, KnownValues) {
    EXPECT_EQ(string_to_number(BitString()), 1);
    EXPECT_EQ(string_to_number(bs("00")), 4);
    EXPECT_EQ(string_to_number(bs("11")), 7);
    EXPECT_EQ(number_to_string(6), bs("10"));
    EXPECT_EQ(number_to_string(1), BitString());
    EXPECT_EQ(number_to_string(8), bs("000"));
    EXPECT_THROW(number_to_string(0), DomainError);
    EXPECT_THROW(u64_to_string(0), DomainError);
}

TEST(Bijection, EpsilonLiteral) {
    EXPECT_TRUE(bs("e").empty());
    EXPECT_EQ(BitString().literal(), "e");
    EXPECT_THROW(bs("012"), DomainError);
}

// Counting oracle: walk length-lexicographic order and number the strings 1, 2, 3, ...
TEST(Bijection, ExhaustiveRoundTripToLength20) {
    std::uint64_t counter = 1;
    for (std::size_t n = 0; n <= 20; ++n) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v, ++counter) {
            BitString x = BitString::from_uint(v, n);
            ASSERT_EQ(string_to_u64(x), counter);
            ASSERT_EQ(u64_to_string(counter), x);
            if (n <= 12) {
                ASSERT_EQ(string_to_number(x), counter);
                ASSERT_EQ(number_to_string(Natural(counter)), x);
            }
        }
    }
}

TEST(Bijection, LengthIsFloorLog2) {
    for (std::uint64_t n = 1; n <= (std::uint64_t{1} << 20); ++n) {
        std::size_t floor_log = 0;
        while ((n >> (floor_log + 1)) != 0) ++floor_log;
        ASSERT_EQ(u64_to_string(n).size(), floor_log);
    }
}

TEST(Bijection, OrderMatchesNumbers) {
    std::vector<BitString> strings;
    for (std::size_t n = 0; n <= 6; ++n)
        for (auto& s : all_of_length(n)) strings.push_back(s);
    for (std::size_t i = 1; i < strings.size(); ++i) ASSERT_LT(strings[i - 1], strings[i]);
}

TEST(Cylinder, Examples) {
    auto c1 = cylinder_of(bs("1"));
    EXPECT_EQ(c1.lower, DyadicRational::parse("1/2"));
    EXPECT_EQ(c1.upper(), DyadicRational::one());
    auto c01 = cylinder_of(bs("01"));
    EXPECT_EQ(c01.lower, DyadicRational::parse("1/4"));
    EXPECT_EQ(c01.upper(), DyadicRational::parse("1/2"));
    auto ce = cylinder_of(BitString());
    EXPECT_EQ(ce.lower, DyadicRational::zero());
    EXPECT_EQ(ce.width, DyadicRational::one());
}

TEST(Cylinder, DisjointOrNestedToLength8) {
    std::vector<Cylinder> cyl;
    for (std::size_t n = 0; n <= 8; ++n)
        for (auto& s : all_of_length(n)) cyl.push_back(cylinder_of(s));
    for (const auto& a : cyl) {
        for (const auto& b : cyl) {
            bool nested = a.contains(b) || b.contains(a);
            ASSERT_NE(nested, a.disjoint(b));
            bool prefix_related = a.base.is_prefix_of(b.base) || b.base.is_prefix_of(a.base);
            ASSERT_EQ(nested, prefix_related);
        }
    }
}

TEST(Dyadic, ParseAndPrint) {
    EXPECT_EQ(DyadicRational::parse("0.001011").to_binary_string(), "0.001011");
    EXPECT_EQ(DyadicRational::parse("1").to_binary_string(), "1");
    EXPECT_EQ(DyadicRational::parse("0.1000").to_binary_string(), "0.1");
    EXPECT_EQ(DyadicRational::parse("3/8"), DyadicRational::parse("0.011"));
    EXPECT_EQ(DyadicRational::parse("3/8").to_fraction_string(), "3/8");
    EXPECT_THROW(DyadicRational::parse("1/3"), DomainError);
    EXPECT_THROW(DyadicRational::parse("0.2"), DomainError);
}

TEST(Dyadic, NormalizedEquality) {
    DyadicRational a(Natural(4), 3);
    EXPECT_EQ(a.numerator(), 1);
    EXPECT_EQ(a.exponent(), 1u);
    EXPECT_EQ(a, DyadicRational::pow2_neg(1));
    EXPECT_EQ(DyadicRational(Natural(0), 9).exponent(), 0u);
}

TEST(Dyadic, ExactArithmetic) {
    auto s = DyadicRational::pow2_neg(1) + DyadicRational::pow2_neg(2) + DyadicRational::pow2_neg(3) +
             DyadicRational::pow2_neg(3);
    EXPECT_EQ(s, DyadicRational::one());
    EXPECT_EQ(s - DyadicRational::pow2_neg(1), DyadicRational::pow2_neg(1));
    EXPECT_THROW(DyadicRational::pow2_neg(2) - DyadicRational::pow2_neg(1), DomainError);
    // far below double precision
    auto tiny = DyadicRational::pow2_neg(200);
    EXPECT_GT(DyadicRational::one() - tiny, DyadicRational::one() - DyadicRational::pow2_neg(199));
}

TEST(Dyadic, FractionPrefix) {
    auto a = DyadicRational::parse("0.001011");
    EXPECT_EQ(a.fraction_prefix(4), bs("0010"));
    EXPECT_EQ(a.fraction_prefix(8), bs("00101100"));
    EXPECT_THROW(DyadicRational::one().fraction_prefix(2), DomainError);
}

TEST(LeadingOne, Examples) {
    EXPECT_EQ(leading_one_position(DyadicRational::parse("0.001")), 3u);
    EXPECT_EQ(leading_one_position(DyadicRational::parse("0.00001")), 5u);
    EXPECT_EQ(leading_one_position(DyadicRational::parse("0.000011")), 5u);
    EXPECT_EQ(leading_one_position(DyadicRational::one()), 0u);
    EXPECT_THROW(leading_one_position(DyadicRational::zero()), DomainError);
    EXPECT_THROW(leading_one_position(DyadicRational::parse("1.1")), DomainError);
}

TEST(LeadingOne, PowersOfTwo) {
    for (std::uint32_t k = 1; k <= 64; ++k) ASSERT_EQ(leading_one_position(DyadicRational::pow2_neg(k)), k);
}

// alpha in [2^-i, 2^-i+1), checked by exact comparison on random values.
TEST(LeadingOne, IntervalLaw) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        std::uint32_t e = 1 + static_cast<std::uint32_t>(rng() % 70);
        Natural num = Natural(rng()) % (Natural(1) << e);
        if (num == 0) continue;
        DyadicRational a(num, e);
        std::uint32_t i = leading_one_position(a);
        ASSERT_LE(DyadicRational::pow2_neg(i), a);
        ASSERT_LT(a, DyadicRational(Natural(2), i));
    }
}

TEST(PrefixTree, Examples) {
    PrefixTree t;
    EXPECT_EQ(t.allocate_first_available(1), bs("0"));
    EXPECT_EQ(t.allocate_first_available(2), bs("10"));

    PrefixTree u;
    u.allocate(bs("00000"));
    u.allocate(bs("000010"));
    EXPECT_EQ(u.allocate_first_available(4), bs("0001"));
}

TEST(PrefixTree, Exhaustion) {
    PrefixTree t;
    t.allocate_first_available(1);
    t.allocate_first_available(1);
    EXPECT_THROW(t.allocate_first_available(1), CapacityError);
    EXPECT_THROW(t.allocate_first_available(5), CapacityError);
    EXPECT_EQ(t.mass(), DyadicRational::one());
    EXPECT_THROW(t.allocate(bs("01")), CapacityError);
}

TEST(PrefixTree, DepthZeroTakesWholeTree) {
    PrefixTree t;
    EXPECT_EQ(t.allocate_first_available(0), BitString());
    EXPECT_THROW(t.allocate_first_available(3), CapacityError);
}

// Oracle: scan every d-bit string in dictionary order against the flat allocated set.
TEST(PrefixTree, MatchesBruteForceOnRandomSequences) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 200; ++round) {
        PrefixTree t;
        std::vector<BitString> flat;
        for (int step = 0; step < 40; ++step) {
            std::uint32_t d = 1 + static_cast<std::uint32_t>(rng() % 9);
            std::optional<BitString> expect;
            for (auto& cand : all_of_length(d)) {
                bool ok = true;
                for (auto& a : flat)
                    if (a.is_prefix_of(cand) || cand.is_prefix_of(a)) ok = false;
                if (ok) {
                    expect = cand;
                    break;
                }
            }
            if (!expect) {
                ASSERT_THROW(t.allocate_first_available(d), CapacityError);
                continue;
            }
            ASSERT_EQ(t.allocate_first_available(d), *expect);
            flat.push_back(*expect);

            DyadicRational mass;
            for (auto& a : flat) mass += DyadicRational::pow2_neg(static_cast<std::uint32_t>(a.size()));
            ASSERT_EQ(t.mass(), mass);
            ASSERT_LE(t.mass(), DyadicRational::one());
        }
        auto alloc = t.allocated();
        std::sort(flat.begin(), flat.end(), BitString::lex_less);
        ASSERT_EQ(alloc, flat);
        for (std::size_t i = 0; i < alloc.size(); ++i)
            for (std::size_t j = 0; j < alloc.size(); ++j)
                if (i != j) {
                    ASSERT_FALSE(alloc[i].is_prefix_of(alloc[j]));
                }
    }
}

TEST(PrefixTree, DeepAllocations) {
    PrefixTree t;
    for (std::uint32_t d = 1; d <= 64; ++d) EXPECT_EQ(t.allocate_first_available(d).size(), d);
    EXPECT_LT(t.mass(), DyadicRational::one());
    EXPECT_EQ(t.mass(), DyadicRational::one() - DyadicRational::pow2_neg(64));
}
