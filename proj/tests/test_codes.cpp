#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ait/codes.hpp"

using namespace ait;

namespace {

BitString bs(const char* s) { return BitString(s); }

Code make(std::initializer_list<std::pair<const char*, const char*>> rows) {
    Code c;
    for (auto& [s, w] : rows) c.table.emplace_back(s, BitString(w));
    return c;
}

const Code E1 = make({{"A", "10"}, {"B", "10"}, {"C", "11"}, {"D", "0"}});
const Code E2 = make({{"A", "10"}, {"B", "110"}, {"C", "1"}, {"D", "0"}});
const Code E3 = make({{"A", "0"}, {"B", "01"}, {"C", "011"}, {"D", "111"}});
const Code E4 = make({{"A", "0"}, {"B", "10"}, {"C", "110"}, {"D", "111"}});

std::vector<BitString> all_of_length(std::size_t n) {
    std::vector<BitString> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) out.push_back(BitString::from_uint(v, n));
    return out;
}

// Brute-force UD oracle: no stream up to `max_len` bits has two parses.
bool no_ambiguity_up_to(const Code& c, std::size_t max_len) {
    for (std::size_t n = 0; n <= max_len; ++n)
        for (auto& s : all_of_length(n))
            if (count_parses(c, s) > 1) return false;
    return true;
}

void check_witness(const Code& c, const AmbiguityWitness& w) {
    ASSERT_NE(w.first_parse, w.second_parse);
    EXPECT_EQ(c.encode(w.first_parse), w.stream);
    EXPECT_EQ(c.encode(w.second_parse), w.stream);
}

}  // namespace

TEST(Classify, ExampleTable) {
    EXPECT_EQ(classify(E1).code_class, CodeClass::Singular);
    EXPECT_FALSE(classify(E1).witness.has_value());

    auto r2 = classify(E2);
    ASSERT_EQ(r2.code_class, CodeClass::NonsingularNotUD);
    ASSERT_TRUE(r2.witness.has_value());
    check_witness(E2, *r2.witness);

    auto r3 = classify(E3);
    EXPECT_EQ(r3.code_class, CodeClass::UniquelyDecodableNotPrefix);
    EXPECT_FALSE(r3.witness.has_value());

    EXPECT_EQ(classify(E4).code_class, CodeClass::Prefix);
}

// "110" reads as B, CA or CCD; the search returns a shorter stream, "10" = A = CD.
TEST(Classify, E2Ambiguities) {
    EXPECT_EQ(count_parses(E2, bs("110")), 3);
    auto w = *classify(E2).witness;
    EXPECT_EQ(w.stream, bs("10"));
    for (std::size_t n = 0; n < w.stream.size(); ++n)
        for (auto& s : all_of_length(n)) EXPECT_LE(count_parses(E2, s), 1) << s;
}

TEST(Classify, EmptyCodeIsDomainError) { EXPECT_THROW(classify(Code{}), DomainError); }

TEST(Classify, EmptyCodewordIsNotUD) {
    auto r = classify(make({{"A", "e"}, {"B", "1"}}));
    EXPECT_EQ(r.code_class, CodeClass::NonsingularNotUD);
    ASSERT_TRUE(r.witness.has_value());
    check_witness(make({{"A", "e"}, {"B", "1"}}), *r.witness);
}

TEST(Classify, StableUnderSymbolPermutation) {
    std::mt19937_64 rng(11);
    for (const Code* c : {&E1, &E2, &E3, &E4}) {
        Code p = *c;
        for (int i = 0; i < 10; ++i) {
            std::shuffle(p.table.begin(), p.table.end(), rng);
            auto r = classify(p);
            EXPECT_EQ(r.code_class, classify(*c).code_class);
            if (r.witness) {
                EXPECT_EQ(r.witness->stream.size(), classify(*c).witness->stream.size());
                check_witness(p, *r.witness);
            }
        }
    }
}

// Random small codes: classification must agree with a bounded brute-force
// parse count, witnesses must be shortest, and UD codes must obey Kraft.
TEST(Classify, RandomCorpusAgainstBruteForce) {
    std::mt19937_64 rng(99);
    int ud_seen = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        Code c;
        std::size_t n = 2 + rng() % 4;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t len = 1 + rng() % 4;
            c.table.emplace_back(std::string(1, static_cast<char>('A' + i)), BitString::from_uint(rng(), len));
        }
        auto r = classify(c);
        std::vector<std::uint32_t> lengths;
        for (auto& w : c.codewords()) lengths.push_back(static_cast<std::uint32_t>(w.size()));
        switch (r.code_class) {
            case CodeClass::Singular: break;
            case CodeClass::Prefix:
            case CodeClass::UniquelyDecodableNotPrefix:
                ++ud_seen;
                ASSERT_TRUE(kraft_sum(lengths).satisfiable);
                ASSERT_TRUE(no_ambiguity_up_to(c, 12));
                break;
            case CodeClass::NonsingularNotUD: {
                ASSERT_TRUE(r.witness);
                check_witness(c, *r.witness);
                for (std::size_t m = 0; m < r.witness->stream.size(); ++m)
                    for (auto& s : all_of_length(m)) ASSERT_LE(count_parses(c, s), 1);
                break;
            }
        }
        ASSERT_EQ(r.code_class == CodeClass::Prefix, is_prefix_free(c.codewords()) && r.code_class != CodeClass::Singular);
    }
    EXPECT_GT(ud_seen, 100);
}

TEST(Kraft, Sums) {
    auto a = kraft_sum({1, 2, 3, 3});
    EXPECT_EQ(a.sum, DyadicRational::one());
    EXPECT_TRUE(a.satisfiable);
    auto b = kraft_sum({});
    EXPECT_EQ(b.sum, DyadicRational::zero());
    EXPECT_TRUE(b.satisfiable);
    auto c = kraft_sum({1, 1, 1});
    EXPECT_EQ(c.sum, DyadicRational::parse("3/2"));
    EXPECT_FALSE(c.satisfiable);
}

TEST(Kraft, Construct) {
    std::vector<BitString> want;
    for (auto s : {"0", "10", "110", "1110", "111100", "111101", "111110", "111111"}) want.emplace_back(s);
    EXPECT_EQ(kraft_construct({1, 2, 3, 4, 6, 6, 6, 6}), want);

    auto e4 = kraft_construct({1, 2, 3, 3});
    EXPECT_EQ(e4, E4.codewords());
    EXPECT_EQ(kraft_construct({1}), std::vector<BitString>{bs("0")});
    EXPECT_THROW(kraft_construct({1, 1, 1}), CapacityError);
    EXPECT_THROW(kraft_construct({0}), DomainError);
}

TEST(Kraft, ConstructKeepsInputPositions) {
    auto out = kraft_construct({3, 1, 2});
    EXPECT_EQ(out[0], bs("110"));
    EXPECT_EQ(out[1], bs("0"));
    EXPECT_EQ(out[2], bs("10"));
}

TEST(Kraft, ConstructProperties) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::uint32_t> lengths;
        DyadicRational sum;
        while (lengths.size() < 30) {
            std::uint32_t l = 1 + static_cast<std::uint32_t>(rng() % 12);
            if (sum + DyadicRational::pow2_neg(l) > DyadicRational::one()) break;
            sum += DyadicRational::pow2_neg(l);
            lengths.push_back(l);
        }
        auto words = kraft_construct(lengths);
        ASSERT_EQ(words.size(), lengths.size());
        for (std::size_t i = 0; i < words.size(); ++i) ASSERT_EQ(words[i].size(), lengths[i]);
        for (std::size_t i = 0; i < words.size(); ++i)
            for (std::size_t j = 0; j < words.size(); ++j)
                if (i != j) {
                    ASSERT_FALSE(words[i].is_prefix_of(words[j]));
                }
        Code c;
        for (std::size_t i = 0; i < words.size(); ++i) c.table.emplace_back("s" + std::to_string(i), words[i]);
        ASSERT_EQ(classify(c).code_class, CodeClass::Prefix);
    }
}

TEST(SelfDelim, Examples) {
    EXPECT_EQ(selfdelim_encode(bs("01"), SelfDelimScheme::E1Zeros), bs("00101"));
    EXPECT_EQ(selfdelim_encode(bs("01"), SelfDelimScheme::E1Bar), bs("11001"));
    EXPECT_EQ(selfdelim_encode(BitString(), SelfDelimScheme::E1Bar), bs("0"));
    EXPECT_EQ(selfdelim_encode(bs("0"), SelfDelimScheme::E0), bs("001"));
    // |x| = 3 -> "1" -> header 1^1 0 1
    EXPECT_EQ(selfdelim_encode(bs("000"), SelfDelimScheme::Prime), bs("101000"));
    EXPECT_EQ(selfdelim_encode(bs("000"), SelfDelimScheme::E2), bs("011000"));
    EXPECT_THROW(selfdelim_encode(BitString(), SelfDelimScheme::E2), DomainError);
    EXPECT_THROW(selfdelim_encode(BitString(), SelfDelimScheme::Prime), DomainError);
}

TEST(SelfDelim, SheetStream) {
    BitString stream = bs("111110001011110000110100101111100100101");
    auto y = selfdelim_decode(stream, SelfDelimScheme::E1Bar);
    auto z = selfdelim_decode(stream, SelfDelimScheme::Prime, y.consumed);
    BitString t = stream.substr(y.consumed + z.consumed);
    // by hand: 1^5 0 | 00101 ; 1^3 0 | 000 (= eight) | 11010010 ; rest
    EXPECT_EQ(y.value, bs("00101"));
    EXPECT_EQ(z.value, bs("11010010"));
    EXPECT_EQ(t, bs("1111100100101"));
    EXPECT_EQ(bar(y.value) + selfdelim_encode(z.value, SelfDelimScheme::Prime) + t, stream);
}

TEST(SelfDelim, ExhaustiveRoundTripAndLengthLaws) {
    const SelfDelimScheme schemes[] = {SelfDelimScheme::E0, SelfDelimScheme::E1Zeros, SelfDelimScheme::E1Bar,
                                       SelfDelimScheme::E2, SelfDelimScheme::Prime};
    for (auto scheme : schemes) {
        for (std::size_t n = 0; n <= 14; ++n) {
            if (n == 0 && (scheme == SelfDelimScheme::E2 || scheme == SelfDelimScheme::Prime)) continue;
            std::size_t len_of_len = 0;
            while ((static_cast<std::size_t>(n) >> (len_of_len + 1)) != 0) ++len_of_len;
            for (auto& x : all_of_length(n)) {
                BitString code = selfdelim_encode(x, scheme);
                auto d = selfdelim_decode(code + bs("1011"), scheme);
                ASSERT_EQ(d.value, x);
                ASSERT_EQ(d.consumed, code.size());
                if (scheme == SelfDelimScheme::E1Zeros || scheme == SelfDelimScheme::E1Bar) {
                    ASSERT_EQ(code.size(), 2 * n + 1);
                }
                if (scheme == SelfDelimScheme::E2 || scheme == SelfDelimScheme::Prime) {
                    ASSERT_EQ(code.size(), 2 * len_of_len + n + 1);
                }
                if (scheme == SelfDelimScheme::E0) {
                    ASSERT_EQ(code.size(), string_to_u64(x) + 1);
                }
            }
        }
    }
}

TEST(SelfDelim, RandomTriples) {
    std::mt19937_64 rng(3);
    const SelfDelimScheme schemes[] = {SelfDelimScheme::E0, SelfDelimScheme::E1Zeros, SelfDelimScheme::E1Bar,
                                       SelfDelimScheme::E2, SelfDelimScheme::Prime};
    for (auto scheme : schemes) {
        std::size_t max_len = scheme == SelfDelimScheme::E0 ? 10 : 40;
        for (int trial = 0; trial < 10000; ++trial) {
            BitString xs[3];
            BitString stream;
            for (auto& x : xs) {
                std::size_t n = rng() % (max_len + 1);
                if (n == 0 && (scheme == SelfDelimScheme::E2 || scheme == SelfDelimScheme::Prime)) n = 1;
                for (std::size_t i = 0; i < n; ++i) x.push_back(rng() & 1);
                stream += selfdelim_encode(x, scheme);
            }
            std::size_t pos = 0;
            for (auto& x : xs) {
                auto d = selfdelim_decode(stream, scheme, pos);
                ASSERT_EQ(d.value, x);
                pos += d.consumed;
            }
            ASSERT_EQ(pos, stream.size());
        }
    }
}

TEST(SelfDelim, Errors) {
    EXPECT_THROW(selfdelim_decode(bs("111"), SelfDelimScheme::E1Bar), DecodeError);
    EXPECT_THROW(selfdelim_decode(bs("110"), SelfDelimScheme::E1Bar), DecodeError);
    EXPECT_THROW(selfdelim_decode(bs("1"), SelfDelimScheme::E0), DecodeError);
    EXPECT_THROW(selfdelim_decode(bs("000"), SelfDelimScheme::E0), DecodeError);
    try {
        selfdelim_decode(bs("1101"), SelfDelimScheme::E1Bar);
        FAIL();
    } catch (const DecodeError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
    SelfDelimOptions tight{4};
    EXPECT_THROW(selfdelim_encode(bs("10"), SelfDelimScheme::E0, tight), DomainError);
    EXPECT_EQ(parse_scheme("prime"), SelfDelimScheme::Prime);
    EXPECT_THROW(parse_scheme("E9"), DomainError);
}

TEST(Pairing, Examples) {
    EXPECT_EQ(pair_encode(BitString(), bs("1")), bs("01"));
    EXPECT_EQ(pair_encode(bs("1"), BitString()), bs("101"));
    EXPECT_THROW(pair_decode(bs("1")), DecodeError);
}

TEST(Pairing, ExhaustiveRoundTrip) {
    for (std::size_t a = 0; a <= 6; ++a)
        for (auto& i : all_of_length(a))
            for (std::size_t b = 0; b <= 6; ++b)
                for (auto& j : all_of_length(b)) {
                    auto [i2, j2] = pair_decode(pair_encode(i, j));
                    ASSERT_EQ(i2, i);
                    ASSERT_EQ(j2, j);
                }
}

TEST(Balanced, Examples) {
    EXPECT_EQ(balanced_rank(bs("01"), 1), 0);
    EXPECT_EQ(balanced_rank(bs("10"), 1), 1);
    EXPECT_EQ(binomial(4, 2), 6);
    EXPECT_EQ(balanced_code_length(4, 2), 3u);
    EXPECT_EQ(balanced_unrank(4, 2, 0), bs("0011"));
    EXPECT_THROW(balanced_rank(bs("0111"), 2), DomainError);
    EXPECT_THROW(balanced_unrank(4, 2, 6), DomainError);
    EXPECT_THROW(balanced_encode(bs("0111")), DomainError);
}

// Oracle: rank is the position in a sorted list of all same-weight strings.
TEST(Balanced, ExhaustiveToSixteen) {
    for (std::size_t n = 0; n <= 16; ++n) {
        std::map<std::size_t, std::uint64_t> next_rank;
        for (auto& x : all_of_length(n)) {
            std::size_t k = x.count_ones();
            std::uint64_t expected = next_rank[k]++;
            ASSERT_EQ(balanced_rank(x, k), expected);
            ASSERT_EQ(balanced_unrank(n, k, balanced_rank(x)), x);
        }
        for (auto& [k, count] : next_rank) ASSERT_EQ(binomial(n, k), count);
    }
}

TEST(Balanced, CodecCompresses) {
    for (std::size_t n = 2; n <= 16; n += 2) {
        EXPECT_LT(balanced_code_length(n, n / 2), n);
        for (auto& x : all_of_length(n)) {
            if (x.count_ones() != n / 2) continue;
            BitString c = balanced_encode(x);
            ASSERT_EQ(c.size(), balanced_code_length(n, n / 2));
            ASSERT_EQ(balanced_decode(c, n), x);
        }
    }
}
