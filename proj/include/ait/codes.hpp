#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/dyadic.hpp"
#include "ait/errors.hpp"
#include "ait/prefix_tree.hpp"

namespace ait {

// ---------------------------------------------------------------------------
// Code tables and classification
// ---------------------------------------------------------------------------

// Symbol -> codeword table in alphabet order.  Duplicate codewords are
// allowed so singular codes stay representable.
struct Code {
    std::vector<std::pair<std::string, BitString>> table;

    std::size_t size() const noexcept { return table.size(); }

    std::vector<BitString> codewords() const {
        std::vector<BitString> out;
        out.reserve(table.size());
        for (const auto& [sym, word] : table) out.push_back(word);
        return out;
    }

    BitString encode(const std::vector<std::string>& symbols) const {
        BitString out;
        for (const auto& s : symbols) {
            auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == s; });
            if (it == table.end()) throw DomainError("symbol '" + s + "' not in code");
            out += it->second;
        }
        return out;
    }
};

enum class CodeClass { Singular, NonsingularNotUD, UniquelyDecodableNotPrefix, Prefix };

inline const char* to_string(CodeClass c) {
    switch (c) {
        case CodeClass::Singular: return "singular";
        case CodeClass::NonsingularNotUD: return "nonsingular-not-UD";
        case CodeClass::UniquelyDecodableNotPrefix: return "uniquely-decodable-not-prefix";
        case CodeClass::Prefix: return "prefix";
    }
    return "?";
}

// A bit stream together with two distinct symbol sequences encoding to it.
struct AmbiguityWitness {
    BitString stream;
    std::vector<std::string> first_parse;
    std::vector<std::string> second_parse;
};

struct ClassificationResult {
    CodeClass code_class;
    std::optional<AmbiguityWitness> witness;  // set iff NonsingularNotUD
};

inline bool is_prefix_free(std::vector<BitString> words) {
    std::sort(words.begin(), words.end(), BitString::lex_less);
    for (std::size_t i = 1; i < words.size(); ++i)
        if (words[i - 1].is_prefix_of(words[i])) return false;
    return true;
}

// Number of distinct symbol sequences whose encoding is exactly `stream`.
inline Natural count_parses(const Code& code, const BitString& stream) {
    std::vector<Natural> ways(stream.size() + 1, 0);
    ways[0] = 1;
    for (std::size_t pos = 0; pos < stream.size(); ++pos) {
        if (ways[pos] == 0) continue;
        for (const auto& [sym, word] : code.table) {
            if (word.empty() || pos + word.size() > stream.size()) continue;
            if (word == stream.substr(pos, word.size())) ways[pos + word.size()] += ways[pos];
        }
    }
    return ways[stream.size()];
}

namespace detail {

// Shortest ambiguous stream by Dijkstra over dangling suffixes (the
// Sardinas-Patterson sets).  A state is the suffix by which the leading parse
// overhangs the trailing one; cost is the length of the leading parse.
inline std::optional<AmbiguityWitness> shortest_ambiguity(const Code& code) {
    struct State {
        std::size_t cost;
        BitString dangling;
        std::vector<std::size_t> ahead;
        std::vector<std::size_t> behind;
    };
    auto cmp = [](const State& a, const State& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        return b.dangling < a.dangling;
    };
    std::priority_queue<State, std::vector<State>, decltype(cmp)> queue(cmp);
    const auto& t = code.table;

    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = 0; b < t.size(); ++b) {
            if (a == b) continue;
            const BitString& short_word = t[a].second;
            const BitString& long_word = t[b].second;
            if (short_word.size() < long_word.size() && short_word.is_prefix_of(long_word))
                queue.push({long_word.size(), long_word.substr(short_word.size()), {b}, {a}});
        }

    std::set<BitString> settled;
    while (!queue.empty()) {
        State s = queue.top();
        queue.pop();
        if (s.dangling.empty()) {
            AmbiguityWitness w;
            for (auto i : s.ahead) w.stream += t[i].second;
            for (auto i : s.ahead) w.first_parse.push_back(t[i].first);
            for (auto i : s.behind) w.second_parse.push_back(t[i].first);
            return w;
        }
        if (!settled.insert(s.dangling).second) continue;
        for (std::size_t c = 0; c < t.size(); ++c) {
            const BitString& word = t[c].second;
            if (word.empty()) continue;
            State next = s;
            next.behind.push_back(c);
            if (word.is_prefix_of(s.dangling)) {
                next.dangling = s.dangling.substr(word.size());
            } else if (s.dangling.is_prefix_of(word)) {
                next.dangling = word.substr(s.dangling.size());
                next.cost = s.cost + next.dangling.size();
                std::swap(next.ahead, next.behind);
            } else {
                continue;
            }
            if (!next.dangling.empty() && settled.count(next.dangling)) continue;
            queue.push(std::move(next));
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline ClassificationResult classify(const Code& code) {
    if (code.table.empty()) throw DomainError("classify: empty code");

    std::vector<BitString> words = code.codewords();
    {
        std::set<BitString> seen;
        for (const auto& w : words)
            if (!seen.insert(w).second) return {CodeClass::Singular, std::nullopt};
    }

    // An empty codeword makes every stream ambiguous: the empty stream parses
    // as nothing and as that symbol.
    for (const auto& [sym, word] : code.table)
        if (word.empty()) return {CodeClass::NonsingularNotUD, AmbiguityWitness{BitString{}, {}, {sym}}};

    if (is_prefix_free(words)) return {CodeClass::Prefix, std::nullopt};

    if (auto w = detail::shortest_ambiguity(code)) return {CodeClass::NonsingularNotUD, std::move(w)};
    return {CodeClass::UniquelyDecodableNotPrefix, std::nullopt};
}

// ---------------------------------------------------------------------------
// Kraft inequality
// ---------------------------------------------------------------------------

struct KraftResult {
    DyadicRational sum;
    bool satisfiable;
};

inline KraftResult kraft_sum(const std::vector<std::uint32_t>& lengths) {
    DyadicRational sum;
    for (auto l : lengths) sum += DyadicRational::pow2_neg(l);
    return {sum, sum <= DyadicRational::one()};
}

// Codewords with exactly the requested lengths, assigned in nondecreasing
// length order to the lexicographically first free node.  result[i] has
// length lengths[i].
inline std::vector<BitString> kraft_construct(const std::vector<std::uint32_t>& lengths) {
    for (auto l : lengths)
        if (l == 0) throw DomainError("kraft_construct: length-0 codeword (epsilon) is not allowed");
    if (!kraft_sum(lengths).satisfiable) throw CapacityError("kraft_construct: lengths violate Kraft's inequality");

    std::vector<std::size_t> order(lengths.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

    PrefixTree tree;
    std::vector<BitString> out(lengths.size());
    for (auto i : order) out[i] = tree.allocate_first_available(lengths[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Self-delimiting codes of {0,1}*
// ---------------------------------------------------------------------------

enum class SelfDelimScheme {
    E0,        // 0^x 1, x read as a number
    E1Zeros,   // 0^|x| 1 x
    E1Bar,     // 1^|x| 0 x  ("bar")
    E2,        // 0^||x|| 1 |x| x
    Prime      // bar(|x|) x
};

inline const char* to_string(SelfDelimScheme s) {
    switch (s) {
        case SelfDelimScheme::E0: return "E0";
        case SelfDelimScheme::E1Zeros: return "E1-zeros";
        case SelfDelimScheme::E1Bar: return "E1-bar";
        case SelfDelimScheme::E2: return "E2";
        case SelfDelimScheme::Prime: return "prime";
    }
    return "?";
}

inline SelfDelimScheme parse_scheme(const std::string& name) {
    if (name == "E0") return SelfDelimScheme::E0;
    if (name == "E1-zeros" || name == "E1") return SelfDelimScheme::E1Zeros;
    if (name == "E1-bar" || name == "bar") return SelfDelimScheme::E1Bar;
    if (name == "E2") return SelfDelimScheme::E2;
    if (name == "prime") return SelfDelimScheme::Prime;
    throw DomainError("unknown self-delimiting scheme '" + name + "'");
}

struct SelfDelimOptions {
    // E0 is exponentially long in |x|; refuse numbers beyond this.
    std::uint64_t e0_cap = std::uint64_t{1} << 20;
};

struct Decoded {
    BitString value;
    std::size_t consumed;
};

namespace detail {

inline BitString unary_then(bool fill, std::size_t count, bool stop) {
    BitString s = BitString::repeat(fill, count);
    s.push_back(stop);
    return s;
}

// Reads fill^k stop starting at pos; returns k.
inline std::size_t read_unary(const BitString& in, std::size_t pos, bool fill) {
    std::size_t k = 0;
    while (true) {
        if (pos + k >= in.size()) throw DecodeError("truncated unary header", in.size());
        if (in[pos + k] != fill) return k;
        ++k;
    }
}

inline BitString read_bits(const BitString& in, std::size_t pos, std::size_t count) {
    if (pos + count > in.size()) throw DecodeError("truncated payload: need " + std::to_string(count) + " bits", in.size());
    return in.substr(pos, count);
}

inline BitString length_as_string(std::size_t n) { return u64_to_string(n); }

}  // namespace detail

inline BitString selfdelim_encode(const BitString& x, SelfDelimScheme scheme, const SelfDelimOptions& opt = {}) {
    using namespace detail;
    switch (scheme) {
        case SelfDelimScheme::E0: {
            if (x.size() >= 63 || string_to_u64(x) > opt.e0_cap)
                throw DomainError("E0 code of '" + x.literal() + "' exceeds the configured cap");
            return unary_then(false, string_to_u64(x), true);
        }
        case SelfDelimScheme::E1Zeros: return unary_then(false, x.size(), true) + x;
        case SelfDelimScheme::E1Bar: return unary_then(true, x.size(), false) + x;
        case SelfDelimScheme::E2:
        case SelfDelimScheme::Prime: {
            if (x.empty()) throw DomainError(std::string(to_string(scheme)) + " is undefined for the empty string (|x| = 0 has no string)");
            BitString len = length_as_string(x.size());
            bool fill = scheme == SelfDelimScheme::Prime;
            return unary_then(fill, len.size(), !fill) + len + x;
        }
    }
    throw DomainError("unknown scheme");
}

// Decodes one codeword starting at `pos`.  `consumed` counts bits from pos.
inline Decoded selfdelim_decode(const BitString& in, SelfDelimScheme scheme, std::size_t pos = 0,
                                const SelfDelimOptions& opt = {}) {
    using namespace detail;
    switch (scheme) {
        case SelfDelimScheme::E0: {
            std::size_t k = 0;
            while (true) {
                if (pos + k >= in.size()) throw DecodeError("truncated E0 codeword", in.size());
                if (in[pos + k]) break;
                if (++k > opt.e0_cap) throw DecodeError("E0 run exceeds the configured cap", pos + k);
            }
            if (k == 0) throw DecodeError("E0 codeword with zero count names no string", pos);
            return {u64_to_string(k), k + 1};
        }
        case SelfDelimScheme::E1Zeros:
        case SelfDelimScheme::E1Bar: {
            bool fill = scheme == SelfDelimScheme::E1Bar;
            std::size_t k = read_unary(in, pos, fill);
            return {read_bits(in, pos + k + 1, k), 2 * k + 1};
        }
        case SelfDelimScheme::E2:
        case SelfDelimScheme::Prime: {
            bool fill = scheme == SelfDelimScheme::Prime;
            std::size_t k = read_unary(in, pos, fill);
            BitString len = read_bits(in, pos + k + 1, k);
            if (len.size() > 40) throw DecodeError("length field too large", pos + k + 1);
            std::size_t n = static_cast<std::size_t>(string_to_u64(len));
            return {read_bits(in, pos + 2 * k + 1, n), 2 * k + 1 + n};
        }
    }
    throw DomainError("unknown scheme");
}

inline BitString bar(const BitString& x) { return selfdelim_encode(x, SelfDelimScheme::E1Bar); }

// <i, j> = bar(i) j
inline BitString pair_encode(const BitString& i, const BitString& j) { return bar(i) + j; }

inline std::pair<BitString, BitString> pair_decode(const BitString& stream) {
    Decoded first = selfdelim_decode(stream, SelfDelimScheme::E1Bar);
    return {first.value, stream.substr(first.consumed)};
}

// ---------------------------------------------------------------------------
// Enumerative code for fixed-weight strings
// ---------------------------------------------------------------------------

inline Natural binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    Natural r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Position of x among all |x|-bit strings of the same weight, in dictionary order.
inline Natural balanced_rank(const BitString& x) {
    std::size_t n = x.size();
    std::size_t ones = x.count_ones();
    Natural rank = 0;
    for (std::size_t i = 0; i < n && ones > 0; ++i) {
        if (x[i]) {
            rank += binomial(n - i - 1, ones);
            --ones;
        }
    }
    return rank;
}

inline Natural balanced_rank(const BitString& x, std::size_t k) {
    if (x.count_ones() != k)
        throw DomainError("balanced_rank: '" + x.literal() + "' does not have weight " + std::to_string(k));
    return balanced_rank(x);
}

inline BitString balanced_unrank(std::size_t n, std::size_t k, Natural rank) {
    if (k > n) throw DomainError("balanced_unrank: weight exceeds length");
    if (rank < 0 || rank >= binomial(n, k)) throw DomainError("balanced_unrank: rank out of range");
    BitString x;
    std::size_t ones = k;
    for (std::size_t i = 0; i < n; ++i) {
        Natural with_zero = binomial(n - i - 1, ones);
        if (ones > 0 && rank >= with_zero) {
            rank -= with_zero;
            x.push_back(true);
            --ones;
        } else {
            x.push_back(false);
        }
    }
    return x;
}

// ceil(log2 C(n, k)) bits index any n-bit string of weight k once n and k are known.
inline std::size_t balanced_code_length(std::size_t n, std::size_t k) {
    Natural c = binomial(n, k);
    if (c <= 1) return 0;
    Natural m = c - 1;
    return boost::multiprecision::msb(m) + 1;
}

// Fixed-width codeword for an n-bit string with exactly n/2 ones, given n.
inline BitString balanced_encode(const BitString& x) {
    std::size_t n = x.size();
    if (n % 2 != 0 || x.count_ones() != n / 2)
        throw DomainError("balanced_encode: '" + x.literal() + "' does not have as many 0s as 1s");
    Natural r = balanced_rank(x);
    std::size_t width = balanced_code_length(n, n / 2);
    BitString out;
    for (std::size_t i = width; i-- > 0;) out.push_back(boost::multiprecision::bit_test(r, static_cast<unsigned>(i)));
    return out;
}

inline BitString balanced_decode(const BitString& codeword, std::size_t n) {
    if (n % 2 != 0) throw DomainError("balanced_decode: n must be even");
    if (codeword.size() != balanced_code_length(n, n / 2)) throw DecodeError("balanced codeword has the wrong width", codeword.size());
    Natural r = 0;
    for (std::size_t i = 0; i < codeword.size(); ++i) r = (r << 1) | (codeword[i] ? 1 : 0);
    return balanced_unrank(n, n / 2, r);
}

}  // namespace ait
