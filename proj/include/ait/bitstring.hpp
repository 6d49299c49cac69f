#pragma once

// Finite binary strings and their identification with the naturals:
// epsilon <-> 1, 0 <-> 2, 1 <-> 3, 00 <-> 4, ...  The number attached to x is
// the binary numeral "1x".

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ait/errors.hpp"

namespace ait {

// Arbitrary-precision natural number.  Produced by the bijection it is >= 1.
using Natural = boost::multiprecision::cpp_int;

class BitString {
public:
    BitString() = default;

    // Accepts raw 0/1 characters; the single character "e" spells epsilon.
    explicit BitString(std::string_view text) {
        if (text == "e") return;
        bits_.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c != '0' && c != '1')
                throw DomainError("invalid bit character '" + std::string(1, c) + "' at offset " +
                                  std::to_string(i));
            bits_.push_back(c == '1');
        }
    }

    static BitString repeat(bool bit, std::size_t count) {
        BitString s;
        s.bits_.assign(count, bit);
        return s;
    }

    // The low `width` bits of `value`, most significant first.
    static BitString from_uint(std::uint64_t value, std::size_t width) {
        BitString s;
        s.bits_.resize(width);
        for (std::size_t i = 0; i < width; ++i) s.bits_[width - 1 - i] = (value >> i) & 1U;
        return s;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    bool operator[](std::size_t i) const { return bits_[i]; }

    void push_back(bool b) { bits_.push_back(b); }
    void pop_back() { bits_.pop_back(); }

    BitString& append(const BitString& other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
        return *this;
    }

    BitString& operator+=(const BitString& other) { return append(other); }

    friend BitString operator+(BitString lhs, const BitString& rhs) { return lhs.append(rhs); }

    BitString substr(std::size_t pos, std::size_t len = std::string::npos) const {
        BitString s;
        if (pos >= bits_.size()) return s;
        std::size_t end = (len == std::string::npos || pos + len > bits_.size()) ? bits_.size() : pos + len;
        s.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                       bits_.begin() + static_cast<std::ptrdiff_t>(end));
        return s;
    }

    bool is_prefix_of(const BitString& other) const {
        return size() <= other.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
    }

    bool starts_with(const BitString& prefix) const { return prefix.is_prefix_of(*this); }

    std::size_t count_ones() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

    // Value of the bits read as an unsigned binary numeral (needs size() <= 64).
    std::uint64_t to_uint() const {
        std::uint64_t v = 0;
        for (bool b : bits_) v = (v << 1) | static_cast<std::uint64_t>(b);
        return v;
    }

    // Raw 0/1 text; epsilon renders as the empty string.
    std::string bits() const {
        std::string out;
        out.reserve(bits_.size());
        for (bool b : bits_) out.push_back(b ? '1' : '0');
        return out;
    }

    // Text for files and the CLI: epsilon is spelled "e".
    std::string literal() const { return empty() ? std::string("e") : bits(); }

    friend bool operator==(const BitString&, const BitString&) = default;

    // Length-then-lexicographic order, which is the order of the associated numbers.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        if (a.size() != b.size()) return a.size() <=> b.size();
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.bits_[i] != b.bits_[i]) return a.bits_[i] ? std::strong_ordering::greater : std::strong_ordering::less;
        return std::strong_ordering::equal;
    }

    // Plain dictionary order ("0" < "00" < "01" < "1").
    static bool lex_less(const BitString& a, const BitString& b) {
        return std::lexicographical_compare(a.bits_.begin(), a.bits_.end(), b.bits_.begin(), b.bits_.end());
    }

    const std::vector<bool>& raw() const noexcept { return bits_; }

private:
    std::vector<bool> bits_;
};

inline std::ostream& operator<<(std::ostream& os, const BitString& s) { return os << s.literal(); }

// Rank of x in length-lexicographic order starting at 1: the numeral "1x".
inline Natural string_to_number(const BitString& x) {
    Natural n = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        n <<= 1;
        if (x[i]) n |= 1;
    }
    return n;
}

inline BitString number_to_string(const Natural& n) {
    if (n <= 0) throw DomainError("number_to_string: n must be >= 1");
    std::size_t width = boost::multiprecision::msb(n);  // floor(log2 n)
    BitString s;
    for (std::size_t i = width; i-- > 0;) s.push_back(boost::multiprecision::bit_test(n, static_cast<unsigned>(i)));
    return s;
}

// Fixed-width fast paths for enumeration loops (|x| <= 62).
inline std::uint64_t string_to_u64(const BitString& x) { return (std::uint64_t{1} << x.size()) | x.to_uint(); }

inline BitString u64_to_string(std::uint64_t n) {
    if (n == 0) throw DomainError("number_to_string: n must be >= 1");
    std::size_t width = 63 - static_cast<std::size_t>(__builtin_clzll(n));
    return BitString::from_uint(n, width);
}

}  // namespace ait

template <>
struct std::hash<ait::BitString> {
    std::size_t operator()(const ait::BitString& s) const noexcept { return std::hash<std::vector<bool>>{}(s.raw()); }
};
