#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "ait/bitstring.hpp"
#include "ait/errors.hpp"

namespace ait {

// Exact nonnegative binary fraction numerator / 2^exponent.  Always stored
// normalized: the numerator is odd, or zero with exponent 0.
class DyadicRational {
public:
    DyadicRational() = default;

    DyadicRational(Natural numerator, std::uint32_t exponent) : num_(std::move(numerator)), exp_(exponent) {
        if (num_ < 0) throw DomainError("dyadic rational must be nonnegative");
        normalize();
    }

    static DyadicRational zero() { return {}; }
    static DyadicRational one() { return {Natural(1), 0}; }

    // 2^(-k)
    static DyadicRational pow2_neg(std::uint32_t k) { return {Natural(1), k}; }

    // The real number 0.x whose expansion starts with x and continues with zeros.
    static DyadicRational from_fraction_bits(const BitString& x) {
        return {x.empty() ? Natural(0) : Natural(string_to_number(x) - (Natural(1) << x.size())),
                static_cast<std::uint32_t>(x.size())};
    }

    // Parses "0.001011", "1", "0", "1.1", "0." and "3/8".
    static DyadicRational parse(std::string_view text) {
        if (text.empty()) throw DomainError("empty dyadic literal");
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            Natural n(std::string(text.substr(0, slash)));
            Natural d(std::string(text.substr(slash + 1)));
            if (d <= 0 || (d & (d - 1)) != 0) throw DomainError("denominator of '" + std::string(text) + "' is not a power of two");
            return {n, static_cast<std::uint32_t>(boost::multiprecision::msb(d))};
        }
        auto dot = text.find('.');
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        Natural n = 0;
        for (char c : whole) {
            if (c != '0' && c != '1') throw DomainError("invalid binary digit in '" + std::string(text) + "'");
            n = (n << 1) | (c == '1' ? 1 : 0);
        }
        for (char c : frac) {
            if (c != '0' && c != '1') throw DomainError("invalid binary digit in '" + std::string(text) + "'");
            n = (n << 1) | (c == '1' ? 1 : 0);
        }
        return {n, static_cast<std::uint32_t>(frac.size())};
    }

    const Natural& numerator() const noexcept { return num_; }
    std::uint32_t exponent() const noexcept { return exp_; }
    bool is_zero() const { return num_ == 0; }

    friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
        std::uint32_t e = std::max(a.exp_, b.exp_);
        return {(a.num_ << (e - a.exp_)) + (b.num_ << (e - b.exp_)), e};
    }

    friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
        std::uint32_t e = std::max(a.exp_, b.exp_);
        Natural n = (a.num_ << (e - a.exp_)) - (b.num_ << (e - b.exp_));
        if (n < 0) throw DomainError("dyadic subtraction would go negative");
        return {n, e};
    }

    friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
        return {a.num_ * b.num_, a.exp_ + b.exp_};
    }

    DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
    DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }

    friend bool operator==(const DyadicRational&, const DyadicRational&) = default;

    friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
        std::uint32_t e = std::max(a.exp_, b.exp_);
        Natural lhs = a.num_ << (e - a.exp_);
        Natural rhs = b.num_ << (e - b.exp_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // floor(value * 2^bits): the integer formed by the first `bits` fractional bits.
    Natural scaled_floor(std::uint32_t bits) const {
        if (bits >= exp_) return num_ << (bits - exp_);
        return num_ >> (exp_ - bits);
    }

    // The first n bits after the binary point (requires value < 1).
    BitString fraction_prefix(std::uint32_t n) const {
        if (*this >= one()) throw DomainError("fraction_prefix needs a value below 1");
        Natural v = scaled_floor(n);
        BitString s;
        for (std::uint32_t i = n; i-- > 0;) s.push_back(boost::multiprecision::bit_test(v, i));
        return s;
    }

    // Binary positional text, e.g. "0.001011", "1", "1.1", "0".
    std::string to_binary_string() const {
        Natural whole = num_ >> exp_;
        std::string out;
        if (whole == 0) {
            out = "0";
        } else {
            for (std::size_t i = boost::multiprecision::msb(whole) + 1; i-- > 0;)
                out.push_back(boost::multiprecision::bit_test(whole, static_cast<unsigned>(i)) ? '1' : '0');
        }
        if (exp_ > 0) {
            out.push_back('.');
            for (std::uint32_t i = exp_; i-- > 0;) out.push_back(boost::multiprecision::bit_test(num_, i) ? '1' : '0');
        }
        return out;
    }

    std::string to_fraction_string() const {
        return num_.str() + "/" + (Natural(1) << exp_).str();
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(Natural(1) << exp_); }

private:
    void normalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        std::uint32_t tz = static_cast<std::uint32_t>(boost::multiprecision::lsb(num_));
        std::uint32_t shift = std::min(tz, exp_);
        num_ >>= shift;
        exp_ -= shift;
    }

    Natural num_ = 0;
    std::uint32_t exp_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.to_binary_string(); }

// The i with alpha in [2^-i, 2^-i+1), i.e. ceil(-log2 alpha): the position of
// the first 1 after the binary point.
inline std::uint32_t leading_one_position(const DyadicRational& alpha) {
    if (alpha.is_zero()) throw DomainError("leading_one_position: alpha must be > 0");
    if (alpha > DyadicRational::one()) throw DomainError("leading_one_position: alpha must be <= 1");
    if (alpha == DyadicRational::one()) return 0;
    std::size_t bitlen = boost::multiprecision::msb(alpha.numerator()) + 1;
    return alpha.exponent() - static_cast<std::uint32_t>(bitlen) + 1;
}

// Gamma_x = [0.x, 0.x + 2^-|x|)
struct Cylinder {
    BitString base;
    DyadicRational lower;
    DyadicRational width;

    DyadicRational upper() const { return lower + width; }

    bool contains(const Cylinder& other) const { return lower <= other.lower && other.upper() <= upper(); }
    bool disjoint(const Cylinder& other) const { return upper() <= other.lower || other.upper() <= lower; }
};

inline Cylinder cylinder_of(const BitString& x) {
    return {x, DyadicRational::from_fraction_bits(x), DyadicRational::pow2_neg(static_cast<std::uint32_t>(x.size()))};
}

}  // namespace ait
