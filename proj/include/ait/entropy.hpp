#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ait/codes.hpp"
#include "ait/errors.hpp"

namespace ait {

using Rational = boost::multiprecision::cpp_rational;

// Probabilities are either doubles or exact rationals; the outcome labels are
// only carried along for code construction and reports.
template <class P>
struct BasicDistribution {
    std::vector<std::string> outcomes;
    std::vector<P> p;
};

using Distribution = BasicDistribution<double>;
using ExactDistribution = BasicDistribution<Rational>;

// Rows index X, columns index Y.
using JointDistribution = std::vector<std::vector<double>>;

// p(x), p(y|x) rows, p(z|y) rows.
struct MarkovTriple {
    std::vector<double> px;
    std::vector<std::vector<double>> y_given_x;
    std::vector<std::vector<double>> z_given_y;
};

inline constexpr double kFloatSumTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-9;

namespace detail {

inline void check_probabilities(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw DomainError(std::string(what) + ": no outcomes");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + ": probability must be finite and >= 0");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kFloatSumTolerance)
        throw DomainError(std::string(what) + ": probabilities sum to " + std::to_string(sum) + ", not 1");
}

inline void check_probabilities(const std::vector<Rational>& p, const char* what) {
    if (p.empty()) throw DomainError(std::string(what) + ": no outcomes");
    Rational sum = 0;
    for (const auto& v : p) {
        if (v < 0) throw DomainError(std::string(what) + ": probability must be >= 0");
        sum += v;
    }
    if (sum != 1) throw DomainError(std::string(what) + ": probabilities do not sum to exactly 1");
}

// -log2 of an exact power of two 2^-k, or -1 if p is not of that form.
inline int exact_neg_log2(const Rational& p) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    Natural n = numerator(p), d = denominator(p);
    if (n != 1 || (d & (d - 1)) != 0) return -1;
    return static_cast<int>(boost::multiprecision::msb(d));
}

inline double plogp_inv(double p) { return p > 0.0 ? p * std::log2(1.0 / p) : 0.0; }

inline void check_stochastic_rows(const std::vector<std::vector<double>>& rows, std::size_t width, const char* what) {
    for (const auto& r : rows) {
        if (r.size() != width) throw DomainError(std::string(what) + ": ragged table");
        check_probabilities(r, what);
    }
}

}  // namespace detail

// H = sum p log2(1/p), summed in index order; 0 log(1/0) = 0.
inline double entropy(const std::vector<double>& p) {
    detail::check_probabilities(p, "entropy");
    double h = 0.0;
    for (double v : p) h += detail::plogp_inv(v);
    return h;
}

inline double entropy(const Distribution& d) { return entropy(d.p); }

// Exact entropy for distributions whose nonzero masses are powers of two.
inline Rational entropy_exact(const std::vector<Rational>& p) {
    detail::check_probabilities(p, "entropy");
    Rational h = 0;
    for (const auto& v : p) {
        if (v == 0) continue;
        int k = detail::exact_neg_log2(v);
        if (k < 0) throw DomainError("exact entropy needs every nonzero probability to be a power of 1/2");
        h += v * k;
    }
    return h;
}

inline Rational entropy_exact(const ExactDistribution& d) { return entropy_exact(d.p); }

struct JointSummary {
    double h_xy = 0, h_x = 0, h_y = 0;
    double h_y_given_x = 0, h_x_given_y = 0;
    double i_xy = 0, i_yx = 0;
};

inline std::vector<double> marginal_rows(const JointDistribution& j) {
    std::vector<double> m;
    for (const auto& row : j) {
        double s = 0.0;
        for (double v : row) s += v;
        m.push_back(s);
    }
    return m;
}

inline std::vector<double> marginal_cols(const JointDistribution& j) {
    std::vector<double> m(j.empty() ? 0 : j[0].size(), 0.0);
    for (const auto& row : j)
        for (std::size_t c = 0; c < row.size(); ++c) m[c] += row[c];
    return m;
}

// Every quantity is evaluated from its own defining sum, so the chain rule and
// symmetry of I are checkable identities rather than tautologies.
inline JointSummary joint_conditional_mutual(const JointDistribution& j) {
    if (j.empty() || j[0].empty()) throw DomainError("joint distribution is empty");
    std::vector<double> flat;
    for (const auto& row : j) {
        if (row.size() != j[0].size()) throw DomainError("joint distribution is ragged");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    detail::check_probabilities(flat, "joint distribution");

    auto px = marginal_rows(j);
    auto py = marginal_cols(j);
    JointSummary s;
    s.h_x = entropy(px);
    s.h_y = entropy(py);
    for (std::size_t x = 0; x < j.size(); ++x) {
        for (std::size_t y = 0; y < j[x].size(); ++y) {
            double pxy = j[x][y];
            if (pxy <= 0.0) continue;
            s.h_xy += pxy * std::log2(1.0 / pxy);
            s.h_y_given_x += pxy * std::log2(px[x] / pxy);
            s.h_x_given_y += pxy * std::log2(py[y] / pxy);
            s.i_xy += pxy * std::log2(pxy / (px[x] * py[y]));
        }
    }
    // I(Y;X) as the reduction in uncertainty about Y
    s.i_yx = s.h_y - s.h_y_given_x;
    return s;
}

inline double mutual_information(const JointDistribution& j) { return joint_conditional_mutual(j).i_xy; }

// Shannon-Fano lengths ceil(log2 1/p): the least l with 2^-l <= p, found by
// exact comparison in the probability type.
template <class P>
std::vector<std::uint32_t> shannon_fano_lengths(const std::vector<P>& p) {
    detail::check_probabilities(p, "shannon_fano");
    std::vector<std::uint32_t> out;
    for (const auto& v : p) {
        if (!(v > 0)) throw DomainError("shannon_fano: zero-probability symbol has no finite codeword length");
        std::uint32_t l = 0;
        P scale = 1;
        while (scale > v) {
            scale /= 2;
            ++l;
        }
        out.push_back(l);
    }
    return out;
}

template <class P>
struct ShannonFanoResult {
    Code code;
    std::vector<std::uint32_t> lengths;
    P expected_length;
};

// A single certain outcome gets length 0; that degenerate code is replaced by
// the one-bit codeword "0" so the table stays usable.
template <class P>
ShannonFanoResult<P> shannon_fano(const BasicDistribution<P>& d) {
    if (d.outcomes.size() != d.p.size()) throw DomainError("shannon_fano: outcome and probability counts differ");
    auto lengths = shannon_fano_lengths(d.p);
    for (auto& l : lengths)
        if (l == 0) l = 1;
    auto words = kraft_construct(lengths);
    ShannonFanoResult<P> r;
    r.lengths = lengths;
    r.expected_length = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        r.code.table.emplace_back(d.outcomes[i], words[i]);
        r.expected_length += d.p[i] * P(lengths[i]);
    }
    return r;
}

struct DpiResult {
    double i_xy;
    double i_xz;
    bool holds;
};

inline DpiResult dpi_probe(const MarkovTriple& t) {
    detail::check_probabilities(t.px, "markov p(x)");
    if (t.y_given_x.size() != t.px.size()) throw DomainError("markov p(y|x): one row per x required");
    if (t.y_given_x.empty() || t.y_given_x[0].empty()) throw DomainError("markov p(y|x): empty");
    std::size_t ny = t.y_given_x[0].size();
    detail::check_stochastic_rows(t.y_given_x, ny, "markov p(y|x)");
    if (t.z_given_y.size() != ny) throw DomainError("markov p(z|y): one row per y required");
    if (t.z_given_y[0].empty()) throw DomainError("markov p(z|y): empty");
    std::size_t nz = t.z_given_y[0].size();
    detail::check_stochastic_rows(t.z_given_y, nz, "markov p(z|y)");

    JointDistribution jxy(t.px.size(), std::vector<double>(ny, 0.0));
    JointDistribution jxz(t.px.size(), std::vector<double>(nz, 0.0));
    for (std::size_t x = 0; x < t.px.size(); ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            jxy[x][y] = t.px[x] * t.y_given_x[x][y];
            for (std::size_t z = 0; z < nz; ++z) jxz[x][z] += jxy[x][y] * t.z_given_y[y][z];
        }
    DpiResult r;
    r.i_xy = mutual_information(jxy);
    r.i_xz = mutual_information(jxz);
    r.holds = r.i_xy >= r.i_xz - kIdentityTolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Seeded random distributions
// ---------------------------------------------------------------------------

// Uniform point on the probability simplex: normalized unit exponentials.
// Built on raw 64-bit draws so the stream depends only on the engine.
class SimplexSampler {
public:
    explicit SimplexSampler(std::uint64_t seed) : rng_(seed) {}

    std::vector<double> sample(std::size_t n) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& v : w) {
            double u = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
            v = -std::log(u);
            total += v;
        }
        for (auto& v : w) v /= total;
        return w;
    }

    std::size_t size_between(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1)); }

    JointDistribution joint(std::size_t rows, std::size_t cols) {
        auto flat = sample(rows * cols);
        JointDistribution j(rows, std::vector<double>(cols));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) j[r][c] = flat[r * cols + c];
        return j;
    }

    MarkovTriple markov(std::size_t nx, std::size_t ny, std::size_t nz) {
        MarkovTriple t;
        t.px = sample(nx);
        for (std::size_t x = 0; x < nx; ++x) t.y_given_x.push_back(sample(ny));
        for (std::size_t y = 0; y < ny; ++y) t.z_given_y.push_back(sample(nz));
        return t;
    }

private:
    std::mt19937_64 rng_;
};

struct IdentitySweep {
    std::size_t trials = 0;
    double max_chain_residual = 0;
    double max_mi_asymmetry = 0;
    double min_dpi_margin = 0;  // min over trials of I(X;Y) - I(X;Z)
    std::size_t dpi_failures = 0;
};

// Chain rule, symmetry of I and data processing over seeded random inputs of
// size 2..max_dim per axis.
inline IdentitySweep entropy_identity_sweep(std::size_t trials, std::uint64_t seed, std::size_t max_dim = 8) {
    SimplexSampler s(seed);
    IdentitySweep out;
    out.trials = trials;
    out.min_dpi_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        auto j = s.joint(s.size_between(2, max_dim), s.size_between(2, max_dim));
        auto r = joint_conditional_mutual(j);
        out.max_chain_residual = std::max(out.max_chain_residual, std::fabs(r.h_xy - r.h_x - r.h_y_given_x));
        out.max_chain_residual = std::max(out.max_chain_residual, std::fabs(r.h_xy - r.h_y - r.h_x_given_y));
        out.max_mi_asymmetry = std::max(out.max_mi_asymmetry, std::fabs(r.i_xy - r.i_yx));

        auto m = s.markov(s.size_between(2, max_dim), s.size_between(2, max_dim), s.size_between(2, max_dim));
        auto d = dpi_probe(m);
        out.min_dpi_margin = std::min(out.min_dpi_margin, d.i_xy - d.i_xz);
        if (!d.holds) ++out.dpi_failures;
    }
    return out;
}

}  // namespace ait
