#pragma once

// File formats.  Bit strings are JSON strings of 0/1 ("" is epsilon), exact
// probabilities are "a/b" or decimal strings, dyadics are binary fractions
// ("0.001011") or "a/2^k" fractions.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ait/coding.hpp"
#include "ait/codes.hpp"
#include "ait/entropy.hpp"
#include "ait/errors.hpp"

namespace ait::io {

using Json = nlohmann::ordered_json;

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline Json read_json(const std::string& path) { return parse_json(read_text(path), path); }

inline BitString bits_from(const Json& j, const char* field) {
    if (!j.is_string()) throw ValidationError(std::string(field) + ": expected a bit string");
    auto s = j.get<std::string>();
    return s.empty() ? BitString() : BitString(s);
}

// Decimal digits only; cpp_int would read a leading 0 as octal.
inline Natural decimal_natural(const std::string& digits) {
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("bad number '" + digits + "'");
    auto first = digits.find_first_not_of('0');
    return first == std::string::npos ? Natural(0) : Natural(digits.substr(first));
}

// "1/3", "0.25", "1", or a JSON number (taken at its exact binary value).
inline Rational rational_from(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (!(v >= 0)) throw ValidationError("probability must be >= 0");
        int e = 0;
        double m = std::frexp(v, &e);
        auto mant = static_cast<long long>(std::ldexp(m, 53));
        e -= 53;
        Rational r(mant);
        if (e > 0) r *= Rational(Natural(1) << e);
        else if (e < 0) r /= Rational(Natural(1) << -e);
        return r;
    }
    if (!j.is_string()) throw ValidationError("expected a number or a fraction string");
    auto s = j.get<std::string>();
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            Natural d = decimal_natural(s.substr(slash + 1));
            if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
            return Rational(decimal_natural(s.substr(0, slash)), d);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits.empty()) throw ValidationError("bad number '" + s + "'");
            Natural scale = 1;
            for (std::size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
            return Rational(decimal_natural(digits), scale);
        }
        return Rational(decimal_natural(s));
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const Error*>(&e)) throw;
        throw ValidationError("bad number '" + s + "'");
    }
}

inline DyadicRational dyadic_from(const Json& j) {
    if (!j.is_string()) throw ValidationError("dyadic values are written as strings, e.g. \"0.011\" or \"3/8\"");
    return DyadicRational::parse(j.get<std::string>());
}

// {"outcomes": [...], "p": [...]}, {"p": [...]}, or a bare array.
inline ExactDistribution read_distribution(const Json& j) {
    const Json& p = j.is_array() ? j : j.at("p");
    if (!p.is_array()) throw ValidationError("distribution: \"p\" must be an array");
    ExactDistribution d;
    for (const auto& v : p) d.p.push_back(rational_from(v));
    if (j.is_object() && j.contains("outcomes")) {
        for (const auto& o : j.at("outcomes")) d.outcomes.push_back(o.get<std::string>());
        if (d.outcomes.size() != d.p.size()) throw ValidationError("distribution: outcomes and p differ in length");
    } else {
        for (std::size_t i = 0; i < d.p.size(); ++i) d.outcomes.push_back("x" + std::to_string(i + 1));
    }
    return d;
}

// CSV: "outcome,p" per line, or just "p"; a header line without a number is skipped.
inline ExactDistribution read_distribution_csv(const std::string& text) {
    ExactDistribution d;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto comma = line.rfind(',');
        std::string name = comma == std::string::npos ? "" : line.substr(0, comma);
        std::string value = comma == std::string::npos ? line : line.substr(comma + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t") + 1);
        bool header = first && value.find_first_of("0123456789") == std::string::npos;
        first = false;
        if (header) continue;
        d.p.push_back(rational_from(Json(value)));
        d.outcomes.push_back(name.empty() ? "x" + std::to_string(d.p.size()) : name);
    }
    return d;
}

inline Distribution to_float(const ExactDistribution& d) {
    Distribution f;
    f.outcomes = d.outcomes;
    for (const auto& v : d.p) f.p.push_back(static_cast<double>(v));
    return f;
}

inline bool all_dyadic(const ExactDistribution& d) {
    for (const auto& v : d.p) {
        auto den = boost::multiprecision::denominator(v);
        if ((den & (den - 1)) != 0) return false;
    }
    return true;
}

// {"A": "10", "B": "0"} in file order, or "A:10,B:0" / "10,0" on the command line.
inline Code read_code(const Json& j) {
    if (!j.is_object()) throw ValidationError("code: expected an object mapping symbols to codewords");
    Code c;
    for (const auto& [sym, word] : j.items()) c.table.emplace_back(sym, bits_from(word, "codeword"));
    return c;
}

inline Code parse_code_list(const std::string& text) {
    Code c;
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        ++i;
        auto colon = item.find(':');
        std::string sym = colon == std::string::npos ? "s" + std::to_string(i) : item.substr(0, colon);
        std::string word = colon == std::string::npos ? item : item.substr(colon + 1);
        c.table.emplace_back(sym, BitString(word.empty() ? "e" : word));
    }
    return c;
}

inline std::vector<std::vector<double>> matrix_from(const Json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array of rows");
    std::vector<std::vector<double>> m;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError(std::string(what) + ": rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) r.push_back(static_cast<double>(rational_from(v)));
        m.push_back(std::move(r));
    }
    return m;
}

inline std::vector<double> vector_from(const Json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
    std::vector<double> v;
    for (const auto& x : j) v.push_back(static_cast<double>(rational_from(x)));
    return v;
}

// {"joint": [[...]]} or a bare matrix.
inline JointDistribution read_joint(const Json& j) { return matrix_from(j.is_object() ? j.at("joint") : j, "joint"); }

inline MarkovTriple read_markov(const Json& j) {
    return {vector_from(j.at("px"), "px"), matrix_from(j.at("y_given_x"), "y_given_x"), matrix_from(j.at("z_given_y"), "z_given_y")};
}

// ---------------------------------------------------------------------------
// JSON lines
// ---------------------------------------------------------------------------

template <class F>
void for_each_line(const std::string& text, const std::string& where, F&& f) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = parse_json(line, where + ":" + std::to_string(n));
        try {
            f(j);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

inline std::vector<ProgramOutput> read_events(const std::string& text, const std::string& where = "events") {
    std::vector<ProgramOutput> ev;
    for_each_line(text, where, [&](const Json& j) { ev.push_back({bits_from(j.at("p"), "p"), bits_from(j.at("x"), "x")}); });
    return ev;
}

inline std::vector<SemimeasureIncrement> read_increments(const std::string& text, const std::string& where = "increments") {
    std::vector<SemimeasureIncrement> inc;
    for_each_line(text, where, [&](const Json& j) { inc.push_back({bits_from(j.at("x"), "x"), dyadic_from(j.at("delta"))}); });
    return inc;
}

inline Json event_json(const ProgramOutput& e) { return Json{{"p", e.p.bits()}, {"x", e.x.bits()}}; }

inline Json quadruple_json(const AllocationQuadruple& q) {
    Json j{{"p", q.p.bits()}, {"x", q.x.bits()}, {"S", q.s.to_binary_string()}};
    j["a"] = q.a ? Json(q.a->bits()) : Json(nullptr);
    return j;
}

inline AllocationQuadruple quadruple_from(const Json& j) {
    AllocationQuadruple q{bits_from(j.at("p"), "p"), bits_from(j.at("x"), "x"), dyadic_from(j.at("S")), std::nullopt};
    if (!j.at("a").is_null()) q.a = bits_from(j.at("a"), "a");
    return q;
}

inline std::string to_json_lines(const std::vector<Json>& rows) {
    std::string out;
    for (const auto& r : rows) out += r.dump() + "\n";
    return out;
}

}  // namespace ait::io
