#pragma once

// Worked examples as data.  Each case names a kind, its input, and the expected
// result; run_case recomputes the result with the library and compares.

#include <string>
#include <vector>

#include "ait/report.hpp"

namespace ait::golden {

using Json = io::Json;

struct CaseResult {
    std::string name;
    std::string kind;
    bool pass = false;
    std::string detail;  // mismatch description, empty on success
};

namespace detail {

using report::bit_list;
using report::natural;
using report::rational;

inline std::vector<std::uint32_t> lengths(const Json& j) { return j.get<std::vector<std::uint32_t>>(); }

inline std::vector<ProgramOutput> events(const Json& j) {
    std::vector<ProgramOutput> ev;
    for (const auto& e : j) ev.push_back({io::bits_from(e.at("p"), "p"), io::bits_from(e.at("x"), "x")});
    return ev;
}

// Every key in `want` must appear in `got` with an equal value.
inline std::string compare(const Json& want, const Json& got) {
    for (const auto& [k, v] : want.items()) {
        if (!got.contains(k)) return "missing '" + k + "'";
        if (got.at(k) != v) return k + ": expected " + v.dump() + ", got " + got.at(k).dump();
    }
    return {};
}

inline Json compute(const std::string& kind, const Json& in) {
    if (kind == "number") return Json{{"number", natural(string_to_number(io::bits_from(in.at("x"), "x")))}};
    if (kind == "string") return Json{{"x", number_to_string(io::decimal_natural(in.at("n").get<std::string>())).bits()}};
    if (kind == "leading-one") return Json{{"position", leading_one_position(io::dyadic_from(in.at("alpha")))}};
    if (kind == "tree") {
        PrefixTree t;
        for (const auto& a : in.at("allocated")) t.allocate(io::bits_from(a, "allocated"));
        return Json{{"node", t.allocate_first_available(in.at("depth").get<std::uint32_t>()).bits()}};
    }
    if (kind == "classify") {
        Code c = io::read_code(in.at("code"));
        auto r = classify(c);
        Json out{{"class", to_string(r.code_class)}};
        if (r.witness) {
            // a witness is valid when it has two distinct parses
            out["witness_valid"] = r.witness->first_parse != r.witness->second_parse &&
                                   c.encode(r.witness->first_parse) == r.witness->stream &&
                                   c.encode(r.witness->second_parse) == r.witness->stream;
        }
        if (in.contains("parses"))
            out["parses"] = natural(count_parses(c, io::bits_from(in.at("parses"), "parses")));
        return out;
    }
    if (kind == "kraft") {
        auto k = kraft_sum(lengths(in.at("lengths")));
        return Json{{"sum", k.sum.to_binary_string()}, {"satisfiable", k.satisfiable}};
    }
    if (kind == "construct") return Json{{"codewords", bit_list(kraft_construct(lengths(in.at("lengths"))))}};
    if (kind == "entropy") {
        auto d = io::read_distribution(in);
        return Json{{"H", rational(entropy_exact(d))}};
    }
    if (kind == "sf-code") {
        auto r = shannon_fano(io::read_distribution(in));
        return Json{{"lengths", r.lengths}, {"expected_length", rational(r.expected_length)}};
    }
    if (kind == "sd-run") {
        auto m = parse_sd_machine_text(in.at("machine").get<std::string>());
        auto r = selfdelim_run(m, io::bits_from(in.at("program"), "program"), BitString(), in.value("budget", 1000));
        return Json{{"status", to_string(r.status)}, {"output", r.success() ? Json(r.output.bits()) : Json(nullptr)}};
    }
    if (kind == "census") {
        // smallest incompressible count over n = 0..n_max
        auto family = make_family(in.at("family").get<std::string>());
        auto n_max = in.at("n_max").get<std::uint32_t>();
        DovetailLimits limits;
        limits.max_length = n_max;
        limits.max_phase = in.value("max_phase", 256);
        limits.workers = 1;
        auto table = build_table(*family, limits);
        std::uint64_t least = UINT64_MAX;
        for (std::uint32_t n = 0; n <= n_max; ++n)
            least = std::min(least, ait::census(table, n, in.at("c").get<std::uint32_t>(), true).incompressible);
        return Json{{"min_incompressible", least}};
    }
    if (kind == "allocate") {
        auto a = allocate_stream(events(in.at("events")));
        Json log = Json::array();
        for (const auto& q : a.log()) log.push_back(io::quadruple_json(q));
        return Json{{"log", log}};
    }
    if (kind == "decode")
        return Json{{"x", decode_address(io::bits_from(in.at("address"), "address"), events(in.at("events"))).bits()}};
    if (kind == "code-length") {
        BitString x = io::bits_from(in.at("x"), "x");
        for (const auto& r : code_length_report(events(in.at("events"))))
            if (r.x == x) return Json{{"final_depth", r.final_depth}, {"ceil_neg_log_S", r.ceil_neg_log}, {"gap", r.gap}};
        throw LookupError("no allocation for " + x.literal());
    }
    if (kind == "stabilized") {
        // allocations for x after the first `after` events
        auto a = allocate_stream(events(in.at("events")));
        BitString x = io::bits_from(in.at("x"), "x");
        std::size_t after = in.at("after").get<std::size_t>(), count = 0;
        for (std::size_t i = after; i < a.log().size(); ++i) count += a.log()[i].x == x && a.log()[i].a.has_value();
        return Json{{"allocations", count}};
    }
    if (kind == "selfdelim-stream") {
        BitString stream = io::bits_from(in.at("stream"), "stream");
        auto y = selfdelim_decode(stream, SelfDelimScheme::E1Bar);
        auto z = selfdelim_decode(stream, SelfDelimScheme::Prime, y.consumed);
        BitString t = stream.substr(y.consumed + z.consumed);
        bool reencodes = bar(y.value) + selfdelim_encode(z.value, SelfDelimScheme::Prime) + t == stream;
        return Json{{"y", y.value.bits()}, {"z", z.value.bits()}, {"t", t.bits()}, {"reencodes", reencodes}};
    }
    throw ValidationError("unknown golden case kind '" + kind + "'");
}

}  // namespace detail

inline CaseResult run_case(const Json& c) {
    CaseResult r;
    r.name = c.value("name", "?");
    r.kind = c.value("kind", "?");
    try {
        r.detail = detail::compare(c.at("expect"), detail::compute(r.kind, c.at("input")));
    } catch (const std::exception& e) {
        r.detail = std::string("error: ") + e.what();
    }
    r.pass = r.detail.empty();
    return r;
}

inline std::vector<CaseResult> run_all(const Json& fixture) {
    const Json& cases = fixture.is_array() ? fixture : fixture.at("cases");
    std::vector<CaseResult> out;
    for (const auto& c : cases) out.push_back(run_case(c));
    return out;
}

}  // namespace ait::golden
