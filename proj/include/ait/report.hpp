#pragma once

// JSON report builders shared by the command-line tool and the acceptance
// runner.  Key order is fixed (ordered_json) and nothing depends on timing or
// worker count, so equal inputs give byte-equal reports.

#include <string>
#include <vector>

#include "ait/coding.hpp"
#include "ait/codes.hpp"
#include "ait/dovetail.hpp"
#include "ait/entropy.hpp"
#include "ait/io.hpp"
#include "ait/machine.hpp"

namespace ait::report {

using Json = io::Json;

inline constexpr const char* kToolVersion = "1.0.0";

inline Json bits(const BitString& b) { return b.bits(); }
inline Json bits(const std::optional<BitString>& b) { return b ? Json(b->bits()) : Json(nullptr); }
inline Json dyadic(const DyadicRational& d) { return d.to_binary_string(); }
inline Json rational(const Rational& r) {
    auto den = boost::multiprecision::denominator(r);
    std::string num = boost::multiprecision::numerator(r).str();
    return den == 1 ? num : num + "/" + den.str();
}
inline Json natural(const Natural& n) { return n.str(); }

inline Json bit_list(const std::vector<BitString>& v) {
    Json a = Json::array();
    for (const auto& b : v) a.push_back(b.bits());
    return a;
}

inline Json provenance(const ProgramFamily* family = nullptr) {
    Json p{{"tool", "ait"}, {"tool_version", kToolVersion}};
    if (family) {
        p["machine_family"] = family->name();
        p["machine_family_version"] = family->version();
    }
    return p;
}

inline Json wrap(const std::string& command, Json config, Json results, Json prov) {
    return Json{{"command", command}, {"config", std::move(config)}, {"results", std::move(results)}, {"provenance", std::move(prov)}};
}

inline Json limits(const DovetailLimits& l) {
    return Json{{"max_length", l.max_length}, {"max_phase", l.max_phase}, {"mode", l.budgeted ? "budgeted" : "unbounded"}};
}

// ---------------------------------------------------------------------------
// codes
// ---------------------------------------------------------------------------

inline Json code_table(const Code& c) {
    Json t = Json::object();
    for (const auto& [sym, word] : c.table) t[sym] = word.bits();
    return t;
}

inline Json classification(const Code& c, const ClassificationResult& r) {
    Json j{{"code", code_table(c)}, {"class", to_string(r.code_class)}};
    if (r.witness) {
        j["witness"] = Json{{"stream", r.witness->stream.bits()},
                            {"first_parse", r.witness->first_parse},
                            {"second_parse", r.witness->second_parse}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

inline Json kraft(const std::vector<std::uint32_t>& lengths, const KraftResult& k) {
    return Json{{"lengths", lengths}, {"sum", dyadic(k.sum)}, {"satisfiable", k.satisfiable}};
}

inline Json construct(const std::vector<std::uint32_t>& lengths, const std::vector<BitString>& words) {
    return Json{{"lengths", lengths}, {"codewords", bit_list(words)}};
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

inline Json entropy(const ExactDistribution& d) {
    Json j{{"outcomes", d.outcomes}, {"H", ait::entropy(io::to_float(d))}};
    j["H_exact"] = io::all_dyadic(d) ? rational(entropy_exact(d)) : Json(nullptr);
    return j;
}

inline Json shannon_fano(const ExactDistribution& d) {
    auto r = ait::shannon_fano(d);
    Json j{{"code", code_table(r.code)}, {"lengths", r.lengths}};
    j["expected_length"] = static_cast<double>(r.expected_length);
    j["expected_length_exact"] = rational(r.expected_length);
    j["H"] = ait::entropy(io::to_float(d));
    return j;
}

inline Json joint(const JointSummary& s) {
    return Json{{"H_XY", s.h_xy}, {"H_X", s.h_x}, {"H_Y", s.h_y}, {"H_Y_given_X", s.h_y_given_x},
                {"H_X_given_Y", s.h_x_given_y}, {"I_XY", s.i_xy}, {"I_YX", s.i_yx}};
}

inline Json dpi(const DpiResult& r) { return Json{{"I_XY", r.i_xy}, {"I_XZ", r.i_xz}, {"holds", r.holds}}; }

inline Json sweep(const IdentitySweep& s) {
    return Json{{"trials", s.trials},
                {"max_chain_residual", s.max_chain_residual},
                {"max_mi_asymmetry", s.max_mi_asymmetry},
                {"min_dpi_margin", s.min_dpi_margin},
                {"dpi_failures", s.dpi_failures}};
}

// ---------------------------------------------------------------------------
// machines
// ---------------------------------------------------------------------------

inline Json run(const RunOutcome& o) {
    Json j{{"status", to_string(o.status)}, {"steps", o.steps}};
    j["output"] = o.halted() ? Json(o.output.bits()) : Json(nullptr);
    if (o.status == RunStatus::ProvenLooping)
        j["loop"] = Json{{"first_step", o.loop.first_step}, {"period", o.loop.period}, {"drift", o.loop.drift}};
    return j;
}

inline Json sd_run(const SelfDelimRun& o) {
    Json j{{"status", to_string(o.status)}, {"consumed", o.consumed}, {"steps", o.steps}};
    j["output"] = o.success() ? Json(o.output.bits()) : Json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// dovetail
// ---------------------------------------------------------------------------

inline Json halting_entry(const HaltingEntry& e) {
    Json j{{"program", e.program.bits()}, {"status", to_string(e.status)}};
    if (e.status == ProgramStatus::Halts) {
        j["steps"] = e.steps;
        j["output"] = e.output.bits();
        j["phase"] = e.phase;
    }
    return j;
}

inline Json halting_table(const HaltingTable& t, std::uint32_t n) {
    Json rows = Json::array();
    std::size_t count = (std::size_t{2} << n) - 1;
    for (std::size_t i = 0; i < count; ++i) rows.push_back(halting_entry(t.entries()[i]));
    return rows;
}

inline Json omega(const OmegaResult& r, bool with_table) {
    Json traj = Json::array();
    for (const auto& pt : r.trajectory) traj.push_back(Json{{"phase", pt.phase}, {"S", dyadic(pt.sum)}});
    Json j{{"S", dyadic(r.sum)},
           {"S_fraction", r.sum.to_fraction_string()},
           {"bound", r.exact ? "exact" : "lower-bound"},
           {"halting_programs", r.events.size()},
           {"trajectory", traj}};
    if (with_table) j["table"] = halting_table(r.table, r.table.max_length());
    return j;
}

inline Json omega_to_halting(const OmegaToHaltingResult& r) {
    BitString chi = r.table.chi(r.n);
    return Json{{"n", r.n},
                {"prefix", r.prefix.bits()},
                {"stop_phase", r.stop_phase},
                {"events_used", r.events_used},
                {"S_at_stop", dyadic(r.sum_at_stop)},
                {"S_in_horizon", dyadic(r.sum_in_horizon)},
                {"inconsistent", r.inconsistent},
                {"chi", chi.bits()},
                {"table", halting_table(r.table, r.n)}};
}

inline Json chi(const HaltingTable& t, std::uint32_t n, bool complete) {
    return Json{{"n", n}, {"bits", t.chi(n).bits()}, {"length", t.chi(n).size()}, {"complete", complete}};
}

inline Json estimate(const ComplexityEstimate& e) {
    Json j{{"target", e.target.bits()}};
    j["value"] = e.value ? Json(*e.value) : Json(nullptr);
    j["witness"] = bits(e.witness);
    j["phase"] = e.phase;
    j["source"] = e.fallback ? "print-program" : (e.witness ? "search" : "none");
    j["bound"] = "upper";
    return j;
}

inline Json busy_beaver(const BusyBeaverTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back(Json{{"n", r.n}, {"B", r.steps}, {"witness", bits(r.witness)}});
    return Json{{"bound", t.exact ? "exact" : "lower-bound"}, {"rows", rows}};
}

inline Json census(const Census& c) {
    return Json{{"n", c.n},
                {"c", c.c},
                {"omega_prime", c.omega_prime},
                {"omega_n", c.omega_n},
                {"incompressible", c.incompressible},
                {"bound", natural(c.bound)},
                {"holds", c.holds},
                {"counts", c.exact ? "exact" : "bounds"}};
}

inline Json gap(const InvarianceGap& g) {
    Json rows = Json::array();
    for (const auto& r : g.rows)
        rows.push_back(Json{{"x", r.x.bits()}, {"a", estimate(r.a)}, {"b", estimate(r.b)}, {"gap", r.gap}});
    return Json{{"max_gap", g.max_gap}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// coding
// ---------------------------------------------------------------------------

inline std::vector<Json> allocation_log(const Allocator& a) {
    std::vector<Json> out;
    for (const auto& q : a.log()) out.push_back(io::quadruple_json(q));
    return out;
}

inline Json allocation_summary(const Allocator& a) {
    Json code = Json::object();
    for (const auto& [node, x] : a.code()) code[node.bits()] = x.bits();
    return Json{{"events", a.log().size()},
                {"nodes", a.tree().allocated_count()},
                {"mass", dyadic(a.tree().mass())},
                {"code", code}};
}

inline Json code_lengths(const std::vector<CodeLengthRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back(Json{{"x", r.x.bits()},
                         {"final_depth", r.final_depth},
                         {"S", dyadic(r.final_s)},
                         {"ceil_neg_log_S", r.ceil_neg_log},
                         {"gap", r.gap},
                         {"nodes", r.nodes}});
    return a;
}

inline Json semimeasure(const SemimeasureResult& r) {
    Json per = Json::object();
    for (const auto& [x, progs] : r.programs) {
        Json ivs = Json::array();
        for (const auto& iv : r.intervals.at(x)) ivs.push_back(Json::array({dyadic(iv.lower), dyadic(iv.upper)}));
        per[x.bits()] = Json{{"mu", dyadic(r.mu.at(x))}, {"intervals", ivs}, {"programs", bit_list(progs)}};
    }
    return Json{{"total", dyadic(r.total)}, {"strings", per}};
}

inline Json domination(const DominationReport& d) {
    Json rows = Json::array();
    for (const auto& r : d.rows)
        rows.push_back(Json{{"x", r.x.bits()}, {"lifted", dyadic(r.lifted)}, {"scaled", dyadic(r.scaled)}, {"equal", r.equal}});
    return Json{{"lift", d.lift.bits()}, {"all_equal", d.all_equal}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Flat output
// ---------------------------------------------------------------------------

inline std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

// Rows of flat objects as CSV; nested values are rejected.
inline std::string to_csv(const Json& rows) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_object()) throw ValidationError("csv output needs a flat table");
    std::string out;
    bool first = true;
    for (const auto& [k, v] : rows[0].items()) {
        out += (first ? "" : ",") + k;
        first = false;
    }
    out += "\n";
    for (const auto& row : rows) {
        first = true;
        for (const auto& [k, v] : row.items()) {
            if (v.is_structured()) throw ValidationError("csv output needs a flat table; field '" + k + "' is nested");
            std::string cell = scalar_text(v);
            if (cell.find_first_of(",\"") != std::string::npos) {
                std::string q = "\"";
                for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
                cell = q + "\"";
            }
            out += (first ? "" : ",") + cell;
            first = false;
        }
        out += "\n";
    }
    return out;
}

// Aligned columns for reading in a terminal.
inline std::string to_table(const Json& rows) {
    to_csv(rows);  // same flatness rules
    std::vector<std::vector<std::string>> cells(1);
    for (const auto& [k, v] : rows[0].items()) cells[0].push_back(k);
    for (const auto& row : rows) {
        cells.emplace_back();
        for (const auto& [k, v] : row.items()) cells.back().push_back(scalar_text(v));
    }
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::string out;
    for (const auto& r : cells) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            line += r[i];
            if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + "\n";
    }
    return out;
}

}  // namespace ait::report
