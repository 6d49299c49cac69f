#pragma once

// The `ait` command line.  ait_main is a plain function over argv and two
// streams so the acceptance runner can call it in-process.
//
// Exit status: 0 success, 1 domain or input errors (and failed golden cases),
// 2 usage errors.

#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ait/report.hpp"
#include "ait_golden_fixture.hpp"
#include "golden.hpp"

namespace ait::cli {

using Json = io::Json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Output {
    Json report;
    Json rows;  // flat table for csv/table output; null when the result is nested
    int status = 0;
};

// Everything any subcommand can set.  Each subcommand binds the subset it uses.
struct Options {
    std::string format = "json";
    std::string seed = "1";
    unsigned workers = 0;

    // codes
    std::string code_file, words, scheme = "E1-bar", x, stream;
    std::vector<std::uint32_t> lengths;
    std::size_t n_bits = 0, pos = 0;

    // entropy
    std::string dist_file, joint_file, markov_file;
    std::vector<std::string> probs;
    std::size_t trials = 1000, max_dim = 8;

    // machines
    std::string machine_file, sd_file, input, program, aux, index, encoding;
    std::uint64_t budget = 10000;
    std::size_t count = 10;
    std::string start = "1";

    // dovetail
    std::string family, against, mode, semantics = "budgeted", prefix;
    std::uint32_t max_len = 8, n = 8, c = 0;
    std::uint64_t max_phase = 256;
    std::vector<std::string> targets;
    bool with_table = false;

    // coding
    std::string events_file, log_file, increments_file, address, lift;
    std::size_t synthetic = 0, strings = 100;

    std::string fixtures;
};

namespace detail {

inline std::uint64_t seed_value(const Options& o) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(o.seed, &used);
        if (used != o.seed.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("--seed must be a non-negative integer, got '" + o.seed + "'");
    }
}

inline BitString bits_arg(const std::string& s) { return BitString(s); }

inline DovetailLimits limits(const Options& o, std::uint32_t max_len) {
    if (o.semantics != "budgeted" && o.semantics != "unbounded")
        throw UsageError("--mode must be budgeted or unbounded, got '" + o.semantics + "'");
    if (max_len > 22) throw DomainError("max length " + std::to_string(max_len) + " is beyond desk scale (22)");
    DovetailLimits l;
    l.max_length = max_len;
    l.max_phase = o.max_phase;
    l.budgeted = o.semantics == "budgeted";
    l.workers = o.workers;
    return l;
}

inline FamilyPtr family(const Options& o, const std::string& fallback) {
    if (!o.sd_file.empty()) {
        auto m = parse_sd_machine_text(io::read_text(o.sd_file));
        return std::make_shared<SdFamily>(std::move(m), bits_arg(o.aux), "sd:" + o.sd_file);
    }
    return make_family(o.family.empty() ? fallback : o.family, bits_arg(o.aux));
}

inline ExactDistribution distribution(const Options& o) {
    if (!o.dist_file.empty()) {
        bool csv = o.dist_file.size() >= 4 && o.dist_file.compare(o.dist_file.size() - 4, 4, ".csv") == 0;
        return csv ? io::read_distribution_csv(io::read_text(o.dist_file)) : io::read_distribution(io::read_json(o.dist_file));
    }
    if (o.probs.empty()) throw UsageError("give --dist FILE or --p LIST");
    Json arr = Json::array();
    for (const auto& p : o.probs) arr.push_back(p);
    return io::read_distribution(arr);
}

inline Code code(const Options& o) {
    if (!o.code_file.empty()) return io::read_code(io::read_json(o.code_file));
    if (o.words.empty()) throw UsageError("give --code FILE or --words LIST");
    return io::parse_code_list(o.words);
}

inline MachineDescription machine(const Options& o) {
    if (!o.machine_file.empty()) return parse_machine_text(io::read_text(o.machine_file));
    if (!o.index.empty()) return machine_by_index(io::decimal_natural(o.index));
    if (!o.encoding.empty()) return decode_machine(bits_arg(o.encoding));
    throw UsageError("give --machine FILE, --index N or --encoding BITS");
}

inline std::vector<ProgramOutput> events(const Options& o) {
    if (!o.events_file.empty()) return io::read_events(io::read_text(o.events_file), o.events_file);
    if (o.synthetic > 0) return synthetic_stream(o.synthetic, o.strings, seed_value(o));
    throw UsageError("give --events FILE or --synthetic N");
}

inline Json rows_of(const std::vector<Json>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(r);
    return a;
}

// ---------------------------------------------------------------------------
// Handlers.  Each returns results, optional flat rows, and the family used.
// ---------------------------------------------------------------------------

struct Result {
    Json results;
    Json rows;
    FamilyPtr family;
    int status = 0;
};

inline Result codes_classify(const Options& o) {
    Code c = code(o);
    return {report::classification(c, classify(c)), nullptr, nullptr};
}

inline Result codes_kraft(const Options& o) {
    auto k = kraft_sum(o.lengths);
    Json r = report::kraft(o.lengths, k);
    return {r, Json::array({Json{{"sum", r["sum"]}, {"satisfiable", k.satisfiable}}}), nullptr};
}

inline Result codes_construct(const Options& o) {
    auto words = kraft_construct(o.lengths);
    Json rows = Json::array();
    for (std::size_t i = 0; i < words.size(); ++i) rows.push_back(Json{{"length", o.lengths[i]}, {"codeword", words[i].bits()}});
    return {report::construct(o.lengths, words), rows, nullptr};
}

inline Result codes_encode(const Options& o) {
    BitString x = bits_arg(o.x);
    BitString code = o.scheme == "balanced" ? balanced_encode(x) : selfdelim_encode(x, parse_scheme(o.scheme));
    Json r{{"scheme", o.scheme}, {"x", x.bits()}, {"code", code.bits()}, {"length", code.size()}};
    return {r, Json::array({r}), nullptr};
}

inline Result codes_decode(const Options& o) {
    BitString in = bits_arg(o.stream);
    Json r{{"scheme", o.scheme}};
    if (o.scheme == "balanced") {
        if (o.n_bits == 0) throw UsageError("balanced decoding needs --n");
        r["x"] = balanced_decode(in, o.n_bits).bits();
        r["consumed"] = in.size();
    } else {
        auto d = selfdelim_decode(in, parse_scheme(o.scheme), o.pos);
        r["x"] = d.value.bits();
        r["consumed"] = d.consumed;
        r["rest"] = in.substr(o.pos + d.consumed).bits();
    }
    return {r, Json::array({r}), nullptr};
}

inline Result entropy_compute(const Options& o) {
    if (!o.joint_file.empty()) {
        auto j = io::read_joint(io::read_json(o.joint_file));
        Json r = report::joint(joint_conditional_mutual(j));
        return {r, Json::array({r}), nullptr};
    }
    auto d = distribution(o);
    Json rows = Json::array();
    for (std::size_t i = 0; i < d.p.size(); ++i)
        rows.push_back(Json{{"outcome", d.outcomes[i]}, {"p", report::rational(d.p[i])}, {"p_float", static_cast<double>(d.p[i])}});
    return {report::entropy(d), rows, nullptr};
}

inline Result entropy_sf(const Options& o) {
    auto d = distribution(o);
    Json r = report::shannon_fano(d);
    Json rows = Json::array();
    for (std::size_t i = 0; i < d.p.size(); ++i)
        rows.push_back(Json{{"outcome", d.outcomes[i]},
                            {"p", report::rational(d.p[i])},
                            {"length", r["lengths"][i]},
                            {"codeword", r["code"][d.outcomes[i]]}});
    return {r, rows, nullptr};
}

inline Result entropy_dpi(const Options& o) {
    if (!o.markov_file.empty()) {
        Json r = report::dpi(dpi_probe(io::read_markov(io::read_json(o.markov_file))));
        return {r, Json::array({r}), nullptr};
    }
    Json r = report::sweep(entropy_identity_sweep(o.trials, seed_value(o), o.max_dim));
    return {r, Json::array({r}), nullptr};
}

inline Json machine_summary(const MachineDescription& m) {
    BitString e = encode_machine(m);
    return Json{{"index", report::natural(index_of_machine(m))},
                {"encoding", e.bits()},
                {"length", e.size()},
                {"states", m.canonical().state_count()},
                {"rules", m.rules.size()},
                {"text", to_machine_text(m.canonical())}};
}

inline Result machine_run(const Options& o) {
    if (!o.program.empty()) {
        Json r = report::run(universal_run(bits_arg(o.program), o.budget));
        return {r, nullptr, std::make_shared<UniversalFamily>()};
    }
    return {report::run(run(machine(o), bits_arg(o.input), o.budget)), nullptr, nullptr};
}

inline Result machine_encode(const Options& o) {
    BitString e = encode_machine(machine(o));
    return {Json{{"encoding", e.bits()}, {"length", e.size()}}, nullptr, nullptr};
}

inline Result machine_index(const Options& o) {
    Json r = machine_summary(machine(o));
    return {r, Json::array({r}), nullptr};
}

inline Result machine_enumerate(const Options& o) {
    Json rows = Json::array();
    Natural i = io::decimal_natural(o.start);
    if (i < 1) throw DomainError("machine indices start at 1");
    for (std::size_t k = 0; k < o.count; ++k, ++i) {
        auto m = machine_by_index(i);
        Json s = machine_summary(m);
        s.erase("text");
        rows.push_back(s);
    }
    return {Json{{"machines", rows}}, rows, nullptr};
}

inline Result machine_sd_run(const Options& o) {
    if (o.sd_file.empty()) throw UsageError("give --sd-machine FILE");
    auto m = parse_sd_machine_text(io::read_text(o.sd_file));
    return {report::sd_run(selfdelim_run(m, bits_arg(o.program), bits_arg(o.aux), o.budget)), nullptr, nullptr};
}

inline Result omega_compute(const Options& o) {
    auto f = family(o, "ref-prefix");
    auto r = omega_lower(*f, limits(o, o.max_len));
    return {report::omega(r, o.with_table), nullptr, f};
}

inline Result omega_halting(const Options& o) {
    auto f = family(o, "ref-prefix");
    if (o.prefix.empty()) throw UsageError("give --prefix BITS");
    auto r = ait::omega_to_halting(*f, bits_arg(o.prefix), o.n, limits(o, std::max(o.max_len, o.n)));
    Json rows = Json::array();
    for (const auto& e : report::halting_table(r.table, o.n)) rows.push_back(Json{{"program", e["program"]}, {"status", e["status"]}});
    return {report::omega_to_halting(r), rows, f};
}

inline Json flat_entry(const HaltingEntry& e) {
    bool h = e.status == ProgramStatus::Halts;
    return Json{{"program", e.program.bits()},
                {"status", to_string(e.status)},
                {"steps", h ? Json(e.steps) : Json(nullptr)},
                {"output", h ? Json(e.output.bits()) : Json(nullptr)},
                {"phase", h ? Json(e.phase) : Json(nullptr)}};
}

inline Result chi_table(const Options& o) {
    auto f = family(o, "ref-prefix");
    auto t = build_table(*f, limits(o, std::max(o.max_len, o.n)));
    bool complete = true;
    std::size_t count = (std::size_t{2} << o.n) - 1;
    Json rows = Json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& e = t.entries()[i];
        complete = complete && e.status != ProgramStatus::Cutoff && e.status != ProgramStatus::Unknown;
        rows.push_back(flat_entry(e));
    }
    Json r = report::chi(t, o.n, complete);
    r["table"] = rows;
    return {r, rows, f};
}

inline Result complexity_estimate(const Options& o) {
    std::string fallback = o.mode == "plain" ? "ref-plain" : o.mode == "prefix" || o.mode.empty() ? "ref-prefix" : "";
    if (fallback.empty()) throw UsageError("--mode must be plain or prefix, got '" + o.mode + "'");
    if (o.targets.empty()) throw UsageError("give at least one --target BITS");
    auto f = family(o, fallback);
    ShortestPrograms index(build_table(*f, limits(o, o.max_len)));
    Json list = Json::array(), rows = Json::array();
    for (const auto& t : o.targets) {
        auto e = estimate_from(*f, index, bits_arg(t));
        verify_witness(*f, e);
        Json j = report::estimate(e);
        list.push_back(j);
        rows.push_back(j);
    }
    return {Json{{"estimates", list}}, rows, f};
}

inline Result complexity_gap(const Options& o) {
    if (o.against.empty()) throw UsageError("give --against FAMILY");
    if (o.targets.empty()) throw UsageError("give at least one --target BITS");
    auto a = family(o, "ref-prefix");
    auto b = make_family(o.against, bits_arg(o.aux));
    std::vector<BitString> xs;
    for (const auto& t : o.targets) xs.push_back(bits_arg(t));
    Json r = report::gap(invariance_gap(*a, *b, xs, limits(o, o.max_len)));
    r["against"] = b->name();
    Json rows = Json::array();
    for (const auto& row : r["rows"])
        rows.push_back(Json{{"x", row["x"]}, {"a", row["a"]["value"]}, {"b", row["b"]["value"]}, {"gap", row["gap"]}});
    return {r, rows, a};
}

inline Result busy_beaver_cmd(const Options& o) {
    auto f = family(o, "ref-prefix");
    auto l = limits(o, std::max(o.max_len, o.n));
    if (!o.prefix.empty()) {
        auto row = bb_from_omega(*f, bits_arg(o.prefix), o.n, l);
        Json r{{"n", row.n}, {"B", row.steps}, {"witness", report::bits(row.witness)}, {"via", "omega prefix " + o.prefix}};
        return {r, Json::array({r}), f};
    }
    auto t = busy_beaver(*f, o.n, l);
    Json r = report::busy_beaver(t);
    return {r, r["rows"], f};
}

inline Result census_cmd(const Options& o) {
    auto f = family(o, "ref-plain");
    auto r = ait::census(*f, o.n, o.c, limits(o, std::max(o.max_len, o.n)));
    Json j = report::census(r);
    Json flat = j;
    flat.erase("omega_prime");
    return {j, Json::array({flat}), f};
}

inline Result coding_allocate(const Options& o) {
    auto a = allocate_stream(events(o));
    auto log = report::allocation_log(a);
    if (!o.log_file.empty()) {
        std::ofstream out(o.log_file, std::ios::binary);
        if (!out) throw ValidationError("cannot write '" + o.log_file + "'");
        out << io::to_json_lines(log);
    }
    Json r = report::allocation_summary(a);
    r["code_lengths"] = report::code_lengths(code_length_report(a));
    r["log"] = rows_of(log);
    return {r, rows_of(log), nullptr};
}

inline Result coding_decode(const Options& o) {
    if (o.address.empty()) throw UsageError("give --addr BITS");
    BitString a = bits_arg(o.address);
    Json r{{"address", a.bits()}, {"x", decode_address(a, events(o)).bits()}};
    return {r, Json::array({r}), nullptr};
}

inline Result coding_semimeasure(const Options& o) {
    std::vector<SemimeasureIncrement> inc;
    if (!o.increments_file.empty()) inc = io::read_increments(io::read_text(o.increments_file), o.increments_file);
    else if (o.synthetic > 0) inc = synthetic_increments(o.synthetic, o.strings, seed_value(o));
    else throw UsageError("give an increments FILE or --synthetic N");
    return {report::semimeasure(semimeasure_to_programs(inc)), nullptr, nullptr};
}

inline Result coding_dominate(const Options& o) {
    Json r = report::domination(domination_probe(bits_arg(o.lift), events(o)));
    return {r, r["rows"], nullptr};
}

inline Result golden_cmd(const Options& o) {
    Json fixture = o.fixtures.empty() ? io::parse_json(kGoldenFixture, "built-in fixture") : io::read_json(o.fixtures);
    auto cases = golden::run_all(fixture);
    Json rows = Json::array();
    std::size_t passed = 0;
    for (const auto& c : cases) {
        passed += c.pass;
        rows.push_back(Json{{"name", c.name}, {"kind", c.kind}, {"pass", c.pass}, {"detail", c.detail}});
    }
    Json r{{"cases", rows}, {"passed", passed}, {"failed", cases.size() - passed}, {"total", cases.size()}};
    return {r, rows, nullptr, passed == cases.size() ? 0 : 1};
}

// Echo of the options the leaf subcommand accepts, as given or defaulted.
inline Json config_echo(const CLI::App& leaf) {
    Json cfg = Json::object();
    for (const CLI::Option* opt : leaf.get_options()) {
        std::string name = !opt->get_lnames().empty() ? opt->get_lnames().front() : opt->get_name();
        if (name.empty() || name == "help") continue;
        bool many = opt->get_items_expected_max() > 1;
        if (opt->count() > 0) {
            auto res = opt->results();
            cfg[name] = many ? Json(res) : Json(res.back());
        } else if (many) {
            cfg[name] = Json::array();
        } else if (opt->get_items_expected_max() == 0) {
            cfg[name] = false;
        } else {
            std::string def = opt->get_default_str();
            cfg[name] = def.empty() ? Json(nullptr) : Json(def);
        }
    }
    return cfg;
}

}  // namespace detail

inline int ait_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Executable algorithmic information theory: prefix codes, entropy, Turing machines, "
                 "dovetailed halting probabilities and the coding-theorem allocator.",
                 "ait"};
    app.set_config("--config", "", "read options from a TOML/INI file; flags on the command line win");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "json, csv or table (csv and table only for flat results)")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--seed", o.seed, "random seed, echoed verbatim in reports");
    app.add_option("--workers", o.workers, "dovetail worker threads; 0 reads AIT_WORKERS, else all cores");

    std::function<detail::Result(const Options&)> action;
    const CLI::App* leaf = nullptr;
    std::string command;
    auto leaf_cmd = [&](CLI::App* parent, const std::string& name, const std::string& help,
                        detail::Result (*fn)(const Options&)) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->callback([&, sub, fn, parent, name] {
            action = fn;
            leaf = sub;
            command = parent == &app ? name : parent->get_name() + " " + name;
        });
        return sub;
    };
    auto group = [&](const std::string& name, const std::string& help) {
        CLI::App* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };
    auto dovetail_opts = [&](CLI::App* s, bool with_len) {
        s->add_option("--family", o.family, "ref-plain, ref-prefix, universal or tm:N");
        s->add_option("--sd-machine", o.sd_file, "self-delimiting machine file used as the family");
        s->add_option("--aux", o.aux, "auxiliary input given to every program");
        if (with_len) s->add_option("--max-len", o.max_len, "longest program length dovetailed");
        s->add_option("--max-phase", o.max_phase, "last dovetail phase");
    };

    // codes
    auto* codes = group("codes", "prefix codes, Kraft's inequality, self-delimiting codecs");
    auto* cl = leaf_cmd(codes, "classify", "singular / not UD / UD not prefix / prefix, with a shortest ambiguity", detail::codes_classify);
    cl->add_option("--code", o.code_file, "JSON object mapping symbols to codewords");
    cl->add_option("--words", o.words, "inline code, e.g. A:0,B:10,C:11");
    leaf_cmd(codes, "kraft", "Kraft sum of codeword lengths", detail::codes_kraft)
        ->add_option("--lengths", o.lengths, "comma-separated lengths")->delimiter(',')->required();
    leaf_cmd(codes, "construct", "prefix code with the given lengths, dictionary order", detail::codes_construct)
        ->add_option("--lengths", o.lengths, "comma-separated lengths")->delimiter(',')->required();
    auto* enc = leaf_cmd(codes, "encode", "self-delimiting or balanced encoding of a string", detail::codes_encode);
    enc->add_option("--scheme", o.scheme, "E0, E1-zeros, E1-bar, E2, prime or balanced");
    enc->add_option("--x", o.x, "string to encode (e for the empty string)")->required();
    auto* dec = leaf_cmd(codes, "decode", "decode one codeword", detail::codes_decode);
    dec->add_option("--scheme", o.scheme, "E0, E1-zeros, E1-bar, E2, prime or balanced");
    dec->add_option("--bits", o.stream, "input stream")->required();
    dec->add_option("--pos", o.pos, "offset of the codeword in the stream");
    dec->add_option("--n", o.n_bits, "string length (balanced only)");

    // entropy
    auto* ent = group("entropy", "entropy, Shannon-Fano codes, information identities");
    auto* ec = leaf_cmd(ent, "compute", "H of a distribution, or the joint summary of a matrix", detail::entropy_compute);
    ec->add_option("--dist", o.dist_file, "distribution JSON {\"outcomes\": [...], \"p\": [...]}, or CSV outcome,p");
    ec->add_option("--p", o.probs, "inline probabilities, e.g. 1/2,1/4,1/4")->delimiter(',');
    ec->add_option("--joint", o.joint_file, "joint distribution JSON {\"joint\": [[...]]}");
    auto* sf = leaf_cmd(ent, "sf-code", "Shannon-Fano code with lengths ceil(-log p)", detail::entropy_sf);
    sf->add_option("--dist", o.dist_file, "distribution JSON");
    sf->add_option("--p", o.probs, "inline probabilities")->delimiter(',');
    auto* dp = leaf_cmd(ent, "dpi", "data-processing inequality on a Markov chain, or a seeded sweep", detail::entropy_dpi);
    dp->add_option("--markov", o.markov_file, "JSON {\"px\", \"y_given_x\", \"z_given_y\"}");
    dp->add_option("--trials", o.trials, "random joints and chains in the sweep");
    dp->add_option("--max-dim", o.max_dim, "largest alphabet in the sweep");

    // machines
    auto* mach = group("machine", "Turing machines, their encodings and enumeration");
    auto* mr = leaf_cmd(mach, "run", "run a machine on an input, or a universal program", detail::machine_run);
    mr->add_option("--machine", o.machine_file, "machine text file, one rule 'q s a q2' per line");
    mr->add_option("--index", o.index, "machine number in the enumeration");
    mr->add_option("--encoding", o.encoding, "machine encoding bits");
    mr->add_option("--input", o.input, "input bits");
    mr->add_option("--program", o.program, "universal program bar(i) x, instead of a machine");
    mr->add_option("--budget", o.budget, "step budget");
    auto* me = leaf_cmd(mach, "encode", "binary encoding of a machine", detail::machine_encode);
    me->add_option("--machine", o.machine_file, "machine text file")->required();
    auto* mi = leaf_cmd(mach, "index", "index, encoding and text of a machine", detail::machine_index);
    mi->add_option("--machine", o.machine_file, "machine text file");
    mi->add_option("--index", o.index, "machine number");
    mi->add_option("--encoding", o.encoding, "machine encoding bits");
    auto* mn = leaf_cmd(mach, "enumerate", "consecutive machines of the enumeration", detail::machine_enumerate);
    mn->add_option("--count", o.count, "how many");
    mn->add_option("--start", o.start, "first index");
    auto* ms = leaf_cmd(mach, "sd-run", "run a self-delimiting machine on a program", detail::machine_sd_run);
    ms->add_option("--sd-machine", o.sd_file, "machine file, one rule 'q p w a q2' per line")->required();
    ms->add_option("--program", o.program, "program bits");
    ms->add_option("--aux", o.aux, "auxiliary input");
    ms->add_option("--budget", o.budget, "step budget");

    // dovetail
    auto* om = group("omega", "halting probability by dovetailing");
    auto* oc = leaf_cmd(om, "compute", "lower bound on the halting probability", detail::omega_compute);
    dovetail_opts(oc, true);
    oc->add_option("--mode", o.semantics, "budgeted or unbounded");
    oc->add_flag("--table", o.with_table, "include the halting table");
    auto* oh = leaf_cmd(om, "halting", "halting table for |p| <= n from a prefix of the probability", detail::omega_halting);
    dovetail_opts(oh, true);
    oh->add_option("--mode", o.semantics, "budgeted or unbounded");
    oh->add_option("--prefix", o.prefix, "first bits of the halting probability")->required();
    oh->add_option("--n", o.n, "program length bound");

    auto* chi = group("chi", "halting sequences");
    auto* ct = leaf_cmd(chi, "table", "halting bits of every program with |p| <= n", detail::chi_table);
    dovetail_opts(ct, true);
    ct->add_option("--mode", o.semantics, "budgeted or unbounded");
    ct->add_option("--n", o.n, "program length bound");

    auto* cx = group("complexity", "upper bounds on complexity");
    auto* ce = leaf_cmd(cx, "estimate", "shortest discovered program, else the print-program bound", detail::complexity_estimate);
    dovetail_opts(ce, true);
    ce->add_option("--mode", o.mode, "plain or prefix (reference machine)");
    ce->add_option("--semantics", o.semantics, "budgeted or unbounded");
    ce->add_option("--target", o.targets, "target strings")->delimiter(',');
    auto* cg = leaf_cmd(cx, "gap", "estimate differences between two families", detail::complexity_gap);
    dovetail_opts(cg, true);
    cg->add_option("--against", o.against, "second family");
    cg->add_option("--semantics", o.semantics, "budgeted or unbounded");
    cg->add_option("--target", o.targets, "target strings")->delimiter(',');

    auto* bb = leaf_cmd(&app, "busy-beaver", "longest run among halting programs of each length", detail::busy_beaver_cmd);
    dovetail_opts(bb, true);
    bb->add_option("--mode", o.semantics, "budgeted or unbounded");
    bb->add_option("--n", o.n, "program length bound");
    bb->add_option("--prefix", o.prefix, "derive B(n) from a prefix of the halting probability");

    auto* cs = leaf_cmd(&app, "census", "count strings of length n with estimate >= n - c", detail::census_cmd);
    dovetail_opts(cs, true);
    cs->add_option("--mode", o.semantics, "budgeted or unbounded");
    cs->add_option("--n", o.n, "string length");
    cs->add_option("--c", o.c, "compression margin");

    // coding
    auto* cod = group("coding", "coding-theorem allocation and semimeasures");
    auto* ca = leaf_cmd(cod, "allocate", "assign code nodes as halting events arrive", detail::coding_allocate);
    ca->add_option("--events", o.events_file, "JSON lines {\"p\": bits, \"x\": bits}");
    ca->add_option("--synthetic", o.synthetic, "seeded synthetic stream of this many events");
    ca->add_option("--strings", o.strings, "distinct outputs in the synthetic stream");
    ca->add_option("--log", o.log_file, "also write the quadruple log as JSON lines");
    auto* cd = leaf_cmd(cod, "decode", "string owning a code node", detail::coding_decode);
    cd->add_option("--addr", o.address, "code node");
    cd->add_option("--events", o.events_file, "JSON lines event stream");
    cd->add_option("--synthetic", o.synthetic, "seeded synthetic stream");
    cd->add_option("--strings", o.strings, "distinct outputs in the synthetic stream");
    auto* csm = leaf_cmd(cod, "from-semimeasure", "prefix-free programs for a dyadic semimeasure", detail::coding_semimeasure);
    csm->add_option("increments", o.increments_file, "JSON lines {\"x\": bits, \"delta\": \"0.01\"}");
    csm->add_option("--synthetic", o.synthetic, "seeded synthetic increments");
    csm->add_option("--strings", o.strings, "distinct strings in the synthetic increments");
    auto* cdm = leaf_cmd(cod, "dominate", "check the lifted semimeasure against its scaled original", detail::coding_dominate);
    cdm->add_option("--lift", o.lift, "prefix prepended to every program");
    cdm->add_option("--events", o.events_file, "JSON lines event stream");
    cdm->add_option("--synthetic", o.synthetic, "seeded synthetic stream");
    cdm->add_option("--strings", o.strings, "distinct outputs in the synthetic stream");

    leaf_cmd(&app, "golden", "run the worked-example regression cases", detail::golden_cmd)
        ->add_option("--fixtures", o.fixtures, "case file instead of the built-in one");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        // help of the deepest subcommand named on the line
        const CLI::App* h = &app;
        while (!h->get_subcommands().empty()) h = h->get_subcommands().front();
        out << h->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ait: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        detail::Result res = action(o);
        Json cfg{{"subcommand", command}};
        Json echo = detail::config_echo(*leaf);
        for (auto& [k, v] : echo.items()) cfg[k] = v;
        cfg["seed"] = o.seed;
        cfg["format"] = o.format;
        Json rep = report::wrap(command, cfg, res.results, report::provenance(res.family.get()));
        if (o.format == "json") {
            out << rep.dump(2) << "\n";
        } else {
            if (res.rows.is_null()) throw UsageError("'" + command + "' has nested results; use --format json");
            out << (o.format == "csv" ? report::to_csv(res.rows) : report::to_table(res.rows));
        }
        return res.status;
    } catch (const UsageError& e) {
        err << "ait: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "ait: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "ait: bad input: " << e.what() << "\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        err << "ait: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "ait: internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ait::cli
