#pragma once

// Single-tape machines over {0, 1, B} with rules (q, s, a, q'), their bit
// encoding E(T), the effective enumeration of valid encodings, the universal
// machine U(bar(i) j) = T_i(j), and the three-tape self-delimiting variant.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/codes.hpp"
#include "ait/errors.hpp"

namespace ait {

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Blank = 2 };
enum class Action : std::uint8_t { Write0 = 0, Write1 = 1, WriteBlank = 2, Left = 3, Right = 4 };

inline char symbol_char(Symbol s) { return "01B"[static_cast<int>(s)]; }
inline char action_char(Action a) { return "01BLR"[static_cast<int>(a)]; }

struct Rule {
    std::uint32_t state = 0;
    Symbol scanned = Symbol::Blank;
    Action action = Action::Right;
    std::uint32_t next = 0;

    friend bool operator==(const Rule&, const Rule&) = default;
};

// Start state is the state of the first rule.  State ids are arbitrary
// labels; canonical() renumbers them in order of first appearance.
struct MachineDescription {
    std::vector<Rule> rules;

    friend bool operator==(const MachineDescription&, const MachineDescription&) = default;

    MachineDescription canonical() const {
        std::unordered_map<std::uint32_t, std::uint32_t> ids;
        auto id = [&](std::uint32_t q) {
            auto [it, fresh] = ids.emplace(q, static_cast<std::uint32_t>(ids.size()));
            return it->second;
        };
        MachineDescription out;
        for (const auto& r : rules) {
            std::uint32_t q = id(r.state);
            std::uint32_t q2 = id(r.next);
            out.rules.push_back({q, r.scanned, r.action, q2});
        }
        return out;
    }

    std::uint32_t state_count() const {
        std::vector<std::uint32_t> seen;
        for (const auto& r : rules) {
            seen.push_back(r.state);
            seen.push_back(r.next);
        }
        std::sort(seen.begin(), seen.end());
        return static_cast<std::uint32_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    }
};

inline void check_deterministic(const MachineDescription& m) {
    std::map<std::pair<std::uint32_t, Symbol>, std::size_t> seen;
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        auto [it, fresh] = seen.emplace(std::make_pair(m.rules[i].state, m.rules[i].scanned), i);
        if (!fresh)
            throw ValidationError("determinism: rules " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                  " share (state, scanned symbol)");
    }
}

// ---------------------------------------------------------------------------
// Text format: one rule per line "q s a q'", '#' starts a comment
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<std::string>> tokenize_lines(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

inline Symbol parse_symbol(const std::string& t, std::size_t line) {
    if (t == "0") return Symbol::Zero;
    if (t == "1") return Symbol::One;
    if (t == "B") return Symbol::Blank;
    throw ValidationError("line " + std::to_string(line) + ": bad scanned symbol '" + t + "'");
}

inline Action parse_action(const std::string& t, std::size_t line) {
    static const std::map<std::string, Action> table = {{"0", Action::Write0}, {"1", Action::Write1}, {"B", Action::WriteBlank},
                                                        {"L", Action::Left},   {"R", Action::Right}};
    auto it = table.find(t);
    if (it == table.end()) throw ValidationError("line " + std::to_string(line) + ": bad action '" + t + "'");
    return it->second;
}

class StateNames {
public:
    std::uint32_t operator()(const std::string& name) {
        auto [it, fresh] = ids_.emplace(name, static_cast<std::uint32_t>(ids_.size()));
        return it->second;
    }

private:
    std::map<std::string, std::uint32_t> ids_;
};

}  // namespace detail

inline MachineDescription parse_machine_text(std::string_view text) {
    MachineDescription m;
    detail::StateNames names;
    auto lines = detail::tokenize_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& t = lines[i];
        if (t.size() != 4) throw ValidationError("line " + std::to_string(i + 1) + ": expected 4 tokens \"q s a q'\"");
        std::uint32_t q = names(t[0]);
        Symbol s = detail::parse_symbol(t[1], i + 1);
        Action a = detail::parse_action(t[2], i + 1);
        m.rules.push_back({q, s, a, names(t[3])});
    }
    check_deterministic(m);
    return m;
}

inline std::string to_machine_text(const MachineDescription& m) {
    std::string out;
    for (const auto& r : m.canonical().rules) {
        out += "q" + std::to_string(r.state) + " " + symbol_char(r.scanned) + " " + action_char(r.action) + " q" +
               std::to_string(r.next) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tape and configuration snapshots
// ---------------------------------------------------------------------------

// Two-way unbounded tape, materialized over the visited range only.
class Tape {
public:
    Tape() = default;

    explicit Tape(const BitString& input) {
        cells_.reserve(input.size() + 16);
        for (std::size_t i = 0; i < input.size(); ++i) cells_.push_back(input[i] ? 1 : 0);
        nonblank_ = input.size();
    }

    std::uint8_t get(std::int64_t pos) const {
        std::int64_t i = pos - base_;
        if (i < 0 || i >= static_cast<std::int64_t>(cells_.size())) return kBlank;
        return cells_[static_cast<std::size_t>(i)];
    }

    void set(std::int64_t pos, std::uint8_t sym) {
        if (pos < base_) {
            std::int64_t grow = std::max<std::int64_t>(base_ - pos, static_cast<std::int64_t>(cells_.size()) + 8);
            cells_.insert(cells_.begin(), static_cast<std::size_t>(grow), kBlank);
            base_ -= grow;
        }
        std::int64_t i = pos - base_;
        if (i >= static_cast<std::int64_t>(cells_.size())) cells_.resize(static_cast<std::size_t>(i) * 2 + 8, kBlank);
        std::uint8_t& c = cells_[static_cast<std::size_t>(i)];
        if (c != kBlank) --nonblank_;
        if (sym != kBlank) ++nonblank_;
        c = sym;
    }

    std::size_t nonblank() const noexcept { return nonblank_; }

    // The maximal blank-free block containing `head`; epsilon on a blank.
    BitString block_at(std::int64_t head) const {
        if (get(head) == kBlank) return {};
        std::int64_t lo = head, hi = head;
        while (get(lo - 1) != kBlank) --lo;
        while (get(hi + 1) != kBlank) ++hi;
        BitString out;
        for (std::int64_t p = lo; p <= hi; ++p) out.push_back(get(p) == 1);
        return out;
    }

    // Non-blank contents trimmed of surrounding blanks, and the head position
    // relative to the first non-blank cell.  Equal snapshots at two times mean
    // the machine sees the same world up to translation.
    void snapshot(std::int64_t head, std::vector<std::uint8_t>& cells, std::int64_t& rel) const {
        cells.clear();
        rel = 0;
        if (nonblank_ == 0) return;
        std::size_t first = 0, last = cells_.size();
        while (cells_[first] == kBlank) ++first;
        while (cells_[last - 1] == kBlank) --last;
        cells.assign(cells_.begin() + static_cast<std::ptrdiff_t>(first), cells_.begin() + static_cast<std::ptrdiff_t>(last));
        rel = head - (static_cast<std::int64_t>(first) + base_);
    }

    static constexpr std::uint8_t kBlank = 2;

private:
    std::vector<std::uint8_t> cells_;
    std::int64_t base_ = 0;
    std::size_t nonblank_ = 0;
};

// ---------------------------------------------------------------------------
// Single-tape runs
// ---------------------------------------------------------------------------

enum class RunStatus { Halted, BudgetExceeded, ProvenLooping };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Halted: return "halted";
        case RunStatus::BudgetExceeded: return "budget-exceeded";
        case RunStatus::ProvenLooping: return "proven-looping";
    }
    return "?";
}

// Configuration at step `first_step` recurs at first_step + period with the
// head shifted by `drift` cells.
struct LoopWitness {
    std::uint64_t first_step = 0;
    std::uint64_t period = 0;
    std::int64_t drift = 0;

    friend bool operator==(const LoopWitness&, const LoopWitness&) = default;
};

struct RunOutcome {
    RunStatus status = RunStatus::BudgetExceeded;
    BitString output;  // valid when Halted
    std::uint64_t steps = 0;
    LoopWitness loop;  // valid when ProvenLooping

    bool halted() const noexcept { return status == RunStatus::Halted; }

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

namespace detail {

struct Config {
    std::uint32_t state = 0;
    std::uint32_t extra = 0;  // machine-specific extra state (program register etc.)
    std::uint64_t counter = 0;
    std::int64_t rel = 0;
    std::int64_t head = 0;
    std::uint64_t step = 0;
    std::size_t nonblank = 0;
    std::vector<std::uint8_t> cells;

    bool same_world(const Config& o) const {
        return state == o.state && extra == o.extra && counter == o.counter && rel == o.rel && cells == o.cells;
    }
};

// Brent's cycle finder over normalized configurations: compare against a
// checkpoint that is refreshed at power-of-two distances.
class BrentDetector {
public:
    void reset(Config c) {
        saved_ = std::move(c);
        power_ = 1;
        lam_ = 0;
    }

    // Cheap fields first; the tape is snapshotted only when they all match.
    template <class Snap>
    std::optional<LoopWitness> observe(std::uint32_t state, std::uint32_t extra, std::uint64_t counter, std::int64_t head,
                                       std::uint64_t step, std::size_t nonblank, Snap&& snap) {
        ++lam_;
        std::optional<LoopWitness> found;
        if (state == saved_.state && extra == saved_.extra && counter == saved_.counter && nonblank == saved_.nonblank) {
            Config now{state, extra, counter, 0, head, step, nonblank, {}};
            snap(now.cells, now.rel);
            if (now.same_world(saved_)) found = LoopWitness{saved_.step, step - saved_.step, head - saved_.head};
        }
        if (!found && lam_ == power_) {
            Config now{state, extra, counter, 0, head, step, nonblank, {}};
            snap(now.cells, now.rel);
            saved_ = std::move(now);
            power_ *= 2;
            lam_ = 0;
        }
        return found;
    }

private:
    Config saved_;
    std::uint64_t power_ = 1;
    std::uint64_t lam_ = 0;
};

}  // namespace detail

// Dense transition table for a machine; state 0 is the start state.
class CompiledMachine {
public:
    explicit CompiledMachine(const MachineDescription& m) {
        MachineDescription c = m.canonical();
        check_deterministic(c);
        states_ = std::max<std::uint32_t>(1, c.state_count());
        table_.assign(static_cast<std::size_t>(states_) * 3, -1);
        for (const auto& r : c.rules) {
            table_[r.state * 3 + static_cast<std::size_t>(r.scanned)] = static_cast<std::int32_t>(rules_.size());
            rules_.push_back(r);
        }
    }

    const Rule* lookup(std::uint32_t state, std::uint8_t sym) const {
        std::int32_t i = table_[state * 3 + sym];
        return i < 0 ? nullptr : &rules_[static_cast<std::size_t>(i)];
    }

    RunOutcome run(const BitString& input, std::uint64_t budget) const {
        Tape tape(input);
        std::int64_t head = 0;
        std::uint32_t state = 0;
        std::uint64_t steps = 0;
        detail::BrentDetector brent;
        {
            detail::Config c0{state, 0, 0, 0, head, 0, tape.nonblank(), {}};
            tape.snapshot(head, c0.cells, c0.rel);
            brent.reset(std::move(c0));
        }
        while (true) {
            const Rule* r = lookup(state, tape.get(head));
            if (!r) return {RunStatus::Halted, tape.block_at(head), steps, {}};
            if (steps >= budget) return {RunStatus::BudgetExceeded, {}, steps, {}};
            switch (r->action) {
                case Action::Write0: tape.set(head, 0); break;
                case Action::Write1: tape.set(head, 1); break;
                case Action::WriteBlank: tape.set(head, Tape::kBlank); break;
                case Action::Left: --head; break;
                case Action::Right: ++head; break;
            }
            state = r->next;
            ++steps;
            auto loop = brent.observe(state, 0, 0, head, steps, tape.nonblank(),
                                      [&](std::vector<std::uint8_t>& cells, std::int64_t& rel) { tape.snapshot(head, cells, rel); });
            if (loop) return {RunStatus::ProvenLooping, {}, steps, *loop};
        }
    }

private:
    std::uint32_t states_ = 1;
    std::vector<std::int32_t> table_;
    std::vector<Rule> rules_;
};

// Runs m on `input` (written from cell 0 rightwards, head on cell 0) for at
// most `budget` steps.
inline RunOutcome run(const MachineDescription& m, const BitString& input, std::uint64_t budget) {
    return CompiledMachine(m).run(input, budget);
}

// ---------------------------------------------------------------------------
// E(T) = bar(s) bar(r) e(q1) e(s1) e(a1) e(q1') ...
// ---------------------------------------------------------------------------

// Smallest s with 2^s >= m.
inline std::uint32_t ceil_log2(std::uint64_t m) {
    std::uint32_t s = 0;
    while ((std::uint64_t{1} << s) < m) ++s;
    return s;
}

inline std::uint32_t field_width(std::uint32_t states) { return ceil_log2(std::uint64_t{states} + 5); }

inline BitString encode_machine(const MachineDescription& m) {
    if (m.rules.empty()) throw ValidationError("encode: a machine needs at least one rule (r = 0 has no string)");
    MachineDescription c = m.canonical();
    check_deterministic(c);
    std::uint32_t n = c.state_count();
    std::uint32_t s = field_width(n);
    BitString out = bar(u64_to_string(s)) + bar(u64_to_string(c.rules.size()));
    for (const auto& r : c.rules) {
        out += BitString::from_uint(r.state, s);
        out += BitString::from_uint(n + static_cast<std::uint32_t>(r.scanned), s);
        out += BitString::from_uint(n + static_cast<std::uint32_t>(r.action), s);
        out += BitString::from_uint(r.next, s);
    }
    return out;
}

namespace detail {

// Reads bar(str(v)) at pos; returns v, or nullopt with a reason.
inline std::optional<std::uint64_t> read_bar_number(const BitString& e, std::size_t& pos, std::string& why, const char* field) {
    std::size_t k = 0;
    while (pos + k < e.size() && e[pos + k]) ++k;
    if (pos + k >= e.size()) {
        why = std::string("header: truncated bar(") + field + ")";
        return std::nullopt;
    }
    if (k > 40) {
        why = std::string("header: ") + field + " too large";
        return std::nullopt;
    }
    if (pos + 2 * k + 1 > e.size()) {
        why = std::string("header: truncated bar(") + field + ")";
        return std::nullopt;
    }
    std::uint64_t v = string_to_u64(e.substr(pos + k + 1, k));
    pos += 2 * k + 1;
    return v;
}

}  // namespace detail

// Non-throwing decoder; on failure `why` names the first violated constraint,
// checked in the order: header, length, numbering, field width, symbol
// ranges, determinism.
inline std::optional<MachineDescription> try_decode_machine(const BitString& e, std::string* why = nullptr) {
    std::string reason;
    auto fail = [&](std::string r) -> std::optional<MachineDescription> {
        if (why) *why = std::move(r);
        return std::nullopt;
    };
    std::size_t pos = 0;
    auto s = detail::read_bar_number(e, pos, reason, "s");
    if (!s) return fail(reason);
    auto r = detail::read_bar_number(e, pos, reason, "r");
    if (!r) return fail(reason);
    if (*s > 32) return fail("header: field width s = " + std::to_string(*s) + " is out of range");
    std::uint64_t body = 4 * *s * *r;
    if (e.size() - pos < body) return fail("length: body truncated, need " + std::to_string(body) + " bits");
    if (e.size() - pos > body) return fail("length: trailing garbage after " + std::to_string(body) + " body bits");

    std::vector<std::uint64_t> f(4 * *r);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = e.substr(pos + i * *s, *s).to_uint();

    std::uint64_t introduced = 0;
    for (std::size_t i = 0; i < *r; ++i) {
        for (std::size_t slot : {std::size_t{0}, std::size_t{3}}) {
            std::uint64_t q = f[4 * i + slot];
            if (q > introduced)
                return fail("numbering: rule " + std::to_string(i + 1) + " uses state " + std::to_string(q) +
                            " before state " + std::to_string(introduced));
            if (q == introduced) ++introduced;
        }
    }
    std::uint64_t n = introduced;
    if (field_width(static_cast<std::uint32_t>(n)) != *s)
        return fail("width: s = " + std::to_string(*s) + " but ceil(log(" + std::to_string(n) + " + 5)) = " +
                    std::to_string(field_width(static_cast<std::uint32_t>(n))));

    MachineDescription m;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> used;
    for (std::size_t i = 0; i < *r; ++i) {
        std::uint64_t sym = f[4 * i + 1], act = f[4 * i + 2];
        if (sym < n || sym - n > 2)
            return fail("symbol: rule " + std::to_string(i + 1) + " scanned field " + std::to_string(sym) + " is not 0, 1 or B");
        if (act < n || act - n > 4)
            return fail("symbol: rule " + std::to_string(i + 1) + " action field " + std::to_string(act) + " is not 0, 1, B, L or R");
        m.rules.push_back({static_cast<std::uint32_t>(f[4 * i]), static_cast<Symbol>(sym - n), static_cast<Action>(act - n),
                           static_cast<std::uint32_t>(f[4 * i + 3])});
    }
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        auto [it, fresh] = used.emplace(std::make_pair(m.rules[i].state, static_cast<std::uint64_t>(m.rules[i].scanned)), i);
        if (!fresh)
            return fail("determinism: rules " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                        " share (state, scanned symbol)");
    }
    return m;
}

inline MachineDescription decode_machine(const BitString& e) {
    std::string why;
    auto m = try_decode_machine(e, &why);
    if (!m) throw ValidationError("invalid machine encoding: " + why);
    return *m;
}

// ---------------------------------------------------------------------------
// Effective enumeration: valid encodings in length-lexicographic order
// ---------------------------------------------------------------------------

// Counts valid encodings by exact dynamic programming so that ranking and
// unranking never scan invalid strings.  A body with header (s, r) is a
// sequence of 4r fields; its state count n is not in the header, so every
// count sums over the n compatible with s.
class MachineEnumerator {
public:
    struct Header {
        std::uint32_t s;
        std::uint32_t r;
        BitString bits;
    };

    static std::uint64_t encoding_length(std::uint32_t s, std::uint32_t r) {
        return 2 * u64_to_string(s).size() + 1 + 2 * u64_to_string(r).size() + 1 + 4ull * s * r;
    }

    // n with ceil(log(n + 5)) = s.
    static std::pair<std::uint32_t, std::uint32_t> state_range(std::uint32_t s) {
        if (s < 3) return {1, 0};
        std::uint64_t lo = (std::uint64_t{1} << (s - 1)) >= 4 ? (std::uint64_t{1} << (s - 1)) - 4 : 0;
        std::uint64_t hi = (std::uint64_t{1} << s) - 5;
        return {static_cast<std::uint32_t>(std::max<std::uint64_t>(lo, 1)), static_cast<std::uint32_t>(hi)};
    }

    Natural body_count(std::uint32_t s, std::uint32_t r) {
        auto [lo, hi] = state_range(s);
        hi = std::min<std::uint32_t>(hi, 2 * r);
        Natural total = 0;
        for (std::uint32_t n = lo; n <= hi; ++n) total += f(n, r, 0, 0);
        return total;
    }

    const std::vector<Header>& headers_of_length(std::uint64_t len) {
        auto it = headers_.find(len);
        if (it != headers_.end()) return it->second;
        std::vector<Header> hs;
        for (std::uint32_t s = 3; 4ull * s <= len; ++s)
            for (std::uint32_t r = 1; 4ull * s * r <= len; ++r)
                if (encoding_length(s, r) == len && body_count(s, r) > 0)
                    hs.push_back({s, r, bar(u64_to_string(s)) + bar(u64_to_string(r))});
        std::sort(hs.begin(), hs.end(), [](const Header& a, const Header& b) { return BitString::lex_less(a.bits, b.bits); });
        return headers_.emplace(len, std::move(hs)).first->second;
    }

    Natural count_of_length(std::uint64_t len) {
        Natural total = 0;
        for (const auto& h : headers_of_length(len)) total += body_count(h.s, h.r);
        return total;
    }

    // The i-th valid encoding, i >= 1.
    BitString encoding_by_index(Natural i) {
        if (i < 1) throw DomainError("machine index must be >= 1");
        Natural rank = i - 1;
        for (std::uint64_t len = 1;; ++len) {
            Natural c = count_of_length(len);
            if (rank >= c) {
                rank -= c;
                continue;
            }
            for (const auto& h : headers_of_length(len)) {
                Natural bc = body_count(h.s, h.r);
                if (rank >= bc) {
                    rank -= bc;
                    continue;
                }
                return h.bits + unrank_body(h.s, h.r, rank);
            }
        }
    }

    Natural index_of_encoding(const BitString& e) {
        auto m = try_decode_machine(e);
        if (!m) throw ValidationError("index_of: not a valid machine encoding");
        Natural idx = 1;
        for (std::uint64_t len = 1; len < e.size(); ++len) idx += count_of_length(len);
        std::uint32_t s = field_width(m->state_count());
        std::uint32_t r = static_cast<std::uint32_t>(m->rules.size());
        for (const auto& h : headers_of_length(e.size())) {
            if (h.s == s && h.r == r) break;
            idx += body_count(h.s, h.r);
        }
        std::size_t header_len = e.size() - 4ull * s * r;
        return idx + rank_body(s, r, e.substr(header_len));
    }

private:
    // Completions of j further rules given k states introduced and u used
    // (state, symbol) pairs, ending with exactly n states.
    Natural f(std::uint32_t n, std::uint32_t j, std::uint32_t k, std::uint32_t u) {
        if (k > n) return 0;
        if (j == 0) return k == n ? 1 : 0;
        if (n - k > 2 * j) return 0;
        auto key = std::make_tuple(n, j, k, u);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Natural total = 0;
        if (3 * k > u) total += Natural(3 * k - u) * 5 * after_action(n, j, k, u);
        if (k < n) total += Natural(3) * 5 * after_action(n, j, k + 1, u);
        memo_.emplace(key, total);
        return total;
    }

    // Completions once q, s and a of the current rule are fixed and k1 states
    // are introduced: choose q' then the remaining j - 1 rules.
    Natural after_action(std::uint32_t n, std::uint32_t j, std::uint32_t k1, std::uint32_t u) {
        Natural total = Natural(k1) * f(n, j - 1, k1, u + 1);
        if (k1 < n) total += f(n, j - 1, k1 + 1, u + 1);
        return total;
    }

    // Per-rule traversal state shared by rank and unrank.
    struct Walk {
        std::uint32_t s, r;
        std::uint32_t nlo, nhi;
        std::uint32_t k = 0;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> used;  // (q, scanned field value)

        bool is_used(std::uint64_t q, std::uint64_t v) const {
            return std::find(used.begin(), used.end(), std::make_pair(q, v)) != used.end();
        }
        std::uint32_t used_for(std::uint64_t q) const {
            std::uint32_t c = 0;
            for (auto& p : used) c += p.first == q;
            return c;
        }
    };

    Walk start(std::uint32_t s, std::uint32_t r) {
        auto [lo, hi] = state_range(s);
        return Walk{s, r, lo, std::min<std::uint32_t>(hi, 2 * r), 0, {}};
    }

    // Completions of the body after choosing `v` for field `slot` of rule t,
    // given earlier choices q (slot >= 1), sym (slot >= 2), k1 (slot >= 1).
    Natural field_count(const Walk& w, std::uint32_t t, int slot, std::uint64_t v, std::uint64_t q, std::uint64_t sym,
                        std::uint32_t k1) {
        std::uint32_t j = w.r - t;
        std::uint32_t u = t;
        Natural total = 0;
        for (std::uint32_t n = w.nlo; n <= w.nhi; ++n) {
            switch (slot) {
                case 0: {
                    if (v > w.k || v >= n) break;
                    std::uint32_t kk = v == w.k ? w.k + 1 : w.k;
                    std::uint32_t free_syms = v == w.k ? 3 : 3 - w.used_for(v);
                    total += Natural(free_syms) * 5 * after_action(n, j, kk, u);
                    break;
                }
                case 1:
                    if (v < n || v - n > 2 || w.is_used(q, v)) break;
                    total += Natural(5) * after_action(n, j, k1, u);
                    break;
                case 2:
                    if (v < n || v - n > 4 || sym < n || sym - n > 2) break;
                    total += after_action(n, j, k1, u);
                    break;
                case 3: {
                    if (v > k1 || v >= n || sym < n || sym - n > 2) break;
                    std::uint32_t kk = v == k1 ? k1 + 1 : k1;
                    total += f(n, j - 1, kk, u + 1);
                    break;
                }
            }
        }
        return total;
    }

    // n is pinned by every symbol field: scanned v needs n in [v-2, v], action
    // v needs n in [v-4, v].
    static void narrow(Walk& w, std::uint64_t v, std::uint32_t span) {
        std::uint64_t lo = v >= span ? v - span : 0;
        w.nlo = static_cast<std::uint32_t>(std::max<std::uint64_t>(w.nlo, lo));
        w.nhi = static_cast<std::uint32_t>(std::min<std::uint64_t>(w.nhi, v));
    }

    BitString unrank_body(std::uint32_t s, std::uint32_t r, Natural rank) {
        Walk w = start(s, r);
        BitString out;
        std::uint64_t limit = std::uint64_t{1} << s;
        for (std::uint32_t t = 0; t < r; ++t) {
            std::uint64_t q = 0, sym = 0;
            std::uint32_t k1 = w.k;
            for (int slot = 0; slot < 4; ++slot) {
                std::uint64_t chosen = limit;
                for (std::uint64_t v = 0; v < limit; ++v) {
                    Natural c = field_count(w, t, slot, v, q, sym, k1);
                    if (rank < c) {
                        chosen = v;
                        break;
                    }
                    rank -= c;
                }
                if (chosen == limit) throw std::logic_error("machine enumeration: rank out of range");
                out += BitString::from_uint(chosen, s);
                apply(w, slot, chosen, q, sym, k1);
            }
        }
        return out;
    }

    Natural rank_body(std::uint32_t s, std::uint32_t r, const BitString& body) {
        Walk w = start(s, r);
        Natural rank = 0;
        for (std::uint32_t t = 0; t < r; ++t) {
            std::uint64_t q = 0, sym = 0;
            std::uint32_t k1 = w.k;
            for (int slot = 0; slot < 4; ++slot) {
                std::uint64_t actual = body.substr((4 * t + static_cast<std::uint32_t>(slot)) * s, s).to_uint();
                for (std::uint64_t v = 0; v < actual; ++v) rank += field_count(w, t, slot, v, q, sym, k1);
                apply(w, slot, actual, q, sym, k1);
            }
        }
        return rank;
    }

    static void apply(Walk& w, int slot, std::uint64_t v, std::uint64_t& q, std::uint64_t& sym, std::uint32_t& k1) {
        switch (slot) {
            case 0:
                q = v;
                k1 = v == w.k ? w.k + 1 : w.k;
                break;
            case 1:
                sym = v;
                narrow(w, v, 2);
                break;
            case 2: narrow(w, v, 4); break;
            case 3:
                w.used.emplace_back(q, sym);
                w.k = v == k1 ? k1 + 1 : k1;
                break;
        }
    }

    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>, Natural> memo_;
    std::map<std::uint64_t, std::vector<Header>> headers_;
};

namespace detail {
inline MachineEnumerator& thread_enumerator() {
    thread_local MachineEnumerator e;
    return e;
}
}  // namespace detail

inline MachineDescription machine_by_index(const Natural& i) {
    return decode_machine(detail::thread_enumerator().encoding_by_index(i));
}

inline Natural index_of_machine(const MachineDescription& m) {
    return detail::thread_enumerator().index_of_encoding(encode_machine(m));
}

// ---------------------------------------------------------------------------
// Universal machine
// ---------------------------------------------------------------------------

struct UniversalProgram {
    Natural index;  // number(i)
    BitString input;
};

inline UniversalProgram parse_universal_program(const BitString& p) {
    try {
        auto [i, j] = pair_decode(p);
        return {string_to_number(i), j};
    } catch (const DecodeError& e) {
        throw FormatError(std::string("universal program does not parse as bar(i) j: ") + e.what());
    }
}

// U(bar(i) j) = T_number(i)(j); steps are the simulated machine's steps.
inline RunOutcome universal_run(const BitString& p, std::uint64_t budget) {
    auto prog = parse_universal_program(p);
    return run(machine_by_index(prog.index), prog.input, budget);
}

// The program for T_index on input x.
inline BitString universal_program(const Natural& index, const BitString& x) { return pair_encode(number_to_string(index), x); }

// ---------------------------------------------------------------------------
// Three-tape self-delimiting machines
// ---------------------------------------------------------------------------

// Program register: the last bit read from the one-way program tape, or None
// before the first read.
enum class ProgramSymbol : std::uint8_t { Zero = 0, One = 1, None = 2 };

enum class SdAction : std::uint8_t { Write0, Write1, WriteBlank, Left, Right, Read, Out0, Out1 };

struct SdRule {
    std::uint32_t state = 0;
    ProgramSymbol program = ProgramSymbol::None;
    Symbol work = Symbol::Blank;
    SdAction action = SdAction::Read;
    std::uint32_t next = 0;

    friend bool operator==(const SdRule&, const SdRule&) = default;
};

struct SdMachine {
    std::vector<SdRule> rules;
};

enum class SdStatus { Success, Overshoot, HaltedEarly, BudgetExceeded, ProvenLooping };

inline const char* to_string(SdStatus s) {
    switch (s) {
        case SdStatus::Success: return "success";
        case SdStatus::Overshoot: return "overshoot";
        case SdStatus::HaltedEarly: return "halted-early";
        case SdStatus::BudgetExceeded: return "budget-exceeded";
        case SdStatus::ProvenLooping: return "proven-looping";
    }
    return "?";
}

struct SelfDelimRun {
    SdStatus status = SdStatus::BudgetExceeded;
    std::uint64_t consumed = 0;
    BitString aux;
    BitString output;
    std::uint64_t steps = 0;

    bool success() const noexcept { return status == SdStatus::Success; }
};

inline SdMachine parse_sd_machine_text(std::string_view text) {
    static const std::map<std::string, SdAction> actions = {
        {"0", SdAction::Write0}, {"1", SdAction::Write1}, {"B", SdAction::WriteBlank}, {"L", SdAction::Left},
        {"R", SdAction::Right},  {"READ", SdAction::Read}, {"O0", SdAction::Out0},      {"O1", SdAction::Out1}};
    SdMachine m;
    detail::StateNames names;
    auto lines = detail::tokenize_lines(text);
    std::map<std::tuple<std::uint32_t, ProgramSymbol, Symbol>, std::size_t> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& t = lines[i];
        if (t.size() != 5) throw ValidationError("line " + std::to_string(i + 1) + ": expected 5 tokens \"q c w a q'\"");
        SdRule r;
        r.state = names(t[0]);
        if (t[1] == "0") r.program = ProgramSymbol::Zero;
        else if (t[1] == "1") r.program = ProgramSymbol::One;
        else if (t[1] == "-") r.program = ProgramSymbol::None;
        else throw ValidationError("line " + std::to_string(i + 1) + ": program symbol must be 0, 1 or -");
        r.work = detail::parse_symbol(t[2], i + 1);
        auto it = actions.find(t[3]);
        if (it == actions.end()) throw ValidationError("line " + std::to_string(i + 1) + ": bad action '" + t[3] + "'");
        r.action = it->second;
        r.next = names(t[4]);
        if (!seen.emplace(std::make_tuple(r.state, r.program, r.work), i).second)
            throw ValidationError("determinism: line " + std::to_string(i + 1) + " repeats (state, program, work) key");
        m.rules.push_back(r);
    }
    return m;
}

// Reads the program one bit at a time on demand.  Success means halting with
// exactly |program| bits read; asking for a bit past the end fails, which
// makes the success domain prefix-free.
inline SelfDelimRun selfdelim_run(const SdMachine& m, const BitString& program, const BitString& aux, std::uint64_t budget) {
    std::map<std::tuple<std::uint32_t, ProgramSymbol, Symbol>, const SdRule*> table;
    for (const auto& r : m.rules) table[{r.state, r.program, r.work}] = &r;
    std::uint32_t state = m.rules.empty() ? 0 : m.rules[0].state;

    SelfDelimRun out;
    out.aux = aux;
    Tape tape(aux);
    std::int64_t head = 0;
    ProgramSymbol reg = ProgramSymbol::None;
    detail::BrentDetector brent;
    {
        detail::Config c0{state, static_cast<std::uint32_t>(reg), 0, 0, head, 0, tape.nonblank(), {}};
        tape.snapshot(head, c0.cells, c0.rel);
        brent.reset(std::move(c0));
    }
    while (true) {
        auto it = table.find({state, reg, static_cast<Symbol>(tape.get(head))});
        if (it == table.end()) {
            out.status = out.consumed == program.size() ? SdStatus::Success : SdStatus::HaltedEarly;
            return out;
        }
        if (out.steps >= budget) {
            out.status = SdStatus::BudgetExceeded;
            return out;
        }
        const SdRule& r = *it->second;
        switch (r.action) {
            case SdAction::Write0: tape.set(head, 0); break;
            case SdAction::Write1: tape.set(head, 1); break;
            case SdAction::WriteBlank: tape.set(head, Tape::kBlank); break;
            case SdAction::Left: --head; break;
            case SdAction::Right: ++head; break;
            case SdAction::Out0: out.output.push_back(false); break;
            case SdAction::Out1: out.output.push_back(true); break;
            case SdAction::Read:
                if (out.consumed == program.size()) {
                    ++out.steps;
                    out.status = SdStatus::Overshoot;
                    return out;
                }
                reg = program[out.consumed] ? ProgramSymbol::One : ProgramSymbol::Zero;
                ++out.consumed;
                break;
        }
        state = r.next;
        ++out.steps;
        // Output is write-only and never read back, so it is not part of the
        // configuration.
        auto loop = brent.observe(state, static_cast<std::uint32_t>(reg), out.consumed, head,
                                  out.steps, tape.nonblank(),
                                  [&](std::vector<std::uint8_t>& cells, std::int64_t& rel) { tape.snapshot(head, cells, rel); });
        if (loop) {
            out.status = SdStatus::ProvenLooping;
            return out;
        }
    }
}

}  // namespace ait
