#pragma once

// Dovetailed semi-computation over program space.  Phase k runs every program
// of length <= k for k steps, so a program of length l halting after t steps
// is first seen in phase max(1, l, t).  Runs are deterministic, so instead of
// rerunning each program in every phase we run it once with the largest
// budget it will ever get and derive that phase; the resulting event stream is
// the one phase-by-phase execution would produce.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/codes.hpp"
#include "ait/dyadic.hpp"
#include "ait/errors.hpp"
#include "ait/machine.hpp"
#include "ait/refvm.hpp"

namespace ait {

// ---------------------------------------------------------------------------
// Program families
// ---------------------------------------------------------------------------

enum class ProgramStatus {
    Halts,          // halted (prefix families: in the success domain)
    Fails,          // stopped outside the domain (malformed, overshoot, early halt)
    ProvenLooping,
    Cutoff,         // budgeted semantics: ran past 2^|p| steps, declared divergent
    Unknown,        // budget ran out, or never scheduled
};

inline const char* to_string(ProgramStatus s) {
    switch (s) {
        case ProgramStatus::Halts: return "halts";
        case ProgramStatus::Fails: return "fails";
        case ProgramStatus::ProvenLooping: return "proven-looping";
        case ProgramStatus::Cutoff: return "cutoff";
        case ProgramStatus::Unknown: return "unknown";
    }
    return "?";
}

struct ProgramRun {
    ProgramStatus status = ProgramStatus::Unknown;
    std::uint64_t steps = 0;
    BitString output;
};

// A family of programs with a bounded-run interpreter.  Implementations must
// be deterministic and safe to call from several threads.
class ProgramFamily {
public:
    virtual ~ProgramFamily() = default;
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    // True when the halting domain is prefix-free, so Omega is defined.
    virtual bool prefix_free() const = 0;
    virtual ProgramRun run(const BitString& p, std::uint64_t budget) const = 0;
    // A program printing x literally, if the family has one.
    virtual std::optional<BitString> print_program(const BitString&) const { return std::nullopt; }
    // A program outputting the auxiliary string, if the family has one.
    virtual std::optional<BitString> copy_program() const { return std::nullopt; }
};

using FamilyPtr = std::shared_ptr<const ProgramFamily>;

class RefFamily final : public ProgramFamily {
public:
    explicit RefFamily(refvm::Mode mode, BitString aux = {}) : mode_(mode), aux_(std::move(aux)) {}

    std::string name() const override { return mode_ == refvm::Mode::Plain ? "ref-plain" : "ref-prefix"; }
    std::string version() const override { return refvm::kVersion; }
    bool prefix_free() const override { return mode_ == refvm::Mode::Prefix; }

    ProgramRun run(const BitString& p, std::uint64_t budget) const override {
        auto o = refvm::run(p, aux_, mode_, budget);
        ProgramRun r;
        r.steps = o.steps;
        switch (o.status) {
            case refvm::Status::Halted:
                r.status = ProgramStatus::Halts;
                r.output = std::move(o.output);
                break;
            case refvm::Status::Failed: r.status = ProgramStatus::Fails; break;
            case refvm::Status::ProvenLooping: r.status = ProgramStatus::ProvenLooping; break;
            case refvm::Status::BudgetExceeded: r.status = ProgramStatus::Unknown; break;
        }
        return r;
    }

    std::optional<BitString> print_program(const BitString& x) const override { return refvm::print_program(x, mode_); }
    std::optional<BitString> copy_program() const override { return refvm::copy_program(mode_); }

    const BitString& aux() const { return aux_; }

private:
    refvm::Mode mode_;
    BitString aux_;
};

inline ProgramRun from_tm_outcome(const RunOutcome& o) {
    ProgramRun r;
    r.steps = o.steps;
    switch (o.status) {
        case RunStatus::Halted:
            r.status = ProgramStatus::Halts;
            r.output = o.output;
            break;
        case RunStatus::ProvenLooping: r.status = ProgramStatus::ProvenLooping; break;
        case RunStatus::BudgetExceeded: r.status = ProgramStatus::Unknown; break;
    }
    return r;
}

// T_i from the enumeration, run on the program as its input.
class TmFamily final : public ProgramFamily {
public:
    explicit TmFamily(Natural index) : index_(std::move(index)), machine_(machine_by_index(index_)) {}

    std::string name() const override { return "tm:" + index_.str(); }
    std::string version() const override { return "tm-enum-1"; }
    bool prefix_free() const override { return false; }
    ProgramRun run(const BitString& p, std::uint64_t budget) const override {
        return from_tm_outcome(ait::run(machine_, p, budget));
    }

    const Natural& index() const { return index_; }

private:
    Natural index_;
    MachineDescription machine_;
};

// Index of {(q0, B, R, q1)}: it halts at once on nonempty input and steps off
// the blank on empty input, so its output is always the input.
inline const Natural& identity_machine_index() {
    static const Natural idx = [] {
        MachineDescription m;
        m.rules.push_back(Rule{0, Symbol::Blank, Action::Right, 1});
        return index_of_machine(m);
    }();
    return idx;
}

// The universal machine U(bar(i) j) = T_i(j).  Programs that do not parse
// fail.
class UniversalFamily final : public ProgramFamily {
public:
    std::string name() const override { return "universal"; }
    std::string version() const override { return "tm-enum-1"; }
    bool prefix_free() const override { return false; }
    ProgramRun run(const BitString& p, std::uint64_t budget) const override {
        try {
            return from_tm_outcome(universal_run(p, budget));
        } catch (const FormatError&) {
            return ProgramRun{ProgramStatus::Fails, 0, {}};
        }
    }
    std::optional<BitString> print_program(const BitString& x) const override {
        return universal_program(identity_machine_index(), x);
    }
};

// A user-supplied three-tape self-delimiting machine.
class SdFamily final : public ProgramFamily {
public:
    explicit SdFamily(SdMachine m, BitString aux = {}, std::string label = "sd")
        : machine_(std::move(m)), aux_(std::move(aux)), label_(std::move(label)) {}

    std::string name() const override { return label_; }
    std::string version() const override { return "sd-1"; }
    bool prefix_free() const override { return true; }
    ProgramRun run(const BitString& p, std::uint64_t budget) const override {
        auto o = selfdelim_run(machine_, p, aux_, budget);
        ProgramRun r;
        r.steps = o.steps;
        switch (o.status) {
            case SdStatus::Success:
                r.status = ProgramStatus::Halts;
                r.output = std::move(o.output);
                break;
            case SdStatus::Overshoot:
            case SdStatus::HaltedEarly: r.status = ProgramStatus::Fails; break;
            case SdStatus::ProvenLooping: r.status = ProgramStatus::ProvenLooping; break;
            case SdStatus::BudgetExceeded: r.status = ProgramStatus::Unknown; break;
        }
        return r;
    }

private:
    SdMachine machine_;
    BitString aux_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

// 0 means: AIT_WORKERS from the environment, else the hardware count.
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("AIT_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Calls f(i) for i in [0, n).  Each index is handled by exactly one worker;
// the first exception is rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
    workers = std::max(1u, std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Halting tables and events
// ---------------------------------------------------------------------------

struct DovetailLimits {
    std::uint32_t max_length = 8;
    std::uint64_t max_phase = 256;
    // Budgeted semantics: a program running past 2^|p| steps diverges.
    bool budgeted = true;
    unsigned workers = 0;
};

inline std::uint64_t cutoff_steps(std::size_t length) {
    return length >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << length);
}

struct HaltingEntry {
    BitString program;
    ProgramStatus status = ProgramStatus::Unknown;
    std::uint64_t steps = 0;
    BitString output;
    std::uint64_t phase = 0;  // first revealing phase, for Halts
};

struct HaltEvent {
    std::uint64_t phase = 0;
    BitString program;
    BitString output;
    std::uint64_t steps = 0;
};

// Every program of length <= max_length in the order of the bijection, so
// entry i belongs to the string numbered i + 1.  A halts entry is permanent.
class HaltingTable {
public:
    HaltingTable() = default;
    HaltingTable(std::uint32_t max_length, std::vector<HaltingEntry> entries)
        : max_length_(max_length), entries_(std::move(entries)) {}

    std::uint32_t max_length() const { return max_length_; }
    const std::vector<HaltingEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    const HaltingEntry& at(const BitString& p) const {
        if (p.size() > max_length_) throw LookupError("program " + p.literal() + " is longer than the table");
        return entries_[static_cast<std::size_t>(string_to_u64(p) - 1)];
    }

    // No program left undecided.
    bool complete() const {
        return std::none_of(entries_.begin(), entries_.end(),
                            [](const HaltingEntry& e) { return e.status == ProgramStatus::Unknown; });
    }

    // The first 2^(n+1) - 1 bits of chi.
    BitString chi(std::uint32_t n) const {
        if (n > max_length_) throw DomainError("chi prefix longer than the table");
        BitString bits;
        std::size_t count = (std::size_t{2} << n) - 1;
        for (std::size_t i = 0; i < count; ++i) bits.push_back(entries_[i].status == ProgramStatus::Halts);
        return bits;
    }

    // Halting events sorted by (phase, program number).
    std::vector<HaltEvent> events() const {
        std::vector<HaltEvent> ev;
        for (const auto& e : entries_)
            if (e.status == ProgramStatus::Halts) ev.push_back({e.phase, e.program, e.output, e.steps});
        std::stable_sort(ev.begin(), ev.end(), [](const HaltEvent& a, const HaltEvent& b) { return a.phase < b.phase; });
        return ev;
    }

private:
    std::uint32_t max_length_ = 0;
    std::vector<HaltingEntry> entries_;
};

inline std::uint64_t revealing_phase(std::size_t length, std::uint64_t steps) {
    return std::max<std::uint64_t>({1, length, steps});
}

// Runs every program of length <= max_length.  Results are written to
// per-program slots, so the table does not depend on the worker count.
inline HaltingTable build_table(const ProgramFamily& family, const DovetailLimits& limits) {
    if (limits.max_phase < 1) throw DomainError("max-phase must be >= 1");
    if (limits.max_length > 40) throw DomainError("max-length above 40 is out of reach");
    std::size_t count = (std::size_t{2} << limits.max_length) - 1;
    std::vector<HaltingEntry> entries(count);
    parallel_for(count, limits.workers, [&](std::size_t i) {
        HaltingEntry& e = entries[i];
        e.program = u64_to_string(i + 1);
        std::size_t len = e.program.size();
        if (len > limits.max_phase) return;  // never scheduled
        std::uint64_t budget = limits.max_phase;
        bool reaches_cutoff = false;
        if (limits.budgeted && cutoff_steps(len) <= budget) {
            budget = cutoff_steps(len);
            reaches_cutoff = true;
        }
        ProgramRun r = family.run(e.program, budget);
        e.status = r.status;
        e.steps = r.steps;
        if (r.status == ProgramStatus::Halts) {
            e.output = std::move(r.output);
            e.phase = revealing_phase(len, r.steps);
        } else if (r.status == ProgramStatus::Unknown && reaches_cutoff) {
            e.status = ProgramStatus::Cutoff;
        }
    });
    return HaltingTable(limits.max_length, std::move(entries));
}

inline std::vector<HaltEvent> dovetail(const ProgramFamily& family, const DovetailLimits& limits) {
    return build_table(family, limits).events();
}

// ---------------------------------------------------------------------------
// Omega
// ---------------------------------------------------------------------------

class OmegaAccumulator {
public:
    void credit(const BitString& p) {
        if (!credited_.insert(p).second) throw std::logic_error("program " + p.literal() + " credited twice");
        DyadicRational next = sum_ + DyadicRational::pow2_neg(static_cast<std::uint32_t>(p.size()));
        if (next < sum_) throw std::logic_error("omega sum decreased");
        if (next > DyadicRational::one()) throw std::logic_error("omega sum exceeds 1: halting domain is not prefix-free");
        sum_ = std::move(next);
    }

    const DyadicRational& sum() const { return sum_; }
    std::size_t count() const { return credited_.size(); }

private:
    DyadicRational sum_;
    std::set<BitString> credited_;
};

struct OmegaPoint {
    std::uint64_t phase;
    DyadicRational sum;
};

struct OmegaResult {
    DyadicRational sum;
    HaltingTable table;
    std::vector<HaltEvent> events;
    std::vector<OmegaPoint> trajectory;  // S after each phase with events
    bool exact = false;                  // budgeted and every program decided
};

inline void require_prefix_free(const ProgramFamily& family) {
    if (!family.prefix_free())
        throw DomainError("family '" + family.name() + "' has no prefix-free halting domain; Omega needs one");
}

inline OmegaResult omega_lower(const ProgramFamily& family, const DovetailLimits& limits) {
    require_prefix_free(family);
    OmegaResult r;
    r.table = build_table(family, limits);
    r.events = r.table.events();
    OmegaAccumulator acc;
    for (std::size_t i = 0; i < r.events.size(); ++i) {
        acc.credit(r.events[i].program);
        if (i + 1 == r.events.size() || r.events[i + 1].phase != r.events[i].phase)
            r.trajectory.push_back({r.events[i].phase, acc.sum()});
    }
    r.sum = acc.sum();
    r.exact = limits.budgeted && r.table.complete();
    return r;
}

struct OmegaToHaltingResult {
    std::uint32_t n = 0;
    BitString prefix;
    HaltingTable table;          // programs |p| <= n; halts or not
    std::uint64_t stop_phase = 0;  // 0: target met before any event
    std::size_t events_used = 0;
    DyadicRational sum_at_stop;
    DyadicRational sum_in_horizon;  // every event the limits allow
    // The horizon sum reached 0.prefix + 2^-|prefix|: the claimed prefix is
    // too small and the declared table may miss halting programs.
    bool inconsistent = false;
};

// Runs the dovetail until S >= 0.prefix, then declares every undiscovered
// program of length <= n non-halting.  The universe is all programs of length
// <= limits.max_length (>= n).
inline OmegaToHaltingResult omega_to_halting(const ProgramFamily& family, const BitString& prefix, std::uint32_t n,
                                             const DovetailLimits& limits) {
    require_prefix_free(family);
    if (prefix.size() < n) throw DomainError("omega prefix has fewer than n bits");
    if (limits.max_length < n) throw DomainError("max-length must be >= n");

    HaltingTable full = build_table(family, limits);
    auto events = full.events();
    DyadicRational target = DyadicRational::from_fraction_bits(prefix);

    OmegaToHaltingResult r;
    r.n = n;
    r.prefix = prefix;
    OmegaAccumulator acc;
    std::size_t used = 0;
    bool reached = acc.sum() >= target;
    while (!reached && used < events.size()) {
        acc.credit(events[used].program);
        r.stop_phase = events[used].phase;
        ++used;
        reached = acc.sum() >= target;
    }
    if (!reached) {
        bool refuted = full.complete();
        throw InconclusiveError(refuted ? "every program is decided and S = " + acc.sum().to_binary_string() +
                                              " stays below 0." + prefix.bits() + ": the prefix is wrong"
                                        : "S = " + acc.sum().to_binary_string() + " below 0." + prefix.bits() +
                                              " when the phase cap ran out",
                                refuted);
    }
    r.events_used = used;
    r.sum_at_stop = acc.sum();

    DyadicRational horizon = acc.sum();
    for (std::size_t i = used; i < events.size(); ++i)
        horizon += DyadicRational::pow2_neg(static_cast<std::uint32_t>(events[i].program.size()));
    r.sum_in_horizon = horizon;
    r.inconsistent = horizon >= target + DyadicRational::pow2_neg(static_cast<std::uint32_t>(prefix.size()));

    std::size_t count = (std::size_t{2} << n) - 1;
    std::vector<HaltingEntry> declared(count);
    for (std::size_t i = 0; i < count; ++i) {
        declared[i].program = u64_to_string(i + 1);
        declared[i].status = ProgramStatus::Cutoff;
    }
    for (std::size_t i = 0; i < used; ++i) {
        const auto& ev = events[i];
        if (ev.program.size() > n) continue;
        auto& e = declared[static_cast<std::size_t>(string_to_u64(ev.program) - 1)];
        e.status = ProgramStatus::Halts;
        e.steps = ev.steps;
        e.output = ev.output;
        e.phase = ev.phase;
    }
    r.table = HaltingTable(n, std::move(declared));
    return r;
}

// Same halting set, steps and outputs for programs of length <= n.
inline bool same_halting(const HaltingTable& a, const HaltingTable& b, std::uint32_t n, std::size_t* mismatches = nullptr) {
    std::size_t count = (std::size_t{2} << n) - 1, bad = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& x = a.entries()[i];
        const auto& y = b.entries()[i];
        bool hx = x.status == ProgramStatus::Halts, hy = y.status == ProgramStatus::Halts;
        if (hx != hy || (hx && (x.steps != y.steps || x.output != y.output))) ++bad;
    }
    if (mismatches) *mismatches = bad;
    return bad == 0;
}

// ---------------------------------------------------------------------------
// Busy beaver
// ---------------------------------------------------------------------------

struct BusyBeaverRow {
    std::uint32_t n = 0;
    std::uint64_t steps = 0;
    std::optional<BitString> witness;
};

struct BusyBeaverTable {
    std::vector<BusyBeaverRow> rows;
    // Exact when every program was decided under budgeted semantics;
    // otherwise each value is a lower bound.
    bool exact = false;
};

inline BusyBeaverTable busy_beaver(const HaltingTable& table, std::uint32_t n, bool exact) {
    if (n > table.max_length()) throw DomainError("busy beaver n exceeds the table");
    BusyBeaverTable t;
    t.exact = exact;
    BusyBeaverRow best;
    std::size_t i = 0;
    for (std::uint32_t len = 0; len <= n; ++len) {
        std::size_t end = (std::size_t{2} << len) - 1;
        for (; i < end; ++i) {
            const auto& e = table.entries()[i];
            if (e.status == ProgramStatus::Halts && (!best.witness || e.steps > best.steps)) {
                best.steps = e.steps;
                best.witness = e.program;
            }
        }
        best.n = len;
        t.rows.push_back(best);
    }
    return t;
}

inline BusyBeaverTable busy_beaver(const ProgramFamily& family, std::uint32_t n, DovetailLimits limits) {
    limits.max_length = n;
    auto table = build_table(family, limits);
    return busy_beaver(table, n, limits.budgeted && table.complete());
}

// Recovers the halting table from the Omega prefix, then takes the maximum.
inline BusyBeaverRow bb_from_omega(const ProgramFamily& family, const BitString& prefix, std::uint32_t n,
                                   const DovetailLimits& limits) {
    auto r = omega_to_halting(family, prefix, n, limits);
    return busy_beaver(r.table, n, false).rows.back();
}

// ---------------------------------------------------------------------------
// Complexity upper bounds
// ---------------------------------------------------------------------------

struct ComplexityEstimate {
    BitString target;
    std::optional<std::uint64_t> value;  // none: nothing found and no fallback
    std::optional<BitString> witness;
    std::uint64_t phase = 0;  // phase revealing the witness; 0 for the fallback
    bool fallback = false;
};

// Shortest discovered program for every output; ties go to the earlier event.
class ShortestPrograms {
public:
    explicit ShortestPrograms(const HaltingTable& table) {
        for (const auto& ev : table.events()) {
            auto it = best_.find(ev.output);
            if (it == best_.end() || ev.program.size() < it->second.program.size()) best_[ev.output] = ev;
        }
    }

    const HaltEvent* find(const BitString& x) const {
        auto it = best_.find(x);
        return it == best_.end() ? nullptr : &it->second;
    }

    const std::map<BitString, HaltEvent>& all() const { return best_; }

private:
    std::map<BitString, HaltEvent> best_;
};

inline constexpr std::uint64_t kVerifyBudget = std::uint64_t{1} << 24;

// Re-runs the witness and checks it produces the target.
inline void verify_witness(const ProgramFamily& family, const ComplexityEstimate& e) {
    if (!e.witness) return;
    auto r = family.run(*e.witness, kVerifyBudget);
    if (r.status != ProgramStatus::Halts || r.output != e.target)
        throw std::logic_error("witness " + e.witness->literal() + " does not reproduce " + e.target.literal());
}

inline ComplexityEstimate estimate_from(const ProgramFamily& family, const ShortestPrograms& index, const BitString& x) {
    ComplexityEstimate e;
    e.target = x;
    std::optional<BitString> print = family.print_program(x);
    if (const HaltEvent* ev = index.find(x); ev && (!print || ev->program.size() <= print->size())) {
        e.value = ev->program.size();
        e.witness = ev->program;
        e.phase = ev->phase;
    } else if (print) {
        e.value = print->size();
        e.witness = *print;
        e.fallback = true;
    }
    verify_witness(family, e);
    return e;
}

inline ComplexityEstimate complexity_upper(const ProgramFamily& family, const BitString& x, const DovetailLimits& limits) {
    ShortestPrograms index(build_table(family, limits));
    return estimate_from(family, index, x);
}

// Length of the literal-output program minus |x|, checked by running it.
inline std::uint64_t measured_print_overhead(const ProgramFamily& family, const BitString& x) {
    auto p = family.print_program(x);
    if (!p) throw DomainError("family '" + family.name() + "' has no print program");
    auto r = family.run(*p, kVerifyBudget);
    if (r.status != ProgramStatus::Halts || r.output != x) throw std::logic_error("print program does not print");
    return p->size() - x.size();
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

struct Census {
    std::uint32_t n = 0;
    std::uint32_t c = 0;
    std::vector<std::uint64_t> omega_prime;  // halting programs of length exactly k, k <= n
    std::uint64_t omega_n = 0;
    std::uint64_t incompressible = 0;  // x of length n with estimated complexity >= n - c
    Natural bound;                      // 2^n - (2^(n-c) - 1), clamped at 2^n for c > n
    bool holds = false;
    bool exact = false;
};

// Counts from one table with max_length >= n.  A string is compressible only
// if some discovered program shorter than n - c prints it; the fallback bound
// is never below n.
inline Census census(const HaltingTable& table, std::uint32_t n, std::uint32_t c, bool exact) {
    if (n > table.max_length()) throw DomainError("census n exceeds the table");
    if (n > 40) throw DomainError("census n too large");
    Census r;
    r.n = n;
    r.c = c;
    r.exact = exact;
    r.omega_prime.assign(n + 1, 0);
    std::set<BitString> compressible;
    std::size_t count = (std::size_t{2} << n) - 1;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& e = table.entries()[i];
        if (e.status != ProgramStatus::Halts) continue;
        ++r.omega_prime[e.program.size()];
        if (e.output.size() == n && e.program.size() + c < n) compressible.insert(e.output);
    }
    for (auto v : r.omega_prime) r.omega_n += v;
    r.incompressible = (std::uint64_t{1} << n) - compressible.size();
    Natural shorter = c >= n ? Natural(0) : (Natural(1) << (n - c)) - 1;  // programs of length < n - c
    r.bound = (Natural(1) << n) - shorter;
    r.holds = Natural(r.incompressible) >= r.bound;
    return r;
}

inline Census census(const ProgramFamily& family, std::uint32_t n, std::uint32_t c, DovetailLimits limits) {
    limits.max_length = n;
    auto table = build_table(family, limits);
    return census(table, n, c, limits.budgeted && table.complete());
}

// ---------------------------------------------------------------------------
// Invariance
// ---------------------------------------------------------------------------

struct GapRow {
    BitString x;
    ComplexityEstimate a;
    ComplexityEstimate b;
    std::uint64_t gap = 0;
};

struct InvarianceGap {
    std::vector<GapRow> rows;
    std::uint64_t max_gap = 0;
};

inline InvarianceGap invariance_gap(const ProgramFamily& a, const ProgramFamily& b, const std::vector<BitString>& strings,
                                    const DovetailLimits& limits) {
    ShortestPrograms ia(build_table(a, limits));
    ShortestPrograms ib(build_table(b, limits));
    InvarianceGap g;
    for (const auto& x : strings) {
        GapRow row{x, estimate_from(a, ia, x), estimate_from(b, ib, x), 0};
        if (row.a.value && row.b.value)
            row.gap = *row.a.value > *row.b.value ? *row.a.value - *row.b.value : *row.b.value - *row.a.value;
        g.max_gap = std::max(g.max_gap, row.gap);
        g.rows.push_back(std::move(row));
    }
    return g;
}

// Running T_i's program q through U as bar(i) q.
struct LiftCheck {
    BitString prefix;            // bar(i)
    std::size_t programs = 0;
    std::size_t agreements = 0;  // same status, steps and output
};

inline LiftCheck lifting_check(const Natural& index, const std::vector<BitString>& programs, std::uint64_t budget) {
    TmFamily direct(index);
    UniversalFamily u;
    LiftCheck c;
    c.prefix = bar(number_to_string(index));
    for (const auto& q : programs) {
        auto x = direct.run(q, budget);
        auto y = u.run(c.prefix + q, budget);
        ++c.programs;
        if (x.status == y.status && x.steps == y.steps && x.output == y.output) ++c.agreements;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Family selection by name
// ---------------------------------------------------------------------------

// "ref-plain", "ref-prefix", "universal", "tm:<index>".
inline FamilyPtr make_family(const std::string& spec, const BitString& aux = {}) {
    if (spec == "ref-plain") return std::make_shared<RefFamily>(refvm::Mode::Plain, aux);
    if (spec == "ref-prefix") return std::make_shared<RefFamily>(refvm::Mode::Prefix, aux);
    if (spec == "universal") return std::make_shared<UniversalFamily>();
    if (spec.rfind("tm:", 0) == 0) {
        std::string digits = spec.substr(3);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("bad machine index in '" + spec + "'");
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // not octal
        Natural idx(digits);
        if (idx < 1) throw DomainError("machine indices start at 1");
        return std::make_shared<TmFamily>(idx);
    }
    throw DomainError("unknown machine family '" + spec + "'");
}

}  // namespace ait
