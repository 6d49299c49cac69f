#pragma once

// Reference machine family, version 1.  A small instruction interpreter whose
// programs are bit strings; see docs/reference-machine.md for the table.
//
//   00      HALT
//   010     EMIT0          append 0
//   011     EMIT1          append 1
//   100     PRINT n w      append the n raw bits w
//   1010    COPY           append the auxiliary string
//   1011    DOUBLE         output := output output
//   1100    REPEAT n       replay the executed history n more times
//   1101    LOOP           replay the executed history forever
//   1110    NOT            complement every output bit
//   1111    RAW            append the rest of the program and halt
//
// Numbers n are written 1^k 0 s with |s| = k and value number(s) - 1, so
// 0 = "0", 1 = "100", 2 = "101", 3 = "11000", ...
//
// Every executed instruction, including each replayed one, costs one step.
// Prefix mode: reading past the end of the program fails, HALT succeeds only
// if every program bit was read, RAW always fails.  The success domain is
// therefore prefix-free.  Plain mode: running out of program at an
// instruction boundary or inside an instruction halts with the output so far.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ait/bitstring.hpp"
#include "ait/codes.hpp"

namespace ait::refvm {

inline constexpr const char* kVersion = "refvm-1";

enum class Mode { Plain, Prefix };

enum class Status { Halted, Failed, BudgetExceeded, ProvenLooping };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Halted: return "halted";
        case Status::Failed: return "failed";
        case Status::BudgetExceeded: return "budget-exceeded";
        case Status::ProvenLooping: return "proven-looping";
    }
    return "?";
}

struct Outcome {
    Status status = Status::BudgetExceeded;
    BitString output;
    std::uint64_t steps = 0;
    std::uint64_t consumed = 0;
    std::string reason;  // for Failed / BudgetExceeded
};

// Output longer than this is treated as a resource failure (BudgetExceeded).
inline constexpr std::size_t kOutputCap = std::size_t{1} << 20;

namespace detail {

enum class Op { Emit, Print, Copy, Double, Not };

struct Effect {
    Op op;
    BitString bits;  // Emit / Print payload
};

class Reader {
public:
    explicit Reader(const BitString& p) : p_(p) {}
    bool next(bool& bit) {
        if (pos_ >= p_.size()) return false;
        bit = p_[pos_++];
        return true;
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return p_.size() - pos_; }

private:
    const BitString& p_;
    std::size_t pos_ = 0;
};

// 1^k 0 s -> number(s) - 1, saturating at 2^63.
inline bool read_number(Reader& r, std::uint64_t& value) {
    std::size_t k = 0;
    bool b;
    while (true) {
        if (!r.next(b)) return false;
        if (!b) break;
        ++k;
    }
    std::uint64_t n = 1;
    bool saturated = false;
    for (std::size_t i = 0; i < k; ++i) {
        if (!r.next(b)) return false;
        if (n >= (std::uint64_t{1} << 62)) saturated = true;
        if (!saturated) n = (n << 1) | static_cast<std::uint64_t>(b);
    }
    value = saturated ? (std::uint64_t{1} << 63) : n - 1;
    return true;
}

// Output with a lazy complement flag, so NOT is O(1).
class Output {
public:
    std::size_t size() const { return bits_.size(); }
    void append(const BitString& b) {
        for (std::size_t i = 0; i < b.size(); ++i) bits_.push_back(b[i] != inverted_);
    }
    void twice() { bits_ += BitString(bits_); }
    void complement() { inverted_ = !inverted_; }
    BitString value() const {
        if (!inverted_) return bits_;
        BitString out;
        for (std::size_t i = 0; i < bits_.size(); ++i) out.push_back(!bits_[i]);
        return out;
    }
    friend bool operator==(const Output& a, const Output& b) {
        if (a.size() != b.size()) return false;
        if (a.inverted_ == b.inverted_) return a.bits_ == b.bits_;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.bits_[i] == b.bits_[i]) return false;
        return true;
    }

private:
    BitString bits_;
    bool inverted_ = false;
};

inline void apply(const Effect& e, Output& out, const BitString& aux) {
    switch (e.op) {
        case Op::Emit:
        case Op::Print: out.append(e.bits); break;
        case Op::Copy: out.append(aux); break;
        case Op::Double: out.twice(); break;
        case Op::Not: out.complement(); break;
    }
}

}  // namespace detail

inline Outcome run(const BitString& program, const BitString& aux, Mode mode, std::uint64_t budget) {
    using namespace detail;
    Reader in(program);
    Outcome o;
    Output out;
    std::vector<Effect> history;

    auto end_of_program = [&](const char* where) {
        o.consumed = in.pos();
        if (mode == Mode::Plain) {
            o.status = Status::Halted;
            o.output = out.value();
        } else {
            o.status = Status::Failed;
            o.reason = std::string("read past the end of the program ") + where;
        }
        return o;
    };
    auto out_of_budget = [&](const char* why) {
        o.consumed = in.pos();
        o.status = Status::BudgetExceeded;
        o.reason = why;
        return o;
    };
    // One step: check the budget, then apply.
    auto execute = [&](const Effect& e) -> bool {
        if (o.steps >= budget) return false;
        ++o.steps;
        apply(e, out, aux);
        return true;
    };

    while (true) {
        bool b0, b1, b2, b3;
        if (!in.next(b0) || !in.next(b1)) return end_of_program("at an instruction");
        if (!b0 && !b1) {  // 00 HALT
            if (o.steps >= budget) return out_of_budget("step budget");
            ++o.steps;
            o.consumed = in.pos();
            if (mode == Mode::Prefix && in.remaining() != 0) {
                o.status = Status::Failed;
                o.reason = "halted before reading the whole program";
                return o;
            }
            o.status = Status::Halted;
            o.output = out.value();
            return o;
        }
        if (!in.next(b2)) return end_of_program("inside an opcode");
        if (!b0) {  // 01x EMIT
            Effect e{Op::Emit, BitString::repeat(b2, 1)};
            if (!execute(e)) return out_of_budget("step budget");
            history.push_back(std::move(e));
            continue;
        }
        if (!b1 && !b2) {  // 100 PRINT
            std::uint64_t n;
            if (!read_number(in, n)) return end_of_program("inside PRINT");
            if (n > in.remaining()) {
                while (in.remaining()) in.next(b3);
                return end_of_program("inside PRINT");
            }
            Effect e{Op::Print, {}};
            for (std::uint64_t i = 0; i < n; ++i) {
                in.next(b3);
                e.bits.push_back(b3);
            }
            if (!execute(e)) return out_of_budget("step budget");
            history.push_back(std::move(e));
            continue;
        }
        if (!in.next(b3)) return end_of_program("inside an opcode");
        int op = (b1 << 2) | (b2 << 1) | static_cast<int>(b3);  // b0 == 1
        switch (op) {
            case 0b010:  // 1010 COPY
            case 0b011:  // 1011 DOUBLE
            case 0b110: {  // 1110 NOT
                Effect e{op == 0b010 ? Op::Copy : op == 0b011 ? Op::Double : Op::Not, {}};
                if (!execute(e)) return out_of_budget("step budget");
                history.push_back(std::move(e));
                break;
            }
            case 0b100: {  // 1100 REPEAT n
                std::uint64_t n;
                if (!read_number(in, n)) return end_of_program("inside REPEAT");
                if (o.steps >= budget) return out_of_budget("step budget");
                ++o.steps;
                const std::size_t len = history.size();
                for (std::uint64_t rep = 0; rep < n && len > 0; ++rep) {
                    for (std::size_t i = 0; i < len; ++i) {
                        Effect e = history[i];
                        if (!execute(e)) return out_of_budget("step budget");
                        if (out.size() > kOutputCap) return out_of_budget("output cap");
                        history.push_back(std::move(e));
                    }
                }
                break;
            }
            case 0b101: {  // 1101 LOOP
                if (o.steps >= budget) return out_of_budget("step budget");
                ++o.steps;
                o.consumed = in.pos();
                if (history.empty()) {
                    o.status = Status::ProvenLooping;
                    return o;
                }
                // A pass depends only on the output at its start, so a repeated
                // start-of-pass output proves the loop (Brent checkpoints).
                Output saved = out;
                std::uint64_t power = 1, lam = 0;
                while (true) {
                    for (const auto& e : history) {
                        if (!execute(e)) return out_of_budget("step budget");
                        if (out.size() > kOutputCap) return out_of_budget("output cap");
                    }
                    ++lam;
                    if (out == saved) {
                        o.status = Status::ProvenLooping;
                        return o;
                    }
                    if (lam == power) {
                        saved = out;
                        power *= 2;
                        lam = 0;
                    }
                }
            }
            case 0b111: {  // 1111 RAW
                if (mode == Mode::Prefix) {
                    while (in.remaining()) in.next(b3);
                    return end_of_program("in RAW");
                }
                Effect e{Op::Print, {}};
                while (in.next(b3)) e.bits.push_back(b3);
                if (!execute(e)) return out_of_budget("step budget");
                o.consumed = in.pos();
                o.status = Status::Halted;
                o.output = out.value();
                return o;
            }
        }
        if (out.size() > kOutputCap) return out_of_budget("output cap");
    }
}

// ---------------------------------------------------------------------------
// Canonical programs
// ---------------------------------------------------------------------------

inline BitString number_field(std::uint64_t v) { return bar(u64_to_string(v + 1)); }

inline BitString halt() { return BitString("00"); }

// Literal output of x.
inline BitString print_program(const BitString& x, Mode mode) {
    if (mode == Mode::Plain) return BitString("1111") + x;
    return BitString("100") + number_field(x.size()) + x + halt();
}

// Outputs the auxiliary string.
inline BitString copy_program(Mode mode) {
    return mode == Mode::Plain ? BitString("1010") : BitString("1010") + halt();
}

}  // namespace ait::refvm
