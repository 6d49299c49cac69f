#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ait {

// Every failure raised by the library derives from Error so the CLI can map
// the whole family to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (n = 0 for
// number_to_string, alpha > 1 for leading_one_position, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A prefix tree has no free node left at the requested depth.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Malformed or truncated bit stream; carries the offending bit offset.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t position)
        : Error(what + " (at bit " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// A machine encoding or description that violates a structural constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Program that does not parse as <i, j> for the universal machine.
class FormatError : public Error {
public:
    using Error::Error;
};

// Semimeasure increments whose running total exceeds 1.
class MeasureError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

// A semi-computation stopped before reaching a verdict.  prefix_refuted()
// is true when every candidate was resolved and the claimed target still
// was not met (the input was wrong), false when only the safety cap ran out.
class InconclusiveError : public Error {
public:
    InconclusiveError(const std::string& what, bool prefix_refuted) : Error(what), refuted_(prefix_refuted) {}

    bool prefix_refuted() const noexcept { return refuted_; }

private:
    bool refuted_;
};

}  // namespace ait
