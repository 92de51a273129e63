#pragma once

#include <stdexcept>
#include <string>

namespace relect {

// Thrown when a slot action is illegal under the active channel model
// (broadcast-and-listen in the weak model).
struct IllegalActionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid simulation configuration (n < 2, alpha <= 1, bad trial counts, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an analysis function.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance too large for an exact (enumeration-based) computation.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A round schedule outgrew the representable slot budget; the safety cap
// should have stopped the run long before this fires.
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (e.g. dominance sequences
// out of order).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line usage problem.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace relect
