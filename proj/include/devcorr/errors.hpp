#pragma once

#include <stdexcept>
#include <string>

namespace devcorr {

// Base for all library errors. CLI maps subtypes onto stable exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a precondition or a documented invariant (exit 2).
struct InvalidInput : Error {
    using Error::Error;
};

// Density matrix fails PSD / unit-trace checks.
struct NonPhysicalState : InvalidInput {
    using InvalidInput::InvalidInput;
};

// Deviation matrix fails the tracelessness tolerance.
struct TraceViolation : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct NegativeTime : InvalidInput {
    using InvalidInput::InvalidInput;
};

// A required spectral density is zero, so a time constant is undefined.
struct ZeroRate : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct EmptySeries : InvalidInput {
    using InvalidInput::InvalidInput;
};

// Simplex refinement failed to converge within the iteration cap (exit 4).
struct OptimizerFailure : Error {
    using Error::Error;
};

// Exponential fit failed to converge (exit 5).
struct FitDivergence : Error {
    using Error::Error;
};

// Signal carries no decaying component; the rate is unidentifiable (exit 5).
struct DegenerateSignal : Error {
    using Error::Error;
};

// Coherence- and population-derived spectral densities disagree beyond the
// configured threshold (thrown only in strict mode; warn-only by default).
struct InconsistentFits : Error {
    using Error::Error;
};

// Filesystem failure (exit 3).
struct IoError : Error {
    using Error::Error;
};

}  // namespace devcorr
