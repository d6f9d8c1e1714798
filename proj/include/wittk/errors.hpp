#pragma once

#include <stdexcept>
#include <string>

namespace wittk {

// Base class for all library errors. CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands live in different rings, or an operation got a value from the
// wrong ring entirely.
struct DescriptorMismatch : Error {
    using Error::Error;
};

// Exact division failed. Load-bearing: ghost inversion uses this to reject
// vectors that are not in the image of the ghost map.
struct NonIntegral : Error {
    using Error::Error;
};

// A truncation set, enumeration, or grid request exceeds the configured caps.
struct CapExceeded : Error {
    using Error::Error;
};

// Invalid argument values (non-prime p, u divisible by p, s <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// p-adic approximation too coarse; result did not stabilize under M -> M+4.
struct PrecisionError : Error {
    using Error::Error;
};

// An inverse system did not stabilize within the configured window.
struct StabilizationError : Error {
    using Error::Error;
};

}  // namespace wittk
