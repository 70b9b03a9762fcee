#ifndef TRANSQUAD_ERRORS_HPP
#define TRANSQUAD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace transquad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Successor requested at the top of the index set.
struct AddressAtSup : Error {
    using Error::Error;
};

// Mixed value spaces (or mismatched dimensions) in a vector operation.
struct SpaceMismatch : Error {
    using Error::Error;
};

// The convergence window never closed within the iteration budget.
struct NotConvergent : Error {
    using Error::Error;
};

// A certified remainder bound exists but exceeds the requested tolerance.
struct ToleranceUnachievable : Error {
    using Error::Error;
};

struct NotLocallySummable : Error {
    using Error::Error;
};

struct NotLocallyIntegrable : Error {
    using Error::Error;
};

// The oscillation oracle could not certify progress past a point.
struct NoProgress : Error {
    using Error::Error;
};

// Bisection recursion exceeded its configured depth (pathologically small gauge).
struct DepthExceeded : Error {
    using Error::Error;
};

struct UnknownId : Error {
    using Error::Error;
};

// Malformed configuration / spec file.
struct BadSpec : Error {
    using Error::Error;
};

} // namespace transquad

#endif
