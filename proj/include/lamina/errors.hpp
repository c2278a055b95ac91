#pragma once

#include <stdexcept>
#include <string>

namespace lamina {

// Base for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, preconditions, config.
struct usage_error : error {
    using error::error;
};

// A pullback admits more than one valid pairing against the given context.
struct ambiguous_pullback : error {
    using error::error;
};

// Preimage endpoints collide (leaf through the critical chord).
struct critical_collapse : error {
    using error::error;
};

// Ambiguous shorter arc: the two endpoints are antipodal.
struct ambiguous_arc : error {
    using error::error;
};

// A derivation needs more generations than the structure holds.
struct insufficient_depth : error {
    using error::error;
};

// A checked structural invariant failed; indicates a bug or bad data.
struct invariant_violation : error {
    using error::error;
};

// Iterative solver did not reach tolerance within its cap.
struct non_convergence : error {
    non_convergence(const std::string& msg, double last, double prev)
        : error(msg), last_estimate(last), previous_estimate(prev) {}
    double last_estimate;
    double previous_estimate;
};

} // namespace lamina
