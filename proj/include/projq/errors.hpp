#pragma once

#include <stdexcept>
#include <string>

namespace projq {

// Base for everything thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation applied to a Hilbert space of the wrong kind.
struct kind_error : error {
    using error::error;
};

// Mixed dimensions / mismatched spaces.
struct dimension_error : error {
    using error::error;
};

// Truncation accuracy cannot be guaranteed (label outside the trust
// radius, empty diagnostic window, grid nodes overrunning the cutoff).
struct trust_error : error {
    using error::error;
};

// delta^2 collides with a spectral point; the caller must move it.
struct boundary_error : error {
    using error::error;
};

// Spectrum has no gap above its minimum cluster.
struct degenerate_gap_error : error {
    using error::error;
};

// Projector rank is zero; there is no physical subspace to expose.
struct empty_space_error : error {
    using error::error;
};

// Malformed ladders, schedules, probe levels and similar call arguments.
struct input_error : error {
    using error::error;
};

// Bracket matrix singular where invertibility is required.
struct not_second_class_error : error {
    using error::error;
};

// Newton projection onto the constraint surface failed too often.
struct surface_error : error {
    using error::error;
};

// Constraint drift exploded during integration.
struct step_size_error : error {
    using error::error;
};

// Polynomial / scenario text could not be parsed.
struct parse_error : error {
    using error::error;
};

// Scenario schema violation (unknown field, out-of-range value).
struct validation_error : error {
    using error::error;
};

// Exit-code policy shared by the command-line driver:
// 2 for validation/diagnostic failures, 1 for runtime errors.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const validation_error*>(&e) ||
        dynamic_cast<const parse_error*>(&e) ||
        dynamic_cast<const boundary_error*>(&e) ||
        dynamic_cast<const degenerate_gap_error*>(&e))
        return 2;
    return 1;
}

} // namespace projq
