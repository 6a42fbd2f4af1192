#pragma once

#include <stdexcept>
#include <string>

namespace equant {

// Representation parameters violate their invariants (dim < 2, bad grid window, hbar <= 0).
struct InvalidRepresentation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RepresentationMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite values or a numeric breakdown.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HermiticityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid too coarse or too narrow for the requested accuracy.
struct ResolutionError : std::runtime_error {
    ResolutionError(const std::string& what, long suggested)
        : std::runtime_error(what), suggested_points(suggested) {}
    long suggested_points;
};

struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateTransform : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorRequired : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), last_valid_time(t) {}
    double last_valid_time;
};

}  // namespace equant
