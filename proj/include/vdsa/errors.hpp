#pragma once

#include <stdexcept>
#include <string>

namespace vdsa {

/// Malformed config / field / table input.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid input that violates a documented invariant.
/// The message names the offending field.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Vehicles placed on top of each other.
struct PlacementError : std::runtime_error {
    explicit PlacementError(const std::string& what) : std::runtime_error(what) {}
};

/// Sensing requested on a channel the duty-cycle phase does not permit.
struct PhaseViolation : std::logic_error {
    explicit PhaseViolation(const std::string& what) : std::logic_error(what) {}
};

/// Metrics query on a log with no relevant events.
struct EmptyLog : std::runtime_error {
    explicit EmptyLog(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vdsa
