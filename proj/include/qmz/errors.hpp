#pragma once

#include <stdexcept>
#include <string>

namespace qmz {

// Bad parameters, grids too coarse for the physics, readout before the
// emitter has relaxed, or resource limits. The CLI maps these to exit 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInput : ValidationError {
    using ValidationError::ValidationError;
};

// Grid cannot resolve a rate scale (needs >= 50 samples per shortest scale).
struct ResolutionError : ValidationError {
    using ValidationError::ValidationError;
};

// t_final too small: the emitter still holds population above 1e-6.
struct PrematureReadout : ValidationError {
    using ValidationError::ValidationError;
};

// Estimated working-set size exceeds the configured memory budget.
struct ResourceLimit : ValidationError {
    using ValidationError::ValidationError;
};

// Stage-1 output support does not fit the remappable stage-2 window.
struct GridWindowError : ValidationError {
    using ValidationError::ValidationError;
};

// Internal consistency violated (probability out of range, conservation
// failure). The CLI maps these to exit 1.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qmz
