#pragma once

#include <stdexcept>
#include <string>

namespace plrec {

// Invalid physical input (non-positive scale, bad Maslov index, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Parameter outside the numerically meaningful window (overflow, k cap, ...).
struct RangeError : std::range_error {
    using std::range_error::range_error;
};

// Iterative/truncated computation failed to settle.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dominant-mode selection near an integer Floquet index is not unique.
// Carries both candidate characteristic values.
struct AmbiguityError : std::runtime_error {
    double candidate_a;
    double candidate_b;
    AmbiguityError(const std::string& msg, double a, double b)
        : std::runtime_error(msg), candidate_a(a), candidate_b(b) {}
};

// Perturbative formula evaluated at a resonant/singular parameter point.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pendulum-matrix span too small: band states leak to the level cutoff.
struct SpanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spatial grid unsuitable (turning point too close to the box edge,
// boundary reflection during propagation, mismatched grids).
struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wave-packet weight not captured by the available levels.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Norm drift beyond tolerance during propagation.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (schema violation, unknown key, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace plrec
