#pragma once

#include <stdexcept>
#include <string>

namespace simkern {

struct MalformedToken : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateName : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteState : std::runtime_error {
    double time;
    NonFiniteState(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};
struct UnknownRate : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingEntity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EntityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotConverged : std::runtime_error {
    long iterations;
    NotConverged(const std::string& what, long iters) : std::runtime_error(what), iterations(iters) {}
};
struct NoAttractorWithinBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleTopology : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownScheme : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct KernelNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace simkern
