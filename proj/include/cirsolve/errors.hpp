#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cirsolve {

/// Inputs whose shapes disagree: schema, tuple-id or attribute mismatches.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver was called outside its precondition.
class MisuseError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The instance has no consistent sample where one was required.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exponential solver would exceed its world cap or node budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t amount)
        : std::runtime_error(what), amount_(amount) {}
    /// World count or node count that triggered the error.
    std::uint64_t amount() const { return amount_; }

private:
    std::uint64_t amount_;
};

/// Malformed document or DSL text. `location` is "line N" or a field path.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& location, const std::string& message)
        : std::runtime_error(location.empty() ? message : location + ": " + message), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace cirsolve
