#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levykf {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A model, noise description or filter input violates its preconditions.
class SpecificationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A factorization met a non-positive pivot.
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, std::size_t pivot)
        : std::runtime_error(what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// An operation was invoked on an object that is not in the required state,
/// e.g. metrics requested from a record that was never filtered.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace levykf
