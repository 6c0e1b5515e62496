#pragma once

#include <stdexcept>
#include <string>

namespace rastab {

/// Raised when an input model or policy violates one of its invariants.
/// `field()` names the offending entry, e.g. "q_joint[0][1]".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string &message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A receiver chain without a stationary distribution (some destination is
/// unreachable, so the head-of-line packet can never complete).
class DegenerateChainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The supplied rates fall outside the conditions the region formulas assume.
class HypothesisError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace rastab
