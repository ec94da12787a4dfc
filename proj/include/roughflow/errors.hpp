#pragma once

#include <stdexcept>
#include <string>

namespace roughflow {

// Thrown when two elements from different algebras (kind, alphabet or
// truncation order) meet in one expression.
struct signature_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Violated mathematical precondition (e.g. exp of an element with a
// nonzero grade-0 part).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A requested evaluation exceeds the declared regularity / derivative
// order of a vector field family.
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct blowup_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace roughflow
