#pragma once

#include <stdexcept>

namespace dquad {

// Thrown when a caller violates a documented precondition (bad order, empty
// domain, non-finite parameter, ...). Distinct from numerical failure, which
// is reported through quad::NonConvergence.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace dquad
