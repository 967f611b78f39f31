#pragma once

#include <stdexcept>
#include <string>

namespace ppflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text; message carries the offending position.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input violating a model invariant; message names the
// offending element(s).
struct SemanticError : Error {
    using Error::Error;
};

// Numerical failure (quadrature, root bracketing, factorization, ...).
struct NumericError : Error {
    using Error::Error;
};

} // namespace ppflow
