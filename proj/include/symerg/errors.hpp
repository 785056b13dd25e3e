#pragma once

#include <stdexcept>
#include <string>

namespace symerg {

// Error taxonomy. The CLI maps these onto exit codes: InputError -> 2,
// ResourceError -> 3, everything else -> 1.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (bad letter, bad flag, bad config).
class InputError : public Error {
public:
    using Error::Error;
};

// A configured cap or horizon was exceeded before the answer was certain.
class ResourceError : public Error {
public:
    using Error::Error;
};

// A structural property that must hold by construction failed.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Degenerate objects: no nontrivial return word, zero denominators, ...
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace symerg
