#pragma once

#include <stdexcept>
#include <string>

namespace rydfloq {

// Base for every error raised by the library. Callers that only care about
// "something in the simulation failed" catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on the arguments was violated (sizes, ranges, enums).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A numerical check failed: non-unitary input, tolerance drift, a degenerate
// quantity that has no defined value.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace rydfloq
