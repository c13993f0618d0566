#pragma once

#include <stdexcept>
#include <string>

namespace bonusrank {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (dimension mismatch, bad permutation, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// A data-structure invariant does not hold (e.g. an id listed in two groups).
class InvariantError : public Error {
public:
    using Error::Error;
};

class DegenerateColumnError : public Error {
public:
    using Error::Error;
};

// Malformed file or text input.
class InputError : public Error {
public:
    using Error::Error;
};

// A solver produced something that fails independent re-verification.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

// Request is outside what an exact solver is configured to attempt.
class RefusalError : public Error {
public:
    using Error::Error;
};

}  // namespace bonusrank
