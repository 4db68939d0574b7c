#pragma once

#include <stdexcept>
#include <string>

namespace singlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs outside the admissible (N, p, q, M) region or an operation's domain.
class ParameterDomainError : public Error {
public:
    using Error::Error;
};

class SingularInputError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class NonconvergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace singlab
