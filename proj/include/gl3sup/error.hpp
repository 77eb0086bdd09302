#pragma once

#include <stdexcept>
#include <string>

namespace gl3sup {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input-side errors. The CLI maps these to exit code 2.
class DomainError : public Error { using Error::Error; };
class InvalidPair : public Error { using Error::Error; };
class SingularMatrix : public Error { using Error::Error; };
class FeasibilityError : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class NormalizationError : public Error { using Error::Error; };

// Numerical failures. The CLI maps these to exit code 3.
class NonConvergence : public Error { using Error::Error; };
class IterationLimit : public Error { using Error::Error; };
class Overflow : public Error { using Error::Error; };

}  // namespace gl3sup
