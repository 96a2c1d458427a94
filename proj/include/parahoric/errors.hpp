#pragma once

#include <stdexcept>
#include <string>

namespace parahoric {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a requested object exceeds a configured enumeration bound.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// Raised by inversion routines when the residue reduction is singular.
class NotAUnitError : public Error {
public:
    using Error::Error;
};

/// Inconsistent block shapes, compositions or dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Bad user-supplied arguments (non-prime characteristic and the like).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace parahoric
