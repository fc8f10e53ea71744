#pragma once

#include <stdexcept>
#include <string>

namespace fpmatch {

/// Base class for every error raised by the matcher library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A template with no minutiae was handed to an operation that needs pairs.
class EmptyTemplate : public Error {
public:
    EmptyTemplate() : Error("template has no minutiae") {}
};

/// The pair queue carries no weight, so centroids are undefined.
class ZeroTotalWeight : public Error {
public:
    ZeroTotalWeight() : Error("sum of pair weights is zero") {}
};

class FormatError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DuplicateEntry : public Error {
public:
    using Error::Error;
};

class PlacementFailure : public Error {
public:
    using Error::Error;
};

class EmptyScores : public Error {
public:
    EmptyScores() : Error("genuine and impostor score lists must both be non-empty") {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Raised when the matching loop observes a state its invariants forbid.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace fpmatch
