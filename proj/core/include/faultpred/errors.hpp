#pragma once

#include <stdexcept>
#include <string>

namespace faultpred {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A required column is missing or the header is malformed.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A cell could not be parsed; the message carries the row index.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Dataset unusable for training (single class, too few records).
class DegenerateDatasetError : public Error {
public:
    using Error::Error;
};

/// An argument violates a precondition (k > n, mismatched lengths, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Model training could not produce a usable model.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// A performance measure is undefined for the given counts.
class UndefinedMeasureError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace faultpred
