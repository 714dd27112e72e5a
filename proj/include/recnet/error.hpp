#pragma once

#include <stdexcept>
#include <string>

namespace recnet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad ids, shapes, values, files).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter combination (schedules, GA settings, sizes).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace recnet
