#pragma once

#include <stdexcept>
#include <string>

namespace arrkit {

// Base for all library errors; messages are meant to be shown to users as is.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV rows, config files, panels).
class DataError : public Error {
public:
    using Error::Error;
};

// Non-finite loss or divergence during model fitting.
class TrainingError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw Error(message);
}

}  // namespace arrkit
