#pragma once

#include <stdexcept>
#include <string>

namespace stochmem {

// All library failures derive from Error so callers can map them to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction parameters (bad taps, zero LFSR state, bad registry entry).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A value outside the domain an operation accepts.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input files.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace stochmem
