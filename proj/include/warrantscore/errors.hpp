#pragma once

#include <stdexcept>
#include <string>

namespace warrantscore {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad run configuration: unresolved backend profile, missing API key env var,
// malformed config file. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Bad input data: corrupt corpus, misaligned warrant sidecar, undefined
// statistic. CLI exit code 4.
class DataError : public Error {
public:
    using Error::Error;
};

// Network-level failure after the profile's own retries were exhausted.
class TransportError : public Error {
public:
    using Error::Error;
};

// The remote endpoint answered, but not in the expected shape.
class ProtocolError : public Error {
public:
    using Error::Error;
};

} // namespace warrantscore
