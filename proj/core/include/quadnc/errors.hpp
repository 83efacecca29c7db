#ifndef QUADNC_ERRORS_HPP
#define QUADNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadnc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A StateSpec or other physical parameter is outside its valid range.
struct ParameterError : Error {
    using Error::Error;
};

// A caller-supplied value (x, count, size, ...) violates a precondition.
struct InputError : Error {
    using Error::Error;
};

// A file could not be parsed (wrong magic, truncated, bad version, ...).
struct FormatError : Error {
    using Error::Error;
};

// An internal consistency check failed (non-monotone CDF, envelope breach).
struct InternalError : Error {
    using Error::Error;
};

// A corpus or sweep configuration is unusable.
struct ConfigError : Error {
    using Error::Error;
};

// Training could not proceed (single-class data, diverging loss, ...).
struct TrainingError : Error {
    using Error::Error;
};

// Filesystem trouble, as opposed to malformed content.
struct IoError : Error {
    using Error::Error;
};

} // namespace quadnc

#endif
