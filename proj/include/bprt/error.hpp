#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bprt {

// Base for every recoverable error raised by the library. The CLI maps these
// to exit code 2 (data errors) unless a narrower mapping applies.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class SingularThreshold : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A rate whose denominator class (positives or negatives) is empty.
class UndefinedRate : public Error {
public:
    UndefinedRate(const std::string& what, std::string missing_class)
        : Error(what), missing_class_(std::move(missing_class)) {}

    [[nodiscard]] const std::string& missing_class() const { return missing_class_; }

private:
    std::string missing_class_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class ChecksumError : public Error {
public:
    using Error::Error;
};

// Configuration rejected before any work started (CLI exit code 1).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed; indicates a bug (CLI exit code 3).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace bprt
