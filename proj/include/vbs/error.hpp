#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid settings (weights, counts, flags). Maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problems with input data: corpus, gold annotations, pattern or rule files.
/// Maps to CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed record in a line-delimited file.
class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& reason)
        : DataError(source + ":" + std::to_string(line) + ": " + reason), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed records that violate a domain invariant.
class ValidationError : public DataError {
public:
    using DataError::DataError;
};

/// Pattern DSL compile failure; `position` is a byte offset into the expression.
class PatternError : public DataError {
public:
    PatternError(const std::string& pattern_id, std::size_t position, const std::string& reason)
        : DataError("pattern '" + pattern_id + "' at " + std::to_string(position) + ": " + reason),
          pattern_id_(pattern_id),
          position_(position) {}

    const std::string& pattern_id() const noexcept { return pattern_id_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string pattern_id_;
    std::size_t position_;
};

} // namespace vbs
