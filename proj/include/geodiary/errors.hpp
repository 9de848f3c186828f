#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geodiary {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A row of an input file does not satisfy its schema. Carries the
/// 1-based row number and the offending field name.
class SchemaViolation : public Error {
public:
    SchemaViolation(const std::string& msg, std::size_t row, std::string field)
        : Error(msg + " (row " + std::to_string(row) + ", field " + field + ")"),
          row_(row), field_(std::move(field)) {}
    std::size_t row() const { return row_; }
    const std::string& field() const { return field_; }

private:
    std::size_t row_;
    std::string field_;
};

class RouterUnavailable : public Error {
public:
    explicit RouterUnavailable(const std::string& msg) : Error(msg) {}
};

class InvalidScenario : public Error {
public:
    explicit InvalidScenario(const std::string& msg) : Error(msg) {}
};

class TooFewPoints : public Error {
public:
    explicit TooFewPoints(const std::string& msg) : Error(msg) {}
};

class NoMatchingTrips : public Error {
public:
    explicit NoMatchingTrips(const std::string& msg) : Error(msg) {}
};

class EmptyPairs : public Error {
public:
    explicit EmptyPairs(const std::string& msg) : Error(msg) {}
};

class ZeroInferredDistance : public Error {
public:
    explicit ZeroInferredDistance(const std::string& msg) : Error(msg) {}
};

class SourceMismatch : public Error {
public:
    explicit SourceMismatch(const std::string& msg) : Error(msg) {}
};

class MixedStatistics : public Error {
public:
    explicit MixedStatistics(const std::string& msg) : Error(msg) {}
};

class MissingVariance : public Error {
public:
    explicit MissingVariance(const std::string& msg) : Error(msg) {}
};

}  // namespace geodiary
