#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvws {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Query point or radial leaves the raster.
class OutOfBounds : public Error {
public:
    using Error::Error;
};

// A NODATA raster cell was touched by a query.
class NoData : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& reason)
        : Error("parse error at row " + std::to_string(row) + ": " + reason), row_(row), reason_(reason) {}

    std::size_t row() const { return row_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t row_;
    std::string reason_;
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(std::string field, std::size_t row = 0)
        : Error(row ? "invariant violated for '" + field + "' at row " + std::to_string(row)
                    : "invariant violated for '" + field + "'"),
          field_(std::move(field)), row_(row) {}

    const std::string& field() const { return field_; }
    std::size_t row() const { return row_; }

private:
    std::string field_;
    std::size_t row_;
};

// Input outside the validity domain of a propagation model.
class DomainError : public Error {
public:
    using Error::Error;
};

class NonMonotone : public Error {
public:
    using Error::Error;
};

class ChannelUnavailable : public Error {
public:
    ChannelUnavailable(int channel)
        : Error("channel " + std::to_string(channel) + " is not available at the query point"), channel_(channel) {}
    int channel() const { return channel_; }

private:
    int channel_;
};

}  // namespace tvws
