#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace abem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MissingNodeError : public Error {
public:
    explicit MissingNodeError(std::uint64_t id)
        : Error("node " + std::to_string(id) + " is not in the snapshot"), id_(id) {}

    std::uint64_t node() const noexcept { return id_; }

private:
    std::uint64_t id_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace abem
