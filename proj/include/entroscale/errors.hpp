#pragma once

#include <stdexcept>
#include <string>

namespace entroscale {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct DecodeError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// Precondition / contract violations (empty-text, invalid-scale, ...).
struct DomainError : Error {
    using Error::Error;
};

}  // namespace entroscale
