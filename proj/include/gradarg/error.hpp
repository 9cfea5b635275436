#pragma once

#include <stdexcept>
#include <string>

namespace gradarg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by the text parsers; `line` is 1-based.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

    std::size_t line;
};

}  // namespace gradarg
