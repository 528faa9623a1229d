#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcwb {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Syntax error from the expression parser; `offset` is the byte position
// of the first offending byte in the input.
struct ParseError : Error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

// Expansion or evaluation hit a pole; `order` is the pole order.
struct PoleError : Error {
    long order;
    PoleError(long ord, const std::string& msg)
        : Error(msg), order(ord) {}
};

// Connection entry fails the good-reduction precondition at a place.
struct BadReductionError : Error {
    int row, col;
    BadReductionError(int r, int c, const std::string& msg)
        : Error(msg), row(r), col(c) {}
};

// p-curvature requested at a ramified place; callers should use the
// divisibility check instead.
struct RamifiedPlaceError : Error {
    explicit RamifiedPlaceError(const std::string& msg) : Error(msg) {}
};

} // namespace pcwb
