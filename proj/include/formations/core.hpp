#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace formations {

// Error taxonomy shared by the library and the command line tool.
// ParseError: malformed input text. ArgumentError: structurally valid input
// that violates a precondition. UnsupportedError: a request outside the
// implemented range. ResourceError: filesystem or budget failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ArgumentError : Error {
    using Error::Error;
};
struct UnsupportedError : Error {
    using Error::Error;
};
struct ResourceError : Error {
    using Error::Error;
};

// Edge colors form the Klein four-group under xor when encoded as two-bit
// vectors: red=01, blue=10, purple=11, with 00 reserved for "no color yet".
// The product of two distinct colors is the third one; a color squares to
// the identity. All color arithmetic in the library is xor on this encoding.
enum class Color : std::uint8_t {
    none = 0,
    red = 1,
    blue = 2,
    purple = 3,
};

constexpr Color operator*(Color a, Color b) {
    return static_cast<Color>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

constexpr bool is_colored(Color c) { return c != Color::none; }

// Third color at a proper vertex: the product of the other two.
constexpr Color third_color(Color a, Color b) { return a * b; }

constexpr char color_char(Color c) {
    switch (c) {
    case Color::red: return 'r';
    case Color::blue: return 'b';
    case Color::purple: return 'p';
    default: return '-';
    }
}

inline Color parse_color(char ch) {
    switch (ch) {
    case 'r': return Color::red;
    case 'b': return Color::blue;
    case 'p': return Color::purple;
    default: throw ParseError(std::string("unknown color letter '") + ch + "'");
    }
}

inline std::string color_name(Color c) {
    switch (c) {
    case Color::red: return "red";
    case Color::blue: return "blue";
    case Color::purple: return "purple";
    default: return "none";
    }
}

// Darts (half edges) and the id types used across the library. Ids are dense
// indexes assigned at construction; -1 marks "absent".
using Dart = std::int32_t;
using VertexId = std::int32_t;
using EdgeId = std::int32_t;

constexpr Dart kNoDart = -1;

} // namespace formations
