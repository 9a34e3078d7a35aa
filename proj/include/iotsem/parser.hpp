#pragma once

#include <stdexcept>
#include <string>

#include "iotsem/congruence.hpp"

namespace iotsem {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

struct ParsedModel {
    ModelUniverse universe;
    Network network;
};

// Parses a model file: universe declarations, named process definitions
// (textual macros, expanded at use site), and the system block.
ParsedModel parse_model(const std::string& text);

}  // namespace iotsem
