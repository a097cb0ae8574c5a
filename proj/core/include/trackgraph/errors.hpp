#pragma once

#include <stdexcept>

namespace trackgraph {

// Error taxonomy maps 1:1 onto CLI exit codes (see tools/).

// Unreadable or malformed input data. Exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph or metric computation rejected its input. Exit code 3.
struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad run configuration (missing paths, invalid values). Exit code 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace trackgraph
