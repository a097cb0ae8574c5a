#pragma once

namespace trackgraph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace trackgraph
