#pragma once

#include <string>

#include "exocause/direction.hpp"

namespace exocause {

inline constexpr const char* kVersion = "0.1.0";

/// Full record of one inference run; serializes to the stable JSON schema
/// {version, input, config:{...}, tests:{xy:{...}, yx:{...}}, outcome,
/// wall_seconds}.
struct RunReport {
    std::string input;  // file path or generator descriptor
    DirectionDecision decision;
    double wall_seconds = 0.0;
};

std::string report_to_json(const RunReport& r, int indent = 2);

/// The same JSON with wall_seconds removed, for determinism comparisons.
std::string report_to_json_stable(const RunReport& r, int indent = 2);

}  // namespace exocause
