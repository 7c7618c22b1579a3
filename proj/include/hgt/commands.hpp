#pragma once

// Batch commands. Each one reads an ExperimentConfig and returns a JSON
// report carrying the config hash, the tool version, every tolerance it
// applied and one or more "pass" flags.

#include <string>

#include "hgt/config.hpp"

namespace hgt {

inline constexpr const char* kVersion = "1.0.0";

Json run_command(const ExperimentConfig& cfg);

/// True when every "pass" member anywhere in the report is true.
bool all_pass(const Json& report);

/// Sorted keys, two-space indent, numbers with 17 significant digits.
std::string dump_report(const Json& report);

/// {"re": rows, "im": rows}.
Json matrix_json(const Mat& m);

}  // namespace hgt
