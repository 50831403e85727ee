#pragma once

#include <string>
#include <vector>

#include "cli.hpp"

namespace specpol::cli {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

const std::vector<std::string>& scenario_names();

/// Defaults of a scenario; the keys define its schema.
io::json default_config(const std::string& scenario);

/// Defaults overridden by `overrides`. Unknown keys and type changes throw
/// Failure(kParse). A number given for a complex [re, im] entry becomes
/// [number, 0].
io::json merge_config(const std::string& scenario, const io::json& overrides);

/// "key=value" with value parsed as JSON (bare words as strings).
io::json parse_assignment(const std::string& text);

/// Runs the pipeline, writing artifacts through `out`; returns the embedded
/// checks.
std::vector<Check> run_scenario(const std::string& scenario, const io::json& config, OutputSet& out);

}  // namespace specpol::cli
