#pragma once

#include <string>

#include "mtqc/report.hpp"

namespace mtqc::cli {

RunReport run_simulate(const json& cfg);
RunReport run_estimate(const json& cfg);
RunReport run_thermal(const json& cfg);
RunReport run_field(const json& cfg);
RunReport run_layout(const json& cfg);

/// Dispatches by name and fills in the wall time.
RunReport run(const std::string& command, const json& cfg);

}  // namespace mtqc::cli
