#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mtqc/cycle.hpp"
#include "mtqc/errors.hpp"
#include "mtqc/field.hpp"
#include "mtqc/lattice.hpp"
#include "mtqc/resources.hpp"
#include "mtqc/thermal.hpp"

namespace mtqc::cli {

using json = nlohmann::json;

/// The compiled-in defaults document.
json defaults();

/// Loads a config file. A previously emitted report is accepted too; its
/// embedded `config` block is used.
json load_config_file(const std::filesystem::path& path);

/// defaults <- file <- environment <- flags. Keys absent from the defaults
/// are rejected so typos surface as errors instead of being ignored.
json resolve(const json& file_layer, const json& flag_layer);

/// Typed lookup by dotted path; throws ConfigError naming the path.
template <typename T>
T get(const json& cfg, const std::string& dotted);

LatticeSpecs lattice_specs(const json& cfg);
TimingParams timing(const json& cfg);
ErrorBudget error_budget(const json& cfg);
ResourceModel resource_model(const json& cfg);
FactoringJob factoring_job(const json& cfg);
WireSpec wire_spec(const json& cfg);
CoolerSpec cooler_spec(const json& cfg);
TrapGeometry trap_geometry(const json& cfg);
MeshOptions mesh_options(const json& cfg);
DriveParams drive_params(const json& cfg);
BarrierOptions barrier_options(const json& cfg);
Basis basis(const json& cfg);

}  // namespace mtqc::cli
