#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtqc/units.hpp"

namespace mtqc {

struct GridSize {
    int rows = 0;
    int cols = 0;

    [[nodiscard]] constexpr std::int64_t area() const {
        return static_cast<std::int64_t>(rows) * cols;
    }
    friend constexpr bool operator==(GridSize, GridSize) = default;
};

enum class Arm { North, East, South, West };
enum class ZoneKind { Gate, Readout, Loading };
enum class SiteKind { Data, Measure, Loading };

const char* to_string(ZoneKind z);
const char* to_string(SiteKind s);

/// X-junction unit cell. Gate and readout arms must be perpendicular so the
/// readout beams never cross a gate zone.
struct JunctionSpec {
    Length pitch = millimetres(2.5);
    Length ion_height = micrometres(100.0);
    Arm gate_arm = Arm::East;
    Arm readout_arm = Arm::North;
    Arm loading_arm = Arm::West;

    void validate() const;
};

/// One RF-resonator electrical section of a module.
struct SubmoduleSpec {
    GridSize junction_grid{6, 6};
    int static_electrodes = 1224;
    int gradient_wires = 108;
    double capacitance_pF = 80.0;
    double q_factor = 200.0;
    int dac_channels_per_layer = 160;
    double capacitance_limit_pF = 80.0;
    double q_factor_floor = 200.0;

    void validate() const;
};

struct ModuleSpec {
    Length wafer_side = millimetres(90.0);
    GridSize submodule_grid{6, 6};
    double gradient_T_per_m = 150.0;
    Current wire_current = Current(10.0);
};

struct ChamberSpec {
    Length side = Length(4.5);
    /// Modules per chamber. 1715 x 1296 = 2'222'640 junctions, the smallest
    /// whole-module capacity at which 10^9 ions fit in 15 x 15 chambers.
    std::int64_t module_capacity = 1715;
};

struct LatticeSpecs {
    JunctionSpec junction;
    SubmoduleSpec submodule;
    ModuleSpec module;
    ChamberSpec chamber;

    /// Checks every cross-spec invariant; throws ConfigError naming the field.
    void validate() const;

    [[nodiscard]] int junctions_per_module_side() const;
    [[nodiscard]] std::int64_t junctions_per_module() const;
    [[nodiscard]] std::int64_t junctions_per_chamber() const;
};

/// Junction position inside the global hierarchy.
struct JunctionAddress {
    std::int64_t chamber = 0;
    std::int64_t module = 0;  // within chamber
    int row = 0;               // within module
    int col = 0;

    friend bool operator==(const JunctionAddress&, const JunctionAddress&) = default;
};

struct LatticeAddress {
    JunctionAddress junction;
    SiteKind site = SiteKind::Data;

    friend bool operator==(const LatticeAddress&, const LatticeAddress&) = default;
};

struct LayoutSummary {
    std::int64_t junctions = 0;
    std::int64_t ion_sites = 0;
    std::int64_t submodules = 0;
    std::int64_t modules = 0;
    std::int64_t chambers = 0;
    std::int64_t loading_zones = 0;
    double floor_side_m = 0.0;
    double floor_area_m2 = 0.0;
};

/// Address space of `total_junctions` junctions packed module-first then
/// chamber-first. Within a module junctions fill submodule by submodule, so a
/// 36-junction layout is exactly one 6x6 electrical section.
///
/// Nothing per-site is materialised; all lookups are arithmetic, which keeps
/// a 5x10^8-junction machine as cheap as a single module.
class Layout {
public:
    Layout(std::int64_t total_junctions, LatticeSpecs specs);

    [[nodiscard]] const LatticeSpecs& specs() const { return specs_; }
    [[nodiscard]] std::int64_t total_junctions() const { return total_; }
    [[nodiscard]] std::int64_t ion_sites() const { return 2 * total_; }
    [[nodiscard]] std::int64_t modules() const { return modules_; }
    [[nodiscard]] std::int64_t chambers() const { return chambers_; }
    [[nodiscard]] std::int64_t submodules() const;
    [[nodiscard]] int module_side() const { return side_; }

    [[nodiscard]] JunctionAddress address(std::int64_t junction_index) const;
    [[nodiscard]] std::int64_t index(const JunctionAddress& a) const;
    [[nodiscard]] std::int64_t global_module(const JunctionAddress& a) const;

    [[nodiscard]] bool populated(std::int64_t global_module, int row, int col) const;
    [[nodiscard]] std::int64_t junctions_in_module(std::int64_t global_module) const;

    /// Loading-zone junction of each populated submodule: the junction of the
    /// submodule closest to the module edge, ties broken by (row, col).
    [[nodiscard]] std::vector<JunctionAddress> loading_junctions(std::int64_t global_module) const;
    [[nodiscard]] bool has_loading_zone(const JunctionAddress& a) const;
    [[nodiscard]] std::int64_t loading_zone_count() const;

    [[nodiscard]] LayoutSummary summary() const;

private:
    [[nodiscard]] std::int64_t local_index(int row, int col) const;
    [[nodiscard]] std::pair<int, int> local_position(std::int64_t local) const;
    [[nodiscard]] std::optional<std::pair<int, int>> loading_position(
        std::int64_t global_module, int sub_row, int sub_col) const;

    LatticeSpecs specs_;
    std::int64_t total_ = 0;
    std::int64_t modules_ = 0;
    std::int64_t chambers_ = 0;
    int side_ = 0;
};

Layout build_layout(std::int64_t total_junctions, const LatticeSpecs& specs = {});

/// Wafer layers of DACs needed to drive one submodule.
int dac_layers(const SubmoduleSpec& spec);

struct ChamberPlan {
    std::int64_t chambers = 0;
    Length floor_side;
};

ChamberPlan chambers_required(double total_ions, int ions_per_junction,
                              const LatticeSpecs& specs = {});

}  // namespace mtqc
