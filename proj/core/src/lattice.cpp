#include "mtqc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtqc/error.hpp"

namespace mtqc {
namespace {

bool perpendicular(Arm a, Arm b) {
    const bool a_ns = a == Arm::North || a == Arm::South;
    const bool b_ns = b == Arm::North || b == Arm::South;
    return a_ns != b_ns;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Integer ratio of two lengths; throws if they are not commensurate.
int whole_ratio(Length big, Length small, const char* field) {
    const double r = big / small;
    const double rounded = std::round(r);
    if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * rounded) {
        throw ConfigError(field, "must be a whole multiple of the junction pitch");
    }
    return static_cast<int>(rounded);
}

}  // namespace

const char* to_string(ZoneKind z) {
    switch (z) {
        case ZoneKind::Gate: return "gate";
        case ZoneKind::Readout: return "readout";
        case ZoneKind::Loading: return "loading";
    }
    return "?";
}

const char* to_string(SiteKind s) {
    switch (s) {
        case SiteKind::Data: return "data";
        case SiteKind::Measure: return "measure";
        case SiteKind::Loading: return "loading";
    }
    return "?";
}

void JunctionSpec::validate() const {
    if (!(pitch.si() > 0.0)) throw ConfigError("junction.pitch", "must be > 0");
    if (!(ion_height.si() > 0.0)) throw ConfigError("junction.ion_height", "must be > 0");
    if (!perpendicular(gate_arm, readout_arm)) {
        throw ConfigError("junction.readout_arm", "gate and readout arms must be perpendicular");
    }
    if (loading_arm == gate_arm || loading_arm == readout_arm) {
        throw ConfigError("junction.loading_arm", "loading zone needs its own arm");
    }
}

void SubmoduleSpec::validate() const {
    if (junction_grid.rows < 1 || junction_grid.cols < 1) {
        throw ConfigError("submodule.junction_grid", "must be at least 1x1");
    }
    if (static_electrodes < 0) throw ConfigError("submodule.static_electrodes", "must be >= 0");
    if (gradient_wires < 0) throw ConfigError("submodule.gradient_wires", "must be >= 0");
    if (dac_channels_per_layer <= 0) {
        throw ConfigError("submodule.dac_channels_per_layer", "must be > 0");
    }
    if (capacitance_pF > capacitance_limit_pF) {
        throw ConfigError("submodule.capacitance_pF", "exceeds the resonator drive limit");
    }
    if (q_factor < q_factor_floor) throw ConfigError("submodule.q_factor", "below resonator floor");
}

void LatticeSpecs::validate() const {
    junction.validate();
    submodule.validate();
    if (module.submodule_grid.rows < 1 || module.submodule_grid.cols < 1) {
        throw ConfigError("module.submodule_grid", "must be at least 1x1");
    }
    const int side = whole_ratio(module.wafer_side, junction.pitch, "module.wafer_side");
    if (side != submodule.junction_grid.rows * module.submodule_grid.rows ||
        side != submodule.junction_grid.cols * module.submodule_grid.cols) {
        throw ConfigError("module.submodule_grid",
                          "submodules x junctions-per-submodule must tile the wafer");
    }
    if (!(chamber.side.si() > 0.0)) throw ConfigError("chamber.side", "must be > 0");
    if (chamber.module_capacity < 1) throw ConfigError("chamber.module_capacity", "must be >= 1");
    const double per_side = std::floor(chamber.side / module.wafer_side + 1e-9);
    if (static_cast<double>(chamber.module_capacity) > per_side * per_side) {
        throw ConfigError("chamber.module_capacity", "exceeds the geometric packing bound");
    }
}

int LatticeSpecs::junctions_per_module_side() const {
    return static_cast<int>(std::lround(module.wafer_side / junction.pitch));
}

std::int64_t LatticeSpecs::junctions_per_module() const {
    const std::int64_t s = junctions_per_module_side();
    return s * s;
}

std::int64_t LatticeSpecs::junctions_per_chamber() const {
    return chamber.module_capacity * junctions_per_module();
}

Layout::Layout(std::int64_t total_junctions, LatticeSpecs specs) : specs_(std::move(specs)) {
    if (total_junctions < 1) throw ConfigError("total_junctions", "must be >= 1");
    specs_.validate();
    total_ = total_junctions;
    side_ = specs_.junctions_per_module_side();
    modules_ = ceil_div(total_, specs_.junctions_per_module());
    chambers_ = ceil_div(modules_, specs_.chamber.module_capacity);
}

std::int64_t Layout::submodules() const {
    const auto& g = specs_.submodule.junction_grid;
    const std::int64_t per_sub = g.area();
    const std::int64_t full_modules = total_ / specs_.junctions_per_module();
    const std::int64_t rem = total_ % specs_.junctions_per_module();
    return full_modules * specs_.module.submodule_grid.area() + ceil_div(rem, per_sub);
}

std::int64_t Layout::local_index(int row, int col) const {
    const auto& g = specs_.submodule.junction_grid;
    const int sub_r = row / g.rows;
    const int sub_c = col / g.cols;
    const int sub = sub_r * specs_.module.submodule_grid.cols + sub_c;
    return static_cast<std::int64_t>(sub) * g.area() + (row % g.rows) * g.cols + (col % g.cols);
}

std::pair<int, int> Layout::local_position(std::int64_t local) const {
    const auto& g = specs_.submodule.junction_grid;
    const auto sub = static_cast<int>(local / g.area());
    const auto within = static_cast<int>(local % g.area());
    const int sub_r = sub / specs_.module.submodule_grid.cols;
    const int sub_c = sub % specs_.module.submodule_grid.cols;
    return {sub_r * g.rows + within / g.cols, sub_c * g.cols + within % g.cols};
}

JunctionAddress Layout::address(std::int64_t junction_index) const {
    if (junction_index < 0 || junction_index >= total_) {
        throw std::out_of_range("junction index outside layout");
    }
    const std::int64_t per_module = specs_.junctions_per_module();
    const std::int64_t gm = junction_index / per_module;
    const auto [r, c] = local_position(junction_index % per_module);
    return {gm / specs_.chamber.module_capacity, gm % specs_.chamber.module_capacity, r, c};
}

std::int64_t Layout::global_module(const JunctionAddress& a) const {
    return a.chamber * specs_.chamber.module_capacity + a.module;
}

std::int64_t Layout::index(const JunctionAddress& a) const {
    if (a.chamber < 0 || a.module < 0 || a.module >= specs_.chamber.module_capacity ||
        a.row < 0 || a.col < 0 || a.row >= side_ || a.col >= side_) {
        throw std::out_of_range("junction address outside hierarchy bounds");
    }
    const std::int64_t idx =
        global_module(a) * specs_.junctions_per_module() + local_index(a.row, a.col);
    if (idx >= total_) throw std::out_of_range("junction address not populated");
    return idx;
}

std::int64_t Layout::junctions_in_module(std::int64_t gm) const {
    const std::int64_t per_module = specs_.junctions_per_module();
    if (gm < 0 || gm >= modules_) return 0;
    return std::min(per_module, total_ - gm * per_module);
}

bool Layout::populated(std::int64_t gm, int row, int col) const {
    if (row < 0 || col < 0 || row >= side_ || col >= side_) return false;
    return local_index(row, col) < junctions_in_module(gm);
}

std::optional<std::pair<int, int>> Layout::loading_position(std::int64_t gm, int sub_r,
                                                            int sub_c) const {
    const auto& g = specs_.submodule.junction_grid;
    std::optional<std::pair<int, int>> best;
    int best_dist = std::numeric_limits<int>::max();
    for (int r = sub_r * g.rows; r < (sub_r + 1) * g.rows; ++r) {
        for (int c = sub_c * g.cols; c < (sub_c + 1) * g.cols; ++c) {
            if (!populated(gm, r, c)) continue;
            const int dist = std::min({r, c, side_ - 1 - r, side_ - 1 - c});
            if (dist < best_dist) {
                best_dist = dist;
                best = std::pair{r, c};
            }
        }
    }
    return best;
}

std::vector<JunctionAddress> Layout::loading_junctions(std::int64_t gm) const {
    std::vector<JunctionAddress> out;
    if (gm < 0 || gm >= modules_) return out;
    const auto& sg = specs_.module.submodule_grid;
    for (int sr = 0; sr < sg.rows; ++sr) {
        for (int sc = 0; sc < sg.cols; ++sc) {
            if (auto p = loading_position(gm, sr, sc)) {
                out.push_back({gm / specs_.chamber.module_capacity,
                               gm % specs_.chamber.module_capacity, p->first, p->second});
            }
        }
    }
    return out;
}

bool Layout::has_loading_zone(const JunctionAddress& a) const {
    const auto& g = specs_.submodule.junction_grid;
    const auto p = loading_position(global_module(a), a.row / g.rows, a.col / g.cols);
    return p && p->first == a.row && p->second == a.col;
}

std::int64_t Layout::loading_zone_count() const {
    // Every populated submodule owns exactly one loading junction.
    return submodules();
}

LayoutSummary Layout::summary() const {
    LayoutSummary s;
    s.junctions = total_;
    s.ion_sites = ion_sites();
    s.submodules = submodules();
    s.modules = modules_;
    s.chambers = chambers_;
    s.loading_zones = loading_zone_count();
    const auto per_side = static_cast<double>(
        static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(chambers_)) - 1e-12)));
    s.floor_side_m = per_side * specs_.chamber.side.si();
    s.floor_area_m2 = s.floor_side_m * s.floor_side_m;
    return s;
}

Layout build_layout(std::int64_t total_junctions, const LatticeSpecs& specs) {
    return Layout(total_junctions, specs);
}

int dac_layers(const SubmoduleSpec& spec) {
    if (spec.dac_channels_per_layer <= 0) {
        throw ConfigError("submodule.dac_channels_per_layer", "must be > 0");
    }
    const int outputs = spec.static_electrodes + spec.gradient_wires;
    return std::max(1, (outputs + spec.dac_channels_per_layer - 1) / spec.dac_channels_per_layer);
}

ChamberPlan chambers_required(double total_ions, int ions_per_junction, const LatticeSpecs& specs) {
    if (ions_per_junction < 1) throw ConfigError("ions_per_junction", "must be >= 1");
    if (!(total_ions >= 0.0)) throw ConfigError("total_ions", "must be >= 0");
    const double per_chamber =
        static_cast<double>(ions_per_junction) * static_cast<double>(specs.junctions_per_chamber());
    const auto chambers =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(total_ions / per_chamber - 1e-12)));
    const double side_count = std::ceil(std::sqrt(static_cast<double>(chambers)) - 1e-12);
    return {chambers, specs.chamber.side * side_count};
}

}  // namespace mtqc
