#include "mtqc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <numbers>

#include "defaults_json.hpp"
#include "mtqc/error.hpp"

namespace mtqc::cli {
namespace {

json::json_pointer pointer(const std::string& dotted) {
    std::string p;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const auto dot = dotted.find('.', start);
        p += '/' + dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return json::json_pointer(p);
}

void check_known(const json& layer, const json& reference, const std::string& prefix) {
    if (!layer.is_object()) return;
    for (const auto& [key, value] : layer.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!reference.contains(key)) throw ConfigError(path, "unknown configuration key");
        const auto& ref = reference.at(key);
        if (ref.is_object()) {
            if (!value.is_object()) throw ConfigError(path, "expected an object");
            check_known(value, ref, path);
        }
    }
}

constexpr double um = 1e-6;

}  // namespace

json defaults() { return json::parse(kDefaultsJson); }

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("results")) return j.at("config");
    return j;
}

json resolve(const json& file_layer, const json& flag_layer) {
    json cfg = defaults();
    for (const json* layer : {&file_layer, &flag_layer}) {
        if (layer->is_null()) continue;
        if (!layer->is_object()) throw ConfigError("config", "top level must be an object");
        check_known(*layer, cfg, "");
        cfg.merge_patch(*layer);
    }
    if (const char* env = std::getenv("MTQC_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        if (!flag_layer.contains("output") || !flag_layer.at("output").contains("dir")) cfg["output"]["dir"] = env;
    }
    return cfg;
}

template <typename T>
T get(const json& cfg, const std::string& dotted) {
    const auto ptr = pointer(dotted);
    if (!cfg.contains(ptr)) throw ConfigError(dotted, "missing");
    try {
        return cfg.at(ptr).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(dotted, "has the wrong type");
    }
}

template double get<double>(const json&, const std::string&);
template int get<int>(const json&, const std::string&);
template bool get<bool>(const json&, const std::string&);
template std::string get<std::string>(const json&, const std::string&);
template std::uint64_t get<std::uint64_t>(const json&, const std::string&);
template std::vector<int> get<std::vector<int>>(const json&, const std::string&);
template std::vector<double> get<std::vector<double>>(const json&, const std::string&);

LatticeSpecs lattice_specs(const json& c) {
    LatticeSpecs s;
    s.junction.pitch = millimetres(get<double>(c, "lattice.junction_pitch_mm"));
    s.junction.ion_height = micrometres(get<double>(c, "lattice.ion_height_um"));
    s.module.wafer_side = millimetres(get<double>(c, "lattice.wafer_side_mm"));
    const int sub = get<int>(c, "lattice.submodule_grid");
    const int jg = get<int>(c, "lattice.junction_grid");
    s.module.submodule_grid = {sub, sub};
    s.submodule.junction_grid = {jg, jg};
    s.submodule.static_electrodes = get<int>(c, "lattice.static_electrodes");
    s.submodule.gradient_wires = get<int>(c, "lattice.gradient_wires");
    s.submodule.dac_channels_per_layer = get<int>(c, "lattice.dac_channels_per_layer");
    s.submodule.capacitance_pF = get<double>(c, "lattice.capacitance_pF");
    s.submodule.q_factor = get<double>(c, "lattice.q_factor");
    s.chamber.side = Length(get<double>(c, "lattice.chamber_side_m"));
    s.chamber.module_capacity = get<int>(c, "lattice.chamber_module_capacity");
    s.validate();
    return s;
}

TimingParams timing(const json& c) {
    TimingParams t;
    t.t_1q = microseconds(get<double>(c, "timing.t_1q_us"));
    t.t_2q = microseconds(get<double>(c, "timing.t_2q_us"));
    t.t_meas = microseconds(get<double>(c, "timing.t_meas_us"));
    t.t_shuttle = microseconds(get<double>(c, "timing.t_shuttle_us"));
    t.t_cycle = microseconds(get<double>(c, "timing.t_cycle_us"));
    t.validate();
    return t;
}

ErrorBudget error_budget(const json& c) {
    ErrorBudget b;
    b.p_phys = get<double>(c, "estimate.p_phys");
    b.p_threshold = get<double>(c, "estimate.budget.p_threshold");
    b.prefactor = get<double>(c, "estimate.budget.prefactor");
    b.target_total_failure = get<double>(c, "estimate.budget.target_total_failure");
    b.validate();
    return b;
}

ResourceModel resource_model(const json& c) {
    ResourceModel m;
    m.logical_overhead = get<int>(c, "estimate.model.logical_overhead");
    m.cycle_coefficient = get<double>(c, "estimate.model.cycle_coefficient");
    m.error_exponent = get<double>(c, "estimate.model.error_exponent");
    m.p_reference = get<double>(c, "estimate.model.p_reference");
    m.tile_coefficient = get<double>(c, "estimate.model.tile_coefficient");
    m.tile_padding = get<double>(c, "estimate.model.tile_padding");
    m.factory_tiles = get<double>(c, "estimate.model.factory_tiles");
    m.medium_range_reduction = get<double>(c, "estimate.model.medium_range_reduction");
    m.medium_range_min_junctions = get<int>(c, "estimate.model.medium_range_min_junctions");
    m.ions_per_junction = get<int>(c, "estimate.model.ions_per_junction");
    m.validate();
    return m;
}

FactoringJob factoring_job(const json& c) {
    FactoringJob j;
    j.bits = get<int>(c, "estimate.bits");
    j.medium_range_shuttling = get<bool>(c, "estimate.medium_range_shuttling");
    j.shuttle_range = get<int>(c, "estimate.shuttle_range");
    j.validate();
    return j;
}

WireSpec wire_spec(const json& c) {
    WireSpec w;
    w.resistivity = Resistivity(get<double>(c, "thermal.wire.resistivity_ohm_m"));
    w.width = micrometres(get<double>(c, "thermal.wire.width_um"));
    w.height = micrometres(get<double>(c, "thermal.wire.height_um"));
    w.length = millimetres(get<double>(c, "thermal.wire.length_mm"));
    w.current = Current(get<double>(c, "thermal.wire.current_A"));
    w.wires_per_junction = get<int>(c, "thermal.wire.wires_per_junction");
    w.validate();
    return w;
}

CoolerSpec cooler_spec(const json& c) {
    CoolerSpec s;
    s.h = HeatTransferCoefficient(get<double>(c, "thermal.cooler.h_W_per_mm2_K") * 1e6);
    s.coolant = Temperature(get<double>(c, "thermal.cooler.coolant_K"));
    s.safety_bound = Temperature(get<double>(c, "thermal.cooler.safety_bound_K"));
    auto& k = s.conduction;
    k.silicon_thickness = millimetres(get<double>(c, "thermal.conduction.silicon_thickness_mm"));
    k.k_silicon = ThermalConductivity(get<double>(c, "thermal.conduction.k_silicon"));
    k.spread_angle_deg = get<double>(c, "thermal.conduction.spread_angle_deg");
    k.titanium_thickness = Length(get<double>(c, "thermal.conduction.titanium_thickness_nm") * 1e-9);
    k.k_titanium = ThermalConductivity(get<double>(c, "thermal.conduction.k_titanium"));
    k.k_copper = ThermalConductivity(get<double>(c, "thermal.conduction.k_copper"));
    s.validate();
    return s;
}

TrapGeometry trap_geometry(const json& c) {
    const auto kind = get<std::string>(c, "field.geometry");
    const double a = get<double>(c, "field.rail_width_um") * um;
    const double b = get<double>(c, "field.center_width_um") * um;
    const double half = get<double>(c, "field.half_length_um") * um;
    const double outer = get<double>(c, "field.outer_width_um") * um;
    if (kind == "five_wire") return five_wire(a, b, -half, half, outer);
    if (kind == "module_boundary") {
        const auto m = get<std::vector<double>>(c, "field.misalignment_um");
        if (m.size() != 3) throw ConfigError("field.misalignment_um", "needs three components");
        for (const double v : m) {
            if (v < 0.0) throw ConfigError("field.misalignment_um", "components must be >= 0");
        }
        return module_boundary(a, b, half, get<double>(c, "field.gap_um") * um, {m[0] * um, m[1] * um, m[2] * um},
                               outer);
    }
    if (kind == "x_junction") return x_junction(a, b, half, get<double>(c, "field.taper_um") * um, outer);
    if (kind == "interrupted_rails") {
        return interrupted_rails(a, b, half, get<double>(c, "field.interruption_um") * um, outer);
    }
    return read_geometry_file(kind);
}

MeshOptions mesh_options(const json& c) {
    MeshOptions m;
    m.min_panel = get<double>(c, "field.mesh.min_panel_um") * um;
    m.max_panel = get<double>(c, "field.mesh.max_panel_um") * um;
    m.grading = get<double>(c, "field.mesh.grading");
    m.density = get<double>(c, "field.mesh.density");
    return m;
}

DriveParams drive_params(const json& c) {
    DriveParams d;
    d.omega = 2.0 * std::numbers::pi * get<double>(c, "field.drive.frequency_MHz") * 1e6;
    d.mass_kg = get<double>(c, "field.drive.mass_u") * 1.66053906660e-27;
    d.v_rf = get<double>(c, "field.drive.v_rf");
    d.validate();
    return d;
}

BarrierOptions barrier_options(const json& c) {
    BarrierOptions o;
    o.y_begin = get<double>(c, "field.barrier.y_begin_um") * um;
    o.y_end = get<double>(c, "field.barrier.y_end_um") * um;
    o.slices = get<int>(c, "field.barrier.slices");
    o.target_depth_meV = get<double>(c, "field.barrier.target_depth_meV");
    o.z_guess = get<double>(c, "field.barrier.z_guess_um") * um;
    o.min_depth_fraction = get<double>(c, "field.barrier.min_depth_fraction");
    o.mesh = mesh_options(c);
    if (!(o.y_end > o.y_begin)) throw ConfigError("field.barrier.y_end_um", "must exceed y_begin_um");
    if (!(o.target_depth_meV > 0.0)) throw ConfigError("field.barrier.target_depth_meV", "must be > 0");
    return o;
}

Basis basis(const json& c) {
    const auto b = get<std::string>(c, "simulate.basis");
    if (b == "Z") return Basis::Z;
    if (b == "X") return Basis::X;
    throw ConfigError("simulate.basis", "must be \"Z\" or \"X\"");
}

}  // namespace mtqc::cli
