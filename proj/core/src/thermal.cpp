#include "mtqc/thermal.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mtqc/error.hpp"

namespace mtqc {

void WireSpec::validate() const {
    if (!(resistivity.si() > 0.0)) throw ConfigError("wire.resistivity", "must be > 0");
    if (!(width.si() > 0.0) || !(height.si() > 0.0)) throw ConfigError("wire.cross_section", "must be > 0");
    if (!(length.si() > 0.0)) throw ConfigError("wire.length", "must be > 0");
    if (current.si() < 0.0) throw ConfigError("wire.current", "must be >= 0");
    if (wires_per_junction < 0) throw ConfigError("wire.wires_per_junction", "must be >= 0");
}

Power wire_heat(const WireSpec& spec) {
    spec.validate();
    const Resistance r = spec.resistivity * spec.length / spec.cross_section();
    return spec.current * spec.current * r;
}

Power wire_power(const WireSpec& spec) { return static_cast<double>(spec.wires_per_junction) * wire_heat(spec); }

PowerBreakdown module_power(const LatticeSpecs& specs, const WireSpec& wire, Power dac_each, Power control_rf,
                            int dacs_per_layer) {
    specs.validate();
    if (dac_each.si() < 0.0) throw ConfigError("thermal.dac_power", "must be >= 0");
    if (control_rf.si() < 0.0) throw ConfigError("thermal.control_rf_power", "must be >= 0");
    if (dacs_per_layer < 0) throw ConfigError("thermal.dacs_per_layer", "must be >= 0");
    PowerBreakdown b;
    b.wires = static_cast<double>(specs.junctions_per_module()) * wire_power(wire);
    b.dac_count = static_cast<int>(specs.module.submodule_grid.area()) * dac_layers(specs.submodule) * dacs_per_layer;
    b.dacs = static_cast<double>(b.dac_count) * dac_each;
    b.control_rf = control_rf;
    b.total = b.wires + b.dacs + b.control_rf;
    b.module_area = specs.module.wafer_side * specs.module.wafer_side;
    b.flux = b.total / b.module_area;
    return b;
}

void CoolerSpec::validate() const {
    if (!(h.si() > 0.0)) throw ConfigError("cooler.h", "must be > 0");
    if (coolant.si() < 65.0 || coolant.si() > 77.0) throw ConfigError("cooler.coolant_temp", "must lie in [65, 77] K");
    const auto& c = conduction;
    if (!(c.silicon_thickness.si() > 0.0)) throw ConfigError("cooler.silicon_thickness", "must be > 0");
    if (!(c.k_silicon.si() > 0.0) || !(c.k_titanium.si() > 0.0) || !(c.k_copper.si() > 0.0)) {
        throw ConfigError("cooler.conductivity", "must be > 0");
    }
    if (!(c.spread_angle_deg > 0.0 && c.spread_angle_deg < 90.0)) throw ConfigError("cooler.spread_angle", "must be in (0, 90) degrees");
}

ThermalResistance spreading_resistance(Length w, Length l, Length t, ThermalConductivity k, double angle_deg) {
    const double tn = std::tan(angle_deg * std::numbers::pi / 180.0);
    const double a = std::min(w.si(), l.si());
    const double b = std::max(w.si(), l.si());
    const double g = 2.0 * t.si() * tn;
    if (std::abs(b - a) < 1e-15 * b) {
        // Square source: the log form degenerates to t / (k a (a + g)).
        return ThermalResistance(t.si() / (k.si() * a * (a + g)));
    }
    return ThermalResistance(std::log(b * (a + g) / (a * (b + g))) / (2.0 * k.si() * tn * (b - a)));
}

Temperature conduction_delta(const WireSpec& wire, const ConductionSpec& c) {
    const Power q = wire_heat(wire);
    const Area footprint = wire.width * wire.length;
    const ThermalResistance copper(0.5 * wire.height.si() / (c.k_copper.si() * footprint.si()));
    const ThermalResistance titanium(c.titanium_thickness.si() / (c.k_titanium.si() * footprint.si()));
    const ThermalResistance silicon =
        spreading_resistance(wire.width, wire.length, c.silicon_thickness, c.k_silicon, c.spread_angle_deg);
    return Temperature(q.si() * (copper.si() + titanium.si() + silicon.si()));
}

ThermalResult surface_temperature(const PowerBreakdown& power, const CoolerSpec& cooler, const WireSpec& wire) {
    cooler.validate();
    ThermalResult r;
    r.convective_delta = Temperature(power.flux.si() / cooler.h.si());
    r.conduction_delta = power.wires.si() > 0.0 ? conduction_delta(wire, cooler.conduction) : Temperature(0.0);
    r.delta_T = r.convective_delta + r.conduction_delta;
    r.surface = cooler.coolant + r.delta_T;
    r.wire = r.surface;

    WireSpec narrow = wire;
    narrow.width = micrometres(30.0);
    narrow.height = micrometres(60.0);
    r.narrow_section_delta = power.wires.si() > 0.0 ? conduction_delta(narrow, cooler.conduction) : Temperature(0.0);

    const Temperature hottest = cooler.coolant + r.convective_delta + r.narrow_section_delta;
    if (hottest > cooler.safety_bound) {
        std::ostringstream os;
        os << "over-temperature: wire reaches " << hottest.si() << " K, above the " << cooler.safety_bound.si()
           << " K bound";
        r.warnings.push_back(os.str());
    }
    return r;
}

}  // namespace mtqc
