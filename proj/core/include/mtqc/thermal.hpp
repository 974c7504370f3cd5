#pragma once

#include <string>
#include <vector>

#include "mtqc/lattice.hpp"
#include "mtqc/units.hpp"

namespace mtqc {

/// Copper gradient wire at cryogenic temperature.
struct WireSpec {
    Resistivity resistivity = Resistivity(2e-9);
    Length width = micrometres(125.0);
    Length height = micrometres(30.0);
    Length length = millimetres(2.5);
    Current current = Current(10.0);
    int wires_per_junction = 2;

    [[nodiscard]] Area cross_section() const { return width * height; }
    void validate() const;
};

/// Joule heating of one wire.
Power wire_heat(const WireSpec& spec);

/// Joule heating of all wires of one junction.
Power wire_power(const WireSpec& spec);

struct PowerBreakdown {
    Power wires;
    Power dacs;
    Power control_rf;
    Power total;
    Area module_area;
    PowerFlux flux;
    int dac_count = 0;

    [[nodiscard]] double flux_W_per_mm2() const { return flux.si() * 1e-6; }
};

/// Heat load of one module: gradient wires, the DAC stack (dacs_per_layer
/// converters on each DAC layer of every submodule) and control/RF.
PowerBreakdown module_power(const LatticeSpecs& specs, const WireSpec& wire = {}, Power dac_each = Power(0.3),
                            Power control_rf = Power(300.0), int dacs_per_layer = 4);

/// Heat path from a wire to the microchannel cooler: half the copper height,
/// the titanium adhesion film and a spreading cone through the silicon stack.
struct ConductionSpec {
    Length silicon_thickness = millimetres(10.0);
    ThermalConductivity k_silicon = ThermalConductivity(1000.0);
    double spread_angle_deg = 36.5;
    Length titanium_thickness = Length(50e-9);
    ThermalConductivity k_titanium = ThermalConductivity(31.0);
    ThermalConductivity k_copper = ThermalConductivity(482.0);
};

struct CoolerSpec {
    HeatTransferCoefficient h = HeatTransferCoefficient(0.1e6);  // 0.1 W/(mm^2 K)
    Temperature coolant = Temperature(70.0);
    Temperature safety_bound = Temperature(100.0);
    ConductionSpec conduction;

    void validate() const;
};

/// Thermal resistance of a rectangular w x l source spreading at a fixed
/// half-angle through a slab of thickness t.
ThermalResistance spreading_resistance(Length w, Length l, Length t, ThermalConductivity k, double angle_deg);

/// Temperature rise between one wire and the cooler face.
Temperature conduction_delta(const WireSpec& wire, const ConductionSpec& c);

struct ThermalResult {
    Temperature convective_delta;
    Temperature conduction_delta;
    Temperature delta_T;
    Temperature surface;
    Temperature wire;
    /// Same heat path for a wire narrowed to 30 x 60 um over its full length.
    Temperature narrow_section_delta;
    std::vector<std::string> warnings;
};

ThermalResult surface_temperature(const PowerBreakdown& power, const CoolerSpec& cooler = {},
                                  const WireSpec& wire = {});

}  // namespace mtqc
