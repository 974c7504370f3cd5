#include <doctest.h>

#include <cmath>

#include "mtqc/error.hpp"
#include "mtqc/thermal.hpp"

using namespace mtqc;

TEST_CASE("wire Joule heating") {
    // rho L I^2 / (w h), two wires per junction.
    const double per_wire = 2e-9 * 2.5e-3 * 100.0 / (125e-6 * 30e-6);
    CHECK(wire_heat(WireSpec{}).si() == doctest::Approx(per_wire));
    CHECK(wire_power(WireSpec{}).si() == doctest::Approx(2.0 * per_wire));
    CHECK(std::abs(wire_power(WireSpec{}).si() - 0.267) / 0.267 < 0.2);
}

TEST_CASE("module power budget") {
    const auto p = module_power(LatticeSpecs{});
    CHECK(p.dac_count == 36 * 9 * 4);
    CHECK(p.wires.si() == doctest::Approx(1296 * 2 * 2e-9 * 2.5e-3 * 100.0 / (125e-6 * 30e-6)));
    CHECK(p.total.si() == doctest::Approx(p.wires.si() + p.dacs.si() + p.control_rf.si()));
    CHECK(p.total.si() >= 900.0);
    CHECK(p.total.si() <= 1100.0);
    CHECK(std::abs(p.flux_W_per_mm2() - 0.12) <= 0.01);
}

TEST_CASE("surface temperature") {
    const auto p = module_power(LatticeSpecs{});
    const auto t = surface_temperature(p);
    CHECK(t.convective_delta.si() == doctest::Approx(p.flux_W_per_mm2() / 0.1));
    CHECK(t.delta_T.si() <= 2.0);
    CHECK(std::abs(t.surface.si() - 72.0) <= 1.0);
    CHECK(t.warnings.empty());
}

TEST_CASE("square spreading source matches the closed form limit") {
    const Length t = millimetres(1.0);
    const ThermalConductivity k(100.0);
    const auto sq = spreading_resistance(micrometres(100.0), micrometres(100.0), t, k, 30.0);
    const auto near = spreading_resistance(micrometres(100.0), micrometres(100.0001), t, k, 30.0);
    CHECK(near.si() == doctest::Approx(sq.si()).epsilon(1e-4));
}

TEST_CASE("property: heating grows as current squared") {
    WireSpec w;
    const double base = wire_heat(w).si();
    for (double i : {2.0, 5.0, 20.0, 40.0}) {
        w.current = Current(i);
        CHECK(wire_heat(w).si() == doctest::Approx(base * i * i / 100.0));
    }
}

TEST_CASE("over-temperature warning") {
    WireSpec w;
    w.current = Current(200.0);
    const auto t = surface_temperature(module_power(LatticeSpecs{}, w), CoolerSpec{}, w);
    CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("coolant bounds") {
    CoolerSpec c;
    c.coolant = Temperature(60.0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    WireSpec w;
    w.length = Length(0.0);
    CHECK_THROWS_AS(w.validate(), ConfigError);
}
