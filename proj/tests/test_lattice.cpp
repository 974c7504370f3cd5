#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mtqc/error.hpp"
#include "mtqc/lattice.hpp"

using namespace mtqc;

TEST_CASE("module and submodule arithmetic") {
    LatticeSpecs s;
    CHECK(s.junctions_per_module_side() == 36);
    CHECK(s.junctions_per_module() == 1296);
    CHECK(dac_layers(s.submodule) == 9);
}

TEST_CASE("chambers and floor for a billion ions") {
    const auto plan = chambers_required(1e9, 2);
    CHECK(plan.chambers == 225);
    CHECK(plan.floor_side.si() == doctest::Approx(67.5));

    const auto layout = build_layout(500'000'000);
    const auto sum = layout.summary();
    CHECK(sum.chambers == 225);
    CHECK(sum.floor_side_m == doctest::Approx(67.5));
    CHECK(sum.ion_sites == 1'000'000'000);
}

TEST_CASE("address and index are inverse") {
    const auto layout = build_layout(3 * 1296 * 1715 + 777);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> pick(0, layout.total_junctions() - 1);
    for (int k = 0; k < 2000; ++k) {
        const auto i = pick(rng);
        CHECK(layout.index(layout.address(i)) == i);
    }
    CHECK(layout.index(layout.address(layout.total_junctions() - 1)) == layout.total_junctions() - 1);
    CHECK_THROWS_AS((void)layout.address(layout.total_junctions()), std::out_of_range);
}

TEST_CASE("partial module populates whole submodules first") {
    const auto layout = build_layout(1296 + 40);
    CHECK(layout.modules() == 2);
    CHECK(layout.junctions_in_module(1) == 40);
    // 40 junctions = one full 6x6 submodule plus 4 of the next.
    CHECK(layout.submodules() == 36 + 2);
    int count = 0;
    for (int r = 0; r < 36; ++r) {
        for (int c = 0; c < 36; ++c) count += layout.populated(1, r, c) ? 1 : 0;
    }
    CHECK(count == 40);
}

TEST_CASE("one loading junction per populated submodule, on the module rim when possible") {
    const auto layout = build_layout(1296);
    const auto loads = layout.loading_junctions(0);
    CHECK(loads.size() == 36);
    std::set<std::pair<int, int>> subs;
    for (const auto& a : loads) {
        CHECK(layout.has_loading_zone(a));
        subs.insert({a.row / 6, a.col / 6});
    }
    CHECK(subs.size() == 36);
    CHECK(layout.loading_zone_count() == layout.submodules());
}

TEST_CASE("invalid specs name the field") {
    LatticeSpecs s;
    s.module.wafer_side = millimetres(91.0);
    try {
        s.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "module.wafer_side");
    }
    LatticeSpecs c;
    c.submodule.capacitance_pF = 95.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    LatticeSpecs j;
    j.junction.readout_arm = Arm::West;
    CHECK_THROWS_AS(j.validate(), ConfigError);
    CHECK_THROWS_AS(build_layout(0), ConfigError);
}

TEST_CASE("chamber count grows monotonically with ions") {
    std::int64_t prev = 0;
    for (double ions = 1e6; ions < 5e10; ions *= 1.7) {
        const auto p = chambers_required(ions, 2);
        CHECK(p.chambers >= prev);
        prev = p.chambers;
        CHECK(static_cast<double>(p.chambers) * 1715.0 * 1296.0 * 2.0 >= ions);
    }
}
