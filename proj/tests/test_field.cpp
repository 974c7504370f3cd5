#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mtqc/error.hpp"
#include "mtqc/field.hpp"

using namespace mtqc;

namespace {

constexpr double a = 150e-6;
constexpr double b = 100e-6;

MeshOptions coarse() {
    MeshOptions m;
    m.min_panel = 25e-6;
    m.max_panel = 300e-6;
    return m;
}

const BemSolution& short_trap() {
    static const BemSolution s = solve_charges(five_wire(a, b, -600e-6, 600e-6, 500e-6), coarse());
    return s;
}

NilPoint centre_nil(const BemSolution& s, const DriveParams& d = {}) {
    return track_nil(s, d, -1e-6, 1e-6, 3, 0.0, 100e-6)[1];
}

TrapGeometry scaled(TrapGeometry g, double k) {
    for (auto& p : g.patches) {
        p.x0 *= k;
        p.y0 *= k;
        p.z0 *= k;
        p.width *= k;
        p.length *= k;
    }
    g.focus_x *= k;
    g.focus_y *= k;
    return g;
}

}  // namespace

TEST_CASE("field is minus the potential gradient") {
    const auto& s = short_trap();
    const double h = 1e-7;
    for (const Vec3 p : {Vec3{0.0, 0.0, 80e-6}, Vec3{40e-6, 30e-6, 120e-6}, Vec3{-90e-6, -50e-6, 60e-6}}) {
        const auto e = field_at(s, p);
        for (int k = 0; k < 3; ++k) {
            Vec3 up = p, dn = p;
            up[k] += h;
            dn[k] -= h;
            const double fd = -(potential_at(s, up) - potential_at(s, dn)) / (2.0 * h);
            CHECK(e[k] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("electrodes hold their potential and free space is harmonic") {
    const auto s = solve_charges(five_wire(a, b, -600e-6, 600e-6, 500e-6));
    CHECK(s.residual < 1e-9);
    // Between collocation points the boundary value still holds to 1%.
    CHECK(potential_at(s, {b / 2 + a / 2 + 3e-6, 7e-6, 1e-9}) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(potential_at(s, {0.0, 11e-6, 1e-9})) < 0.01);
    const double h = 2e-6;
    for (const Vec3 p : {Vec3{0.0, 0.0, 100e-6}, Vec3{60e-6, 20e-6, 50e-6}}) {
        double lap = -6.0 * potential_at(s, p);
        for (int k = 0; k < 3; ++k) {
            Vec3 up = p, dn = p;
            up[k] += h;
            dn[k] -= h;
            lap += potential_at(s, up) + potential_at(s, dn);
        }
        CHECK(std::abs(lap) < 1e-3 * std::abs(potential_at(s, p)));
    }
}

TEST_CASE("superposition: doubling the drive doubles the charge") {
    auto g = five_wire(a, b, -400e-6, 400e-6, 400e-6);
    const auto one = solve_charges(g, coarse());
    for (auto& p : g.patches) p.potential *= 2.0;
    const auto two = solve_charges(g, coarse());
    REQUIRE(one.charge.size() == two.charge.size());
    for (std::size_t i = 0; i < one.charge.size(); ++i) CHECK(two.charge[i] == doctest::Approx(2.0 * one.charge[i]));
}

TEST_CASE("mirror symmetry of the five-wire trap") {
    const auto& s = short_trap();
    for (double x : {20e-6, 70e-6, 160e-6}) {
        CHECK(potential_at(s, {x, 10e-6, 90e-6}) == doctest::Approx(potential_at(s, {-x, 10e-6, 90e-6})).epsilon(1e-6));
    }
    const auto nil = centre_nil(s);
    CHECK(std::abs(nil.transverse) < 1e-7);
}

TEST_CASE("nil height and depth agree with the infinite-strip trap") {
    const auto s = solve_charges(five_wire(a, b, -1.5e-3, 1.5e-3));
    const DriveParams drive;
    const auto nil = centre_nil(s, drive);
    const auto exact = analytic_oracle(a, b, drive);
    // Independent check of the analytic height: E_z of two strips vanishes at z^2 = x1 x2.
    CHECK(exact.nil_height == doctest::Approx(std::sqrt(b / 2 * (b / 2 + a))).epsilon(1e-6));
    CHECK(std::abs(nil.height - exact.nil_height) / exact.nil_height < 0.05);
    CHECK(std::abs(trap_depth(s, drive, nil) - exact.depth_meV) / exact.depth_meV < 0.1);
}

TEST_CASE("property: lengths scale rigidly") {
    const auto g = five_wire(a, b, -600e-6, 600e-6, 500e-6);
    const double h1 = centre_nil(solve_charges(g, coarse())).height;
    auto m = coarse();
    m.min_panel *= 2.0;
    m.max_panel *= 2.0;
    const auto big = solve_charges(scaled(g, 2.0), m);
    const double h2 = track_nil(big, {}, -1e-6, 1e-6, 3, 0.0, 200e-6)[1].height;
    CHECK(h2 == doctest::Approx(2.0 * h1).epsilon(0.02));
}

TEST_CASE("property: pseudopotential scales with the square of the drive") {
    const auto& s = short_trap();
    DriveParams d;
    const Vec3 p{30e-6, 0.0, 140e-6};
    const double base = pseudopotential(p, s, d);
    for (double v : {10.0, 50.0, 300.0}) {
        d.v_rf = v;
        CHECK(pseudopotential(p, s, d) == doctest::Approx(base * v * v / 1e4));
    }
    const double target = drive_for_depth(100.0, 25.0, DriveParams{});
    CHECK(target == doctest::Approx(200.0));
}

TEST_CASE("property: vanishing rails give a vanishing trap") {
    const DriveParams d;
    double prev = analytic_oracle(a, b, d).depth_meV;
    for (double rail : {50e-6, 10e-6, 1e-6, 1e-8}) {
        const double depth = analytic_oracle(rail, b, d).depth_meV;
        CHECK(depth < prev);
        prev = depth;
    }
    CHECK(prev < 1e-6 * analytic_oracle(a, b, d).depth_meV);
}

TEST_CASE("interrupted rails lose the nil") {
    BarrierOptions opt;
    opt.y_begin = -700e-6;
    opt.y_end = 0.0;
    opt.slices = 41;
    opt.mesh = coarse();
    CHECK_THROWS_AS(barrier(interrupted_rails(a, b, 1.5e-3, 1e-3), DriveParams{}, opt), NilLostError);
}

TEST_CASE("aligned modules make no barrier and misalignment does") {
    BarrierOptions opt;
    opt.slices = 61;
    const auto flat = barrier(module_boundary(a, b, 1.5e-3, 0.0, {0, 0, 0}), DriveParams{}, opt);
    CHECK(flat.barrier_meV < 0.01 * opt.target_depth_meV);
    const auto off = barrier(module_boundary(a, b, 1.5e-3, 0.0, {10e-6, 10e-6, 10e-6}), DriveParams{}, opt);
    CHECK(off.barrier_meV > flat.barrier_meV);
    CHECK(off.barrier_meV > 0.2 / 3.0);
    CHECK(off.barrier_meV < 0.2 * 3.0);
    CHECK(off.depth_meV == doctest::Approx(100.0).epsilon(0.01));

    SUBCASE("quadrupling the panel count changes the barrier by under 10%") {
        BarrierOptions fine = opt;
        fine.mesh.density = 4.0;
        const auto refined = barrier(module_boundary(a, b, 1.5e-3, 0.0, {10e-6, 10e-6, 10e-6}), DriveParams{}, fine);
        CHECK(refined.panels >= 4 * off.panels);
        CHECK(std::abs(refined.barrier_meV - off.barrier_meV) / refined.barrier_meV < 0.1);
    }
}

TEST_CASE("geometry text round trip") {
    auto g = x_junction(a, b, 1.5e-3, 20e-6);
    g.patches.front().mesh_offset = {1e-6, -2e-6, 0.5e-6};
    g.misalignment = {1e-6, 2e-6, 3e-6};
    g.inter_module_gap = 4e-6;
    std::stringstream ss;
    write_geometry(ss, g);
    const auto back = read_geometry(ss);
    REQUIRE(back.patches.size() == g.patches.size());
    for (std::size_t i = 0; i < g.patches.size(); ++i) {
        CHECK(back.patches[i].x0 == doctest::Approx(g.patches[i].x0));
        CHECK(back.patches[i].length == doctest::Approx(g.patches[i].length));
        CHECK(back.patches[i].role == g.patches[i].role);
        CHECK(back.patches[i].mesh_offset[1] == doctest::Approx(g.patches[i].mesh_offset[1]));
    }
    CHECK(back.inter_module_gap == doctest::Approx(4e-6));
    CHECK(back.misalignment[2] == doctest::Approx(3e-6));

    std::istringstream bad("patch rf 0 0 0 -5 10 1\n");
    CHECK_THROWS_AS(read_geometry(bad), ConfigError);
    std::istringstream unknown("wire 0 0\n");
    CHECK_THROWS_AS(read_geometry(unknown), ConfigError);
}

TEST_CASE("healthy systems are well conditioned") {
    const auto& s = short_trap();
    CHECK(s.rcond > 1e-13);
    CHECK(s.charge.size() == s.panels.size());
    DriveParams d;
    d.omega = 0.0;
    CHECK_THROWS_AS(d.validate(), ConfigError);
}
