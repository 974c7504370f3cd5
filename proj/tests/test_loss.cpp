#include <doctest.h>

#include <memory>

#include "mtqc/error.hpp"
#include "mtqc/errors.hpp"
#include "mtqc/loss.hpp"

using namespace mtqc;

namespace {

const Layout& module_layout() {
    static const Layout layout = build_layout(1296);
    return layout;
}

std::shared_ptr<const CodePatch> block6() {
    return std::make_shared<const CodePatch>(CodePatch::region(module_layout(), {6, 6}));
}

}  // namespace

TEST_CASE("well position reads out occupancy") {
    const auto patch = block6();
    OccupancyState s(*patch);
    CHECK(s.full());
    CHECK(s.well(0) == WellPosition::OffCenter);
    s.at(0).data_ion = false;
    CHECK(s.well(0) == WellPosition::Centered);
    s.at(0).measure_ion = false;
    CHECK(s.well(0) == WellPosition::Unknown);
}

TEST_CASE("missing readout marks the measure site") {
    const auto patch = block6();
    OccupancyState s(*patch);
    std::vector<std::int8_t> readout(36, 0);
    readout[7] = kAbsent;
    const auto hit = detect_measure_loss(s, readout);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0] == 7);
    CHECK(s.at(7).measure == SiteStatus::Missing);
    CHECK(detect_measure_loss(s, readout).empty());

    std::vector<std::uint8_t> parked(36, 0);
    parked[9] = 1;
    readout[9] = kAbsent;
    CHECK(detect_measure_loss(s, readout, parked).empty());
}

TEST_CASE("probe relabels the measure ion when the data ion is gone") {
    const auto patch = block6();
    OccupancyState s(*patch);
    CHECK(probe_data_loss(s, 4) == ProbeResult::DataPresent);
    CHECK(s.at(4).measure == SiteStatus::Present);
    s.at(4).data_ion = false;
    CHECK(probe_data_loss(s, 4) == ProbeResult::DataMissing);
    CHECK(s.at(4).data_ion);
    CHECK_FALSE(s.at(4).measure_ion);
    CHECK(s.at(4).measure == SiteStatus::Missing);
    CHECK_THROWS_AS(probe_data_loss(s, 4), ProtocolError);
}

TEST_CASE("replenish plans come from the nearest loading zone") {
    const auto patch = block6();
    const auto& layout = module_layout();
    const auto at_loader = replenish(layout, *patch, patch->stabilizer_at({0, 0}));
    CHECK(at_loader.length() == 1);
    CHECK(at_loader.cycles_to_complete == 1);

    const int far = patch->stabilizer_at({5, 5});
    const auto plan = replenish(layout, *patch, far, 4);
    CHECK(plan.path.front() == JunctionCoord{0, 0});
    CHECK(plan.path.back() == JunctionCoord{5, 5});
    CHECK(plan.length() == 11);
    CHECK(plan.cycles_to_complete == 3);
    // Consecutive path junctions are lattice neighbours.
    for (std::size_t i = 1; i < plan.path.size(); ++i) {
        CHECK(std::abs(plan.path[i].row - plan.path[i - 1].row) + std::abs(plan.path[i].col - plan.path[i - 1].col) == 1);
    }
    OccupancyState s(*patch);
    s.at(far).measure_ion = false;
    const auto prog = shuttle_program(patch, s, std::span(&plan, 1), TimingParams{});
    CHECK(validate_schedule(prog).empty());
}

TEST_CASE("property: every plan is valid and no longer than the Manhattan bound") {
    const auto patch = block6();
    for (int j = 0; j < patch->stabilizer_count(); ++j) {
        const auto plan = replenish(module_layout(), *patch, j);
        const auto hole = patch->stabilizer(j).junction;
        CHECK(plan.length() == hole.row + hole.col + 1);
        OccupancyState s(*patch);
        s.at(j).measure_ion = false;
        CHECK(validate_schedule(shuttle_program(patch, s, std::span(&plan, 1), TimingParams{})).empty());
    }
}

TEST_CASE("each loss kind recovers without conflicts") {
    const auto patch = block6();
    for (const LossKind kind : {LossKind::Measure, LossKind::Data, LossKind::Both}) {
        CAPTURE(to_string(kind));
        LossSimulator sim(module_layout(), patch);
        sim.inject({2, 20, kind});
        const auto r = sim.run();
        CHECK(r.recovered);
        CHECK(r.schedule_conflicts == 0);
        CHECK(sim.state().full());
        if (kind == LossKind::Data) CHECK(r.max_data_resumption == 1);
        bool replenished = false;
        for (const auto& e : r.log) replenished |= e.event == "replenished";
        CHECK(replenished);
    }
}

TEST_CASE("simultaneous losses are served one plan at a time") {
    const auto patch = block6();
    LossSimulator sim(module_layout(), patch);
    sim.inject({1, 3, LossKind::Measure});
    sim.inject({1, 30, LossKind::Data});
    sim.inject({1, 17, LossKind::Both});
    const auto r = sim.run();
    CHECK(r.recovered);
    CHECK(r.schedule_conflicts == 0);
    int active = 0, max_active = 0;
    for (const auto& e : r.log) {
        if (e.event == "replenish_start") max_active = std::max(max_active, ++active);
        if (e.event == "replenished") --active;
    }
    CHECK(max_active == 1);
}

TEST_CASE("random campaign is reproducible") {
    const auto a = random_loss_campaign(module_layout(), {6, 6}, 20, 4);
    const auto b = random_loss_campaign(module_layout(), {6, 6}, 20, 4);
    REQUIRE(a.cases.size() == 20);
    CHECK(a.recovered == 20);
    for (std::size_t k = 0; k < a.cases.size(); ++k) {
        CHECK(a.cases[k].injection.junction == b.cases[k].injection.junction);
        CHECK(a.cases[k].summary.log.size() == b.cases[k].summary.log.size());
    }
}

TEST_CASE("rotated patches are rejected by the occupancy model") {
    const auto rot = CodePatch::rotated(module_layout(), 3);
    CHECK_THROWS_AS(OccupancyState{rot}, ConfigError);
}
