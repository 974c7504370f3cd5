#include <doctest.h>

#include <algorithm>
#include <memory>

#include "mtqc/error.hpp"
#include "mtqc/errors.hpp"

using namespace mtqc;

namespace {

std::shared_ptr<const CodePatch> rotated(int d) {
    static const Layout layout = build_layout(1296);
    return std::make_shared<const CodePatch>(CodePatch::rotated(layout, d));
}

bool contains(const Stabilizer& s, int q) { return std::find(s.data.begin(), s.data.end(), q) != s.data.end(); }

}  // namespace

TEST_CASE("noiseless rounds are quiet") {
    const auto prog = compile_cycle(rotated(5), {}, TimingParams{});
    const auto run = run_rounds(prog, NoiseParams::uniform(0.0), 6, Basis::Z);
    CHECK(run.history.round_count() == 6);
    CHECK(run.history.event_count() == 0);
    CHECK_FALSE(run.observable_flip);
}

TEST_CASE("a data X error lights the neighbouring Z checks once") {
    const auto patch = rotated(3);
    const auto prog = compile_cycle(patch, {}, TimingParams{});
    for (int q = 0; q < patch->data_count(); ++q) {
        Injection inj;
        inj.faults.push_back({1, -1, q, Pauli::X});
        const auto run = run_rounds(prog, NoiseParams::uniform(0.0), 3, Basis::Z, 0, inj);
        const auto& ev = run.history.detection_events;
        for (int s = 0; s < patch->stabilizer_count(); ++s) {
            const auto& st = patch->stabilizer(s);
            const bool expect = st.type == CheckType::Z && contains(st, q);
            CHECK(ev[1][static_cast<std::size_t>(s)] == (expect ? 1 : 0));
            CHECK(ev[0][static_cast<std::size_t>(s)] == 0);
            CHECK(ev[2][static_cast<std::size_t>(s)] == 0);
        }
        const auto& lz = patch->logical_z();
        CHECK(run.observable_flip == (std::find(lz.begin(), lz.end(), q) != lz.end()));
    }
}

TEST_CASE("measurement flip produces a time-like event pair") {
    const auto patch = rotated(3);
    const auto prog = compile_cycle(patch, {}, TimingParams{});
    Injection inj;
    inj.flips.push_back({1, 2});
    const auto run = run_rounds(prog, NoiseParams::uniform(0.0), 4, Basis::Z, 0, inj);
    const auto& ev = run.history.detection_events;
    CHECK(ev[1][2] == 1);
    CHECK(ev[2][2] == 1);
    CHECK(run.history.event_count() == 2);
    CHECK_FALSE(run.observable_flip);
}

TEST_CASE("stabilizers are invisible and logicals are not") {
    const auto patch = rotated(5);
    for (int s = 0; s < patch->stabilizer_count(); ++s) {
        const auto f = stabilizer_frame(*patch, s);
        const auto syn = extract_syndrome(f, *patch);
        CHECK(std::all_of(syn.begin(), syn.end(), [](std::int8_t v) { return v == 0; }));
        CHECK_FALSE(logical_flip(f, *patch, Basis::Z));
        CHECK_FALSE(logical_flip(f, *patch, Basis::X));
    }
    PauliFrame xl(patch->data_count());
    for (int q : patch->logical_x()) xl.apply(q, Pauli::X);
    const auto syn = extract_syndrome(xl, *patch);
    CHECK(std::all_of(syn.begin(), syn.end(), [](std::int8_t v) { return v == 0; }));
    CHECK(logical_flip(xl, *patch, Basis::Z));
}

TEST_CASE("property: syndrome is linear in the frame") {
    const auto patch = rotated(5);
    TrialRng rng(99, 0);
    for (int k = 0; k < 200; ++k) {
        PauliFrame a(patch->data_count()), b(patch->data_count());
        for (int q = 0; q < patch->data_count(); ++q) {
            a.apply(q, static_cast<Pauli>(rng.below(4)));
            b.apply(q, static_cast<Pauli>(rng.below(4)));
        }
        PauliFrame ab = a;
        ab ^= b;
        const auto sa = extract_syndrome(a, *patch), sb = extract_syndrome(b, *patch), sab = extract_syndrome(ab, *patch);
        for (std::size_t s = 0; s < sa.size(); ++s) CHECK(sab[s] == (sa[s] ^ sb[s]));
    }
}

TEST_CASE("trial streams are reproducible and independent") {
    const auto prog = compile_cycle(rotated(3), {}, TimingParams{});
    const auto noise = NoiseParams::uniform(0.02, 5);
    const auto a = run_rounds(prog, noise, 3, Basis::Z, 17);
    const auto b = run_rounds(prog, noise, 3, Basis::Z, 17);
    CHECK(a.history.detection_events == b.history.detection_events);
    CHECK(a.final_frame == b.final_frame);
    int differ = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        differ += run_rounds(prog, noise, 3, Basis::Z, t).history.detection_events != a.history.detection_events;
    }
    CHECK(differ > 10);

    TrialRng r(1, 2);
    for (int k = 0; k < 1000; ++k) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(7) < 7);
    }
}

TEST_CASE("parked checks report absent outcomes") {
    const auto patch = rotated(3);
    const auto prog = compile_cycle(patch, {{{1}, 0, 10}}, TimingParams{});
    const auto run = run_rounds(prog, NoiseParams::uniform(0.0), 2, Basis::Z);
    CHECK(run.history.rounds[0][1] == kAbsent);
    CHECK(run.history.rounds[0][0] == 0);
}

TEST_CASE("noise parameters are validated") {
    CHECK_THROWS_AS(NoiseParams::uniform(1.5).validate(), ConfigError);
    NoiseParams n;
    n.p_meas = -0.1;
    CHECK_THROWS_AS(n.validate(), ConfigError);
}

TEST_CASE("property: event rate grows with p") {
    const auto prog = compile_cycle(rotated(3), {}, TimingParams{});
    double prev = -1.0;
    for (double p : {0.0, 0.002, 0.01, 0.05}) {
        std::size_t events = 0;
        NoiseParams n = NoiseParams::uniform(p, 1);
        n.p_loss = 0.0;
        for (std::uint64_t t = 0; t < 300; ++t) events += run_rounds(prog, n, 3, Basis::Z, t).history.event_count();
        const double rate = static_cast<double>(events) / 300.0;
        CHECK(rate > prev);
        prev = rate;
    }
}
