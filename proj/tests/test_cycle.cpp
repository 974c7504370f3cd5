#include <doctest.h>

#include <memory>
#include <random>

#include "mtqc/cycle.hpp"
#include "mtqc/error.hpp"

using namespace mtqc;

namespace {

/// Aaronson-Gottesman stabilizer tableau; independent of the Pauli-frame code.
class Tableau {
public:
    explicit Tableau(int n) : n_(n), x_(2 * n + 1, std::vector<std::uint8_t>(n)), z_(x_), r_(2 * n + 1) {
        for (int i = 0; i < n; ++i) {
            x_[i][i] = 1;
            z_[n + i][i] = 1;
        }
    }

    void h(int q) {
        for (int i = 0; i < 2 * n_; ++i) {
            r_[i] ^= x_[i][q] & z_[i][q];
            std::swap(x_[i][q], z_[i][q]);
        }
    }
    void cnot(int a, int b) {
        for (int i = 0; i < 2 * n_; ++i) {
            r_[i] ^= x_[i][a] & z_[i][b] & (x_[i][b] ^ z_[i][a] ^ 1);
            x_[i][b] ^= x_[i][a];
            z_[i][a] ^= z_[i][b];
        }
    }
    void x(int q) {
        for (int i = 0; i < 2 * n_; ++i) r_[i] ^= z_[i][q];
    }
    void z(int q) {
        for (int i = 0; i < 2 * n_; ++i) r_[i] ^= x_[i][q];
    }

    /// Z measurement; `deterministic` reports whether the outcome was forced.
    int measure(int q, std::mt19937& rng, bool& deterministic) {
        int p = -1;
        for (int i = n_; i < 2 * n_; ++i) {
            if (x_[i][q]) {
                p = i;
                break;
            }
        }
        if (p >= 0) {
            deterministic = false;
            for (int i = 0; i < 2 * n_; ++i) {
                if (i != p && x_[i][q]) rowsum(i, p);
            }
            x_[p - n_] = x_[p];
            z_[p - n_] = z_[p];
            r_[p - n_] = r_[p];
            std::fill(x_[p].begin(), x_[p].end(), 0);
            std::fill(z_[p].begin(), z_[p].end(), 0);
            z_[p][q] = 1;
            r_[p] = static_cast<std::uint8_t>(rng() & 1U);
            return r_[p];
        }
        deterministic = true;
        const int s = 2 * n_;
        std::fill(x_[s].begin(), x_[s].end(), 0);
        std::fill(z_[s].begin(), z_[s].end(), 0);
        r_[s] = 0;
        for (int i = 0; i < n_; ++i) {
            if (x_[i][q]) rowsum(s, i + n_);
        }
        return r_[s];
    }

private:
    static int g(int x1, int z1, int x2, int z2) {
        if (!x1 && !z1) return 0;
        if (x1 && z1) return z2 - x2;
        if (x1) return z2 * (2 * x2 - 1);
        return x2 * (1 - 2 * z2);
    }
    void rowsum(int h, int i) {
        int sum = 2 * r_[h] + 2 * r_[i];
        for (int j = 0; j < n_; ++j) sum += g(x_[i][j], z_[i][j], x_[h][j], z_[h][j]);
        r_[h] = static_cast<std::uint8_t>(((sum % 4) + 4) % 4 == 2 ? 1 : 0);
        for (int j = 0; j < n_; ++j) {
            x_[h][j] ^= x_[i][j];
            z_[h][j] ^= z_[i][j];
        }
    }

    int n_;
    std::vector<std::vector<std::uint8_t>> x_, z_;
    std::vector<std::uint8_t> r_;
};

struct RoundOutcome {
    std::vector<int> bits;
    std::vector<bool> forced;
};

RoundOutcome execute(const CycleProgram& p, Tableau& t, std::mt19937& rng) {
    const auto& patch = *p.patch;
    RoundOutcome out{std::vector<int>(static_cast<std::size_t>(patch.stabilizer_count()), -1),
                     std::vector<bool>(static_cast<std::size_t>(patch.stabilizer_count()), false)};
    for (const auto& slot : p.slots) {
        for (const auto& a : slot.actions) {
            const int m = patch.measure_qubit(a.ion);
            switch (a.kind) {
                case ActionKind::Hadamard: t.h(m); break;
                case ActionKind::Cnot:
                    if (patch.stabilizer(a.ion).type == CheckType::X) t.cnot(m, a.data);
                    else t.cnot(a.data, m);
                    break;
                case ActionKind::Measure: {
                    bool det = false;
                    const int v = t.measure(m, rng, det);
                    out.bits[static_cast<std::size_t>(a.ion)] = v;
                    out.forced[static_cast<std::size_t>(a.ion)] = det;
                    if (v) t.x(m);  // reset for the next round
                    break;
                }
                default: break;
            }
        }
    }
    return out;
}

std::shared_ptr<const CodePatch> rotated(int d) {
    static const Layout layout = build_layout(1296);
    return std::make_shared<const CodePatch>(CodePatch::rotated(layout, d));
}

}  // namespace

TEST_CASE("compiled round measures a commuting stabilizer group (tableau oracle)") {
    for (int d : {3, 5}) {
        CAPTURE(d);
        const auto patch = rotated(d);
        const auto prog = compile_cycle(patch, {}, TimingParams{});
        std::mt19937 rng(11);
        Tableau t(patch->qubit_count());
        const auto first = execute(prog, t, rng);
        for (int s = 0; s < patch->stabilizer_count(); ++s) {
            if (patch->stabilizer(s).type == CheckType::Z) {
                CHECK(first.forced[static_cast<std::size_t>(s)]);
                CHECK(first.bits[static_cast<std::size_t>(s)] == 0);
            }
        }
        const auto second = execute(prog, t, rng);
        for (int s = 0; s < patch->stabilizer_count(); ++s) {
            CHECK(second.forced[static_cast<std::size_t>(s)]);
            CHECK(second.bits[static_cast<std::size_t>(s)] == first.bits[static_cast<std::size_t>(s)]);
        }
    }
}

TEST_CASE("single data errors flip exactly the anticommuting checks (tableau oracle)") {
    const auto patch = rotated(3);
    const auto prog = compile_cycle(patch, {}, TimingParams{});
    for (int q = 0; q < patch->data_count(); ++q) {
        for (const bool xerr : {true, false}) {
            std::mt19937 rng(3);
            Tableau t(patch->qubit_count());
            const auto ref = execute(prog, t, rng);
            if (xerr) t.x(q);
            else t.z(q);
            const auto after = execute(prog, t, rng);
            for (int s = 0; s < patch->stabilizer_count(); ++s) {
                const auto& st = patch->stabilizer(s);
                const bool touches = std::find(st.data.begin(), st.data.end(), q) != st.data.end();
                const bool sees = xerr ? st.type == CheckType::Z : st.type == CheckType::X;
                const int flip = after.bits[static_cast<std::size_t>(s)] ^ ref.bits[static_cast<std::size_t>(s)];
                CHECK(flip == ((touches && sees) ? 1 : 0));
            }
        }
    }
}

TEST_CASE("round fits the cycle time and passes validation") {
    for (int d : {3, 5, 7, 9}) {
        const auto prog = compile_cycle(rotated(d), {}, TimingParams{});
        CHECK(validate_schedule(prog).empty());
        CHECK(prog.slots.size() == 12);
        CHECK(cycle_duration(prog).si() == doctest::Approx(120e-6));
        CHECK(prog.round_duration.si() <= TimingParams{}.t_cycle.si());
    }
}

TEST_CASE("patch shape") {
    const auto p = rotated(5);
    CHECK(p->data_count() == 25);
    CHECK(p->stabilizer_count() == 24);
    CHECK(p->logical_z().size() == 5);
    CHECK(p->logical_x().size() == 5);
    int x = 0, z = 0;
    for (const auto& s : p->stabilizers()) (s.type == CheckType::X ? x : z)++;
    CHECK(x == 12);
    CHECK(z == 12);
}

TEST_CASE("infeasible timing reports the minimal cycle") {
    TimingParams t;
    t.t_cycle = microseconds(100.0);
    try {
        t.validate();
        FAIL("expected ScheduleInfeasible");
    } catch (const ScheduleInfeasible& e) {
        CHECK(e.minimal_cycle_seconds() == doctest::Approx(120e-6));
    }
}

TEST_CASE("parked measure sites stay idle and the rest stays valid") {
    const auto patch = rotated(5);
    const DefectRegion defect{{3, 4, 10}, 0, 2};
    const auto prog = compile_cycle(patch, {defect}, TimingParams{}, 1);
    CHECK(validate_schedule(prog).empty());
    for (int s : defect.off_sites) CHECK(prog.is_parked(s));
    for (const auto& slot : prog.slots) {
        for (const auto& a : slot.actions) {
            if (prog.is_parked(a.ion)) CHECK(a.kind == ActionKind::Idle);
        }
    }
    const auto later = compile_cycle(patch, {defect}, TimingParams{}, 2);
    CHECK_FALSE(later.is_parked(3));
}

TEST_CASE("validator catches hand-made conflicts") {
    auto prog = compile_cycle(rotated(3), {}, TimingParams{});
    SUBCASE("data ion moved") {
        prog.slots[1].actions.push_back({ActionKind::Shuttle, -1, 0, {{0, 0}, ZoneKind::Readout}});
        CHECK_FALSE(validate_schedule(prog).empty());
    }
    SUBCASE("two measure ions in one zone") {
        prog.slots[1].actions[0] = {ActionKind::Shuttle, 0, -1, prog.ion_start[1]};
        bool occupancy = false;
        for (const auto& v : validate_schedule(prog)) occupancy |= v.kind == Violation::Kind::ZoneOccupancy;
        CHECK(occupancy);
    }
    SUBCASE("gate reordered behind measurement") {
        std::swap(prog.slots[2], prog.slots.back());
        CHECK_FALSE(validate_schedule(prog).empty());
    }
}

TEST_CASE("braid validation") {
    const auto patch = rotated(7);
    BraidSchedule good{{{{10}, 0, 1}, {{11}, 1, 2}, {{10}, 2, 3}}};
    CHECK(validate_braid(*patch, good).empty());
    const auto rounds = compile_braid(patch, good, TimingParams{});
    CHECK(rounds.size() == 3);
    for (const auto& r : rounds) CHECK(validate_schedule(r).empty());

    BraidSchedule open{{{{10}, 0, 1}, {{11}, 1, 2}}};
    CHECK_FALSE(validate_braid(*patch, open).empty());
    CHECK_THROWS_AS(compile_braid(patch, open, TimingParams{}), ConfigError);
}

TEST_CASE("property: no data qubit is shared within a CNOT slot for any distance") {
    for (int d = 3; d <= 11; d += 2) {
        const auto prog = compile_cycle(rotated(d), {}, TimingParams{});
        for (const auto& slot : prog.slots) {
            if (slot.kind != SlotKind::Cnot) continue;
            std::vector<int> uses(static_cast<std::size_t>(prog.patch->data_count()), 0);
            for (const auto& a : slot.actions) {
                if (a.kind == ActionKind::Cnot) CHECK(++uses[static_cast<std::size_t>(a.data)] == 1);
            }
        }
    }
}
