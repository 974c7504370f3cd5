#include "mtqc/cycle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mtqc/error.hpp"

namespace mtqc {
namespace {

Duration action_duration(const Action& a, const TimingParams& t) {
    switch (a.kind) {
        case ActionKind::Idle: return Duration(0.0);
        case ActionKind::Shuttle: return t.t_shuttle;
        case ActionKind::Hadamard: return t.t_1q;
        case ActionKind::Cnot: return t.t_2q;
        case ActionKind::Measure: return t.t_meas;
    }
    return Duration(0.0);
}

ZoneRef readout_of(const Stabilizer& s) { return {s.junction, ZoneKind::Readout}; }

std::pair<int, int> zone_key(const ZoneRef& z) {
    return {z.junction.row * 4 + static_cast<int>(z.zone), z.junction.col};
}

std::string describe(const ZoneRef& z) {
    std::ostringstream os;
    os << to_string(z.zone) << "(" << z.junction.row << "," << z.junction.col << ")";
    return os.str();
}

}  // namespace

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Idle: return "idle";
        case ActionKind::Shuttle: return "shuttle";
        case ActionKind::Hadamard: return "h";
        case ActionKind::Cnot: return "cnot";
        case ActionKind::Measure: return "measure";
    }
    return "?";
}

const char* to_string(SlotKind k) {
    switch (k) {
        case SlotKind::Hadamard: return "hadamard";
        case SlotKind::Shuttle: return "shuttle";
        case SlotKind::Cnot: return "cnot";
        case SlotKind::Measure: return "measure";
    }
    return "?";
}

const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::ZoneOccupancy: return "zone_occupancy";
        case Violation::Kind::Ordering: return "ordering";
        case Violation::Kind::NonCommutingOverlap: return "non_commuting_overlap";
        case Violation::Kind::DataMoved: return "data_moved";
    }
    return "?";
}

Duration TimingParams::minimal_cycle() const {
    return 2.0 * t_1q + 4.0 * t_2q + t_meas + 5.0 * t_shuttle;
}

void TimingParams::validate() const {
    const std::pair<const char*, Duration> fields[] = {{"timing.t_1q", t_1q},
                                                       {"timing.t_meas", t_meas},
                                                       {"timing.t_cycle", t_cycle},
                                                       {"timing.t_2q", t_2q},
                                                       {"timing.t_shuttle", t_shuttle}};
    for (const auto& [name, d] : fields) {
        if (!(d.si() > 0.0)) throw ConfigError(name, "must be > 0");
    }
    const Duration need = minimal_cycle();
    if (t_cycle.si() < need.si() * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "t_cycle " << t_cycle.si() * 1e6 << " us is shorter than the minimal round of "
           << need.si() * 1e6 << " us";
        throw ScheduleInfeasible(need.si(), os.str());
    }
}

void DefectRegion::validate(const CodePatch& patch) const {
    if (off_sites.empty()) throw ConfigError("defect.off_sites", "must be non-empty");
    if (end_round <= start_round) throw ConfigError("defect.active_interval", "must be well ordered");
    for (int s : off_sites) {
        if (s < 0 || s >= patch.stabilizer_count()) {
            throw ConfigError("defect.off_sites", "references a non-existent measure site");
        }
    }
}

CycleProgram compile_cycle(std::shared_ptr<const CodePatch> patch,
                           const std::vector<DefectRegion>& defects, const TimingParams& timing,
                           int round, const CnotOrder& order) {
    if (!patch) throw ConfigError("patch", "must be provided");
    timing.validate();
    for (const auto& d : defects) d.validate(*patch);

    const int ns = patch->stabilizer_count();
    CycleProgram prog;
    prog.timing = timing;
    prog.parked.assign(static_cast<std::size_t>(ns), 0);
    for (const auto& d : defects) {
        if (!d.active(round)) continue;
        for (int s : d.off_sites) prog.parked[static_cast<std::size_t>(s)] = 1;
    }
    prog.ion_start.reserve(static_cast<std::size_t>(ns));
    for (const auto& s : patch->stabilizers()) prog.ion_start.push_back(readout_of(s));

    std::vector<ZoneRef> where = prog.ion_start;
    auto add_slot = [&](SlotKind kind, int step) -> Timeslot& {
        prog.slots.push_back({kind, step, {}});
        return prog.slots.back();
    };

    auto hadamard_slot = [&] {
        auto& slot = add_slot(SlotKind::Hadamard, -1);
        for (int s = 0; s < ns; ++s) {
            const auto& st = patch->stabilizer(s);
            const bool act = !prog.is_parked(s) && st.type == CheckType::X;
            slot.actions.push_back({act ? ActionKind::Hadamard : ActionKind::Idle, s, -1, where[s]});
        }
    };
    auto shuttle = [&](Timeslot& slot, int s, ZoneRef to) {
        if (where[static_cast<std::size_t>(s)] == to) {
            slot.actions.push_back({ActionKind::Idle, s, -1, to});
        } else {
            slot.actions.push_back({ActionKind::Shuttle, s, -1, to});
            where[static_cast<std::size_t>(s)] = to;
        }
    };

    hadamard_slot();
    for (int step = 0; step < 4; ++step) {
        auto& move = add_slot(SlotKind::Shuttle, step);
        std::vector<int> partner(static_cast<std::size_t>(ns), -1);
        for (int s = 0; s < ns; ++s) {
            const auto& st = patch->stabilizer(s);
            if (prog.is_parked(s)) {
                move.actions.push_back({ActionKind::Idle, s, -1, where[s]});
                continue;
            }
            const Corner c = (st.type == CheckType::X ? order.x : order.z)[static_cast<std::size_t>(step)];
            const int q = st.data[static_cast<std::size_t>(c)];
            partner[static_cast<std::size_t>(s)] = q;
            if (q >= 0) {
                shuttle(move, s, {patch->data_sites()[static_cast<std::size_t>(q)], ZoneKind::Gate});
            } else {
                shuttle(move, s, readout_of(st));
            }
        }
        auto& gate = add_slot(SlotKind::Cnot, step);
        for (int s = 0; s < ns; ++s) {
            const int q = partner[static_cast<std::size_t>(s)];
            gate.actions.push_back({q >= 0 ? ActionKind::Cnot : ActionKind::Idle, s, q, where[s]});
        }
    }
    auto& home = add_slot(SlotKind::Shuttle, -1);
    for (int s = 0; s < ns; ++s) shuttle(home, s, readout_of(patch->stabilizer(s)));
    hadamard_slot();
    auto& meas = add_slot(SlotKind::Measure, -1);
    for (int s = 0; s < ns; ++s) {
        meas.actions.push_back(
            {prog.is_parked(s) ? ActionKind::Idle : ActionKind::Measure, s, -1, where[s]});
    }

    prog.patch = std::move(patch);
    prog.round_duration = cycle_duration(prog);
    return prog;
}

std::vector<Violation> validate_schedule(const CycleProgram& program) {
    std::vector<Violation> out;
    std::vector<ZoneRef> where = program.ion_start;
    const auto n_ions = where.size();

    // Per-ion action trace for ordering checks.
    std::vector<std::vector<const Action*>> trace(n_ions);

    for (std::size_t t = 0; t < program.slots.size(); ++t) {
        const auto& slot = program.slots[t];
        const int ti = static_cast<int>(t);
        std::map<int, int> data_use;
        for (const auto& a : slot.actions) {
            if (a.kind == ActionKind::Shuttle && a.data >= 0) {
                out.push_back({Violation::Kind::DataMoved, ti,
                               "data ion " + std::to_string(a.data) + " shuttled out of its gate zone"});
                continue;
            }
            if (a.ion < 0 || static_cast<std::size_t>(a.ion) >= n_ions) {
                if (a.kind != ActionKind::Idle) {
                    out.push_back({Violation::Kind::Ordering, ti, "action on unknown ion"});
                }
                continue;
            }
            if (a.kind == ActionKind::Shuttle) where[static_cast<std::size_t>(a.ion)] = a.target;
            if (a.kind == ActionKind::Cnot) ++data_use[a.data];
            if (a.kind != ActionKind::Idle && a.kind != ActionKind::Shuttle) {
                trace[static_cast<std::size_t>(a.ion)].push_back(&a);
            }
        }
        for (const auto& [q, n] : data_use) {
            if (n > 1) {
                out.push_back({Violation::Kind::NonCommutingOverlap, ti,
                               "data qubit " + std::to_string(q) + " addressed by " +
                                   std::to_string(n) + " measure qubits"});
            }
        }
        std::map<std::pair<int, int>, std::vector<std::size_t>> occupancy;
        for (std::size_t i = 0; i < n_ions; ++i) occupancy[zone_key(where[i])].push_back(i);
        for (const auto& [key, ions] : occupancy) {
            if (ions.size() > 1) {
                out.push_back({Violation::Kind::ZoneOccupancy, ti,
                               std::to_string(ions.size()) + " mobile ions in " +
                                   describe(where[ions.front()])});
            }
        }
        if (!program.patch) continue;
        for (const auto& a : slot.actions) {
            if (a.kind != ActionKind::Cnot || a.ion < 0 || static_cast<std::size_t>(a.ion) >= n_ions) continue;
            if (a.data < 0 || a.data >= program.patch->data_count()) {
                out.push_back({Violation::Kind::Ordering, ti, "CNOT on unknown data qubit"});
                continue;
            }
            const ZoneRef need{program.patch->data_sites()[static_cast<std::size_t>(a.data)], ZoneKind::Gate};
            if (!(where[static_cast<std::size_t>(a.ion)] == need)) {
                out.push_back({Violation::Kind::Ordering, ti,
                               "ion " + std::to_string(a.ion) + " gates with data " +
                                   std::to_string(a.data) + " from outside its gate zone"});
            }
        }
    }

    if (!program.patch || !program.stabilizer_round) return out;
    const auto& patch = *program.patch;
    for (int s = 0; s < patch.stabilizer_count() && static_cast<std::size_t>(s) < n_ions; ++s) {
        const auto& tr = trace[static_cast<std::size_t>(s)];
        const auto& st = patch.stabilizer(s);
        auto fail = [&](const std::string& why) {
            out.push_back({Violation::Kind::Ordering, -1, "measure " + std::to_string(s) + ": " + why});
        };
        if (program.is_parked(s)) {
            if (!tr.empty()) fail("parked measure qubit is not idle");
            continue;
        }
        std::size_t i = 0;
        const bool x = st.type == CheckType::X;
        if (x) {
            if (i >= tr.size() || tr[i]->kind != ActionKind::Hadamard) { fail("missing leading Hadamard"); continue; }
            ++i;
        }
        std::multiset<int> seen;
        while (i < tr.size() && tr[i]->kind == ActionKind::Cnot) seen.insert(tr[i++]->data);
        std::multiset<int> want;
        for (int q : st.data) if (q >= 0) want.insert(q);
        if (seen != want) fail("CNOT block does not cover each neighbour exactly once");
        if (x) {
            if (i >= tr.size() || tr[i]->kind != ActionKind::Hadamard) { fail("missing trailing Hadamard"); continue; }
            ++i;
        }
        if (i >= tr.size() || tr[i]->kind != ActionKind::Measure) { fail("missing measurement"); continue; }
        if (!(tr[i]->target == readout_of(st))) fail("measured outside its readout zone");
        if (++i != tr.size()) fail("actions after measurement");
    }
    return out;
}

Duration cycle_duration(const CycleProgram& program) {
    Duration total(0.0);
    for (const auto& slot : program.slots) {
        Duration longest(0.0);
        for (const auto& a : slot.actions) longest = std::max(longest, action_duration(a, program.timing));
        total += longest;
    }
    return total;
}

std::vector<std::string> validate_braid(const CodePatch& patch, const BraidSchedule& braid) {
    std::vector<std::string> problems;
    if (braid.moves.empty()) {
        problems.emplace_back("braid has no moves");
        return problems;
    }
    auto near = [&](int a, int b) {
        const auto ja = patch.stabilizer(a).junction;
        const auto jb = patch.stabilizer(b).junction;
        return std::max(std::abs(ja.row - jb.row), std::abs(ja.col - jb.col)) <= 2;
    };
    for (std::size_t k = 0; k < braid.moves.size(); ++k) {
        try {
            braid.moves[k].validate(patch);
        } catch (const ConfigError& e) {
            problems.push_back("move " + std::to_string(k) + ": " + e.what());
            continue;
        }
        if (k == 0) continue;
        const auto& prev = braid.moves[k - 1].off_sites;
        const auto& cur = braid.moves[k].off_sites;
        if (braid.moves[k].start_round < braid.moves[k - 1].start_round) {
            problems.push_back("move " + std::to_string(k) + " starts before its predecessor");
        }
        for (int s : cur) {
            const bool linked = std::any_of(prev.begin(), prev.end(), [&](int p) { return p == s || near(p, s); });
            if (!linked) problems.push_back("move " + std::to_string(k) + " jumps to site " + std::to_string(s));
        }
    }
    std::set<int> first(braid.moves.front().off_sites.begin(), braid.moves.front().off_sites.end());
    std::set<int> last(braid.moves.back().off_sites.begin(), braid.moves.back().off_sites.end());
    if (first != last) problems.emplace_back("braid does not return to its starting configuration");
    return problems;
}

std::vector<CycleProgram> compile_braid(std::shared_ptr<const CodePatch> patch,
                                        const BraidSchedule& braid, const TimingParams& timing) {
    if (!patch) throw ConfigError("patch", "must be provided");
    const auto problems = validate_braid(*patch, braid);
    if (!problems.empty()) throw ConfigError("braid", problems.front());
    int rounds = 0;
    for (const auto& m : braid.moves) rounds = std::max(rounds, m.end_round);
    std::vector<CycleProgram> out;
    out.reserve(static_cast<std::size_t>(rounds));
    for (int r = 0; r < rounds; ++r) out.push_back(compile_cycle(patch, braid.moves, timing, r));
    return out;
}

}  // namespace mtqc
