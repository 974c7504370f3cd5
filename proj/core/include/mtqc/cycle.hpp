#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "mtqc/code_patch.hpp"
#include "mtqc/units.hpp"

namespace mtqc {

/// Durations of the primitive operations. Only the single-qubit, measurement
/// and aggregate round times are fixed by hardware targets; the two-qubit and
/// shuttle times default to values that fit the round into 125 us.
struct TimingParams {
    Duration t_1q = microseconds(2.5);
    Duration t_meas = microseconds(25.0);
    Duration t_cycle = microseconds(125.0);
    Duration t_2q = microseconds(10.0);
    Duration t_shuttle = microseconds(10.0);

    /// 2 Hadamards, 4 CNOTs, one readout and five shuttles (four out, one home).
    [[nodiscard]] Duration minimal_cycle() const;
    void validate() const;
};

struct ZoneRef {
    JunctionCoord junction;
    ZoneKind zone = ZoneKind::Readout;
    friend bool operator==(const ZoneRef&, const ZoneRef&) = default;
};

enum class ActionKind : std::uint8_t { Idle, Shuttle, Hadamard, Cnot, Measure };
enum class SlotKind : std::uint8_t { Hadamard, Shuttle, Cnot, Measure };

const char* to_string(ActionKind k);
const char* to_string(SlotKind k);

/// One site-local action. `ion` names a mobile ion (the stabilizer index for
/// compiled rounds); `data` is the data qubit a CNOT acts on, or the data ion
/// being moved if a hand-built program tries to shuttle one.
struct Action {
    ActionKind kind = ActionKind::Idle;
    int ion = -1;
    int data = -1;
    ZoneRef target;
};

struct Timeslot {
    SlotKind kind = SlotKind::Shuttle;
    int cnot_step = -1;  // 0..3 for CNOT slots and the shuttle preceding them
    std::vector<Action> actions;
};

/// CNOT corner order per check type. The defaults trace an N for X checks and
/// a Z for Z checks, so hook errors lie perpendicular to the logical operator
/// they could otherwise shorten and no data qubit is shared within a slot.
struct CnotOrder {
    std::array<Corner, 4> x{Corner::NW, Corner::NE, Corner::SW, Corner::SE};
    std::array<Corner, 4> z{Corner::NW, Corner::SW, Corner::NE, Corner::SE};
};

/// Measure sites switched off for rounds [start_round, end_round).
struct DefectRegion {
    std::vector<int> off_sites;
    int start_round = 0;
    int end_round = 1;

    [[nodiscard]] bool active(int round) const { return round >= start_round && round < end_round; }
    void validate(const CodePatch& patch) const;
};

/// A closed sequence of defect configurations; move k is active in round k.
struct BraidSchedule {
    std::vector<DefectRegion> moves;
};

struct CycleProgram {
    std::shared_ptr<const CodePatch> patch;
    std::vector<ZoneRef> ion_start;
    std::vector<Timeslot> slots;
    std::vector<std::uint8_t> parked;  // per stabilizer
    TimingParams timing;
    Duration round_duration;
    bool stabilizer_round = true;

    [[nodiscard]] bool is_parked(int s) const { return parked[static_cast<std::size_t>(s)] != 0; }
};

CycleProgram compile_cycle(std::shared_ptr<const CodePatch> patch,
                           const std::vector<DefectRegion>& defects, const TimingParams& timing,
                           int round = 0, const CnotOrder& order = {});

struct Violation {
    enum class Kind { ZoneOccupancy, Ordering, NonCommutingOverlap, DataMoved };
    Kind kind;
    int slot = -1;
    std::string detail;
};

const char* to_string(Violation::Kind k);

/// Every zone conflict, ordering violation and same-slot data overlap.
/// An empty result means the program is valid.
std::vector<Violation> validate_schedule(const CycleProgram& program);

/// Sum over timeslots of the longest action in the slot.
Duration cycle_duration(const CycleProgram& program);

/// Braid well-formedness: every configuration is valid, consecutive
/// configurations are lattice-adjacent, and the path returns to its start.
std::vector<std::string> validate_braid(const CodePatch& patch, const BraidSchedule& braid);

/// One compiled round per braid move.
std::vector<CycleProgram> compile_braid(std::shared_ptr<const CodePatch> patch,
                                        const BraidSchedule& braid, const TimingParams& timing);

}  // namespace mtqc
