#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtqc/cycle.hpp"

namespace mtqc {

enum class SiteStatus : std::uint8_t { Present, Missing, Probing, Replenishing };
enum class WellPosition : std::uint8_t { Centered, OffCenter, Unknown };
enum class ProbeResult : std::uint8_t { DataPresent, DataMissing };

const char* to_string(SiteStatus s);
const char* to_string(ProbeResult r);

/// Controller view (status) and ground truth (ion flags) of one junction.
/// A lost ion keeps status Present until the protocol notices it.
struct JunctionOccupancy {
    SiteStatus data = SiteStatus::Present;
    SiteStatus measure = SiteStatus::Present;
    bool data_ion = true;
    bool measure_ion = true;
};

/// Ion occupancy of a block of junctions. Each junction holds a data site and
/// a measure site; which of them is physically filled is the ground truth the
/// probe reads out through the well position.
class OccupancyState {
public:
    explicit OccupancyState(const CodePatch& patch);

    [[nodiscard]] int junctions() const { return static_cast<int>(sites_.size()); }
    [[nodiscard]] const JunctionOccupancy& at(int j) const { return sites_.at(static_cast<std::size_t>(j)); }
    JunctionOccupancy& at(int j) { return sites_.at(static_cast<std::size_t>(j)); }

    /// Where the measure ion settles when pushed into the gate zone: two ions
    /// share the double well off-center, a lone ion sits in the middle.
    [[nodiscard]] WellPosition well(int j) const;

    /// Every ion physically present and every site known Present.
    [[nodiscard]] bool full() const;
    /// Measure sites whose ion is not available for the next round.
    [[nodiscard]] std::vector<int> unavailable_measures() const;

private:
    std::vector<JunctionOccupancy> sites_;
};

/// Measure sites that delivered no readout in the completed round, excluding
/// sites that were parked on purpose. Newly flagged sites become Missing.
std::vector<int> detect_measure_loss(OccupancyState& state, std::span<const std::int8_t> round_readout,
                                     std::span<const std::uint8_t> parked = {});

/// Probes junction j with its measure ion. On DataMissing the measure ion
/// takes over the data role and its own site becomes Missing. Throws
/// ProtocolError when the measure ion itself is absent.
ProbeResult probe_data_loss(OccupancyState& state, int j);

struct ShuttleMove {
    int ion = -1;
    ZoneRef from;
    ZoneRef to;
};

/// Chain that pushes a fresh ion out of a loading zone and shifts every
/// measure ion between it and the hole by one junction.
struct ReplenishPlan {
    int target = -1;                    // junction index in the patch
    JunctionCoord loading_junction;
    std::vector<JunctionCoord> path;    // loading junction ... target
    std::vector<ShuttleMove> moves;     // hole end first, fresh ion last
    int cycles_to_complete = 0;

    [[nodiscard]] int length() const { return static_cast<int>(moves.size()); }
};

/// Shortest plan from the nearest loading zone of the patch (ties broken by
/// (row, col)). `fresh_ion` is the id given to the newly loaded ion.
ReplenishPlan replenish(const Layout& layout, const CodePatch& patch, int target, int moves_per_cycle = 4,
                        int fresh_ion = -1);

/// Shuttle-only program executing the plans one after another, `moves_per_cycle`
/// moves per round. Ion ids are measure-site indices; the fresh ion of plan
/// k gets id stabilizer_count() + k. Absent ions start off-lattice.
CycleProgram shuttle_program(std::shared_ptr<const CodePatch> patch, const OccupancyState& state,
                             std::span<const ReplenishPlan> plans, const TimingParams& timing);

enum class LossKind : std::uint8_t { Measure, Data, Both };

const char* to_string(LossKind k);

struct LossInjection {
    int cycle = 0;
    int junction = 0;
    LossKind kind = LossKind::Measure;
};

struct LossLogEntry {
    int cycle = 0;
    int site = 0;
    std::string event;
    int latency = 0;  // cycles since the loss that caused it
};

struct LossRunSummary {
    bool recovered = false;
    int cycles = 0;
    int schedule_conflicts = 0;
    int max_data_resumption = 0;  // cycles until a lost data site holds an ion again
    std::vector<LossLogEntry> log;
};

/// Deterministic cycle-by-cycle execution of the loss-handling protocol on a
/// patch: readout-based measure loss detection, per-round data probing,
/// role transfer and serialized replenishment. Every compiled round and
/// shuttle program is checked with validate_schedule.
class LossSimulator {
public:
    LossSimulator(const Layout& layout, std::shared_ptr<const CodePatch> patch, TimingParams timing = {},
                  int moves_per_cycle = 4);

    void inject(const LossInjection& loss);
    /// Runs until all sites are Present and no loss is pending, or `max_cycles`.
    LossRunSummary run(int max_cycles = 200);

    [[nodiscard]] const OccupancyState& state() const { return state_; }

private:
    struct ActivePlan {
        ReplenishPlan plan;
        int done = 0;
        int loss_cycle = 0;
    };

    void log(int cycle, int site, std::string event, int latency);

    Layout layout_;
    std::shared_ptr<const CodePatch> patch_;
    TimingParams timing_;
    int moves_per_cycle_;
    OccupancyState state_;
    std::vector<LossInjection> pending_;
    std::deque<int> waiting_;          // measure sites awaiting a plan
    std::optional<ActivePlan> active_;
    std::vector<int> lost_at_;         // per junction: cycle of the loss being handled
    std::vector<int> data_lost_at_;
    std::vector<std::uint8_t> probe_blocked_;
    LossRunSummary summary_;
    int fresh_ids_ = 0;
};

struct LossCase {
    LossInjection injection;
    LossRunSummary summary;
};

struct LossCampaign {
    std::vector<LossCase> cases;
    int recovered = 0;
    int schedule_conflicts = 0;
    int max_data_resumption = 0;   // over data-only losses
    int max_both_resumption = 0;   // data site of a both-lost junction
};

/// `cases` independent single-ion losses on a `block` region at the module
/// origin: junction and kind drawn from stream (seed, case), loss at cycle 1.
LossCampaign random_loss_campaign(const Layout& layout, GridSize block, int cases, std::uint64_t seed,
                                  const TimingParams& timing = {}, int moves_per_cycle = 4, int max_cycles = 200);

}  // namespace mtqc
