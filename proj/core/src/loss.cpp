#include "mtqc/loss.hpp"

#include <algorithm>
#include <cstdlib>

#include "mtqc/error.hpp"
#include "mtqc/errors.hpp"

namespace mtqc {
namespace {

void require_region(const CodePatch& patch) {
    const auto area = patch.block().area();
    if (patch.data_count() != area || patch.stabilizer_count() != area) {
        throw ConfigError("patch", "loss handling needs one data and one measure site per junction");
    }
}

ZoneRef off_lattice(int ion) { return {{-1000 - ion, -1000}, ZoneKind::Readout}; }

}  // namespace

const char* to_string(SiteStatus s) {
    switch (s) {
        case SiteStatus::Present: return "present";
        case SiteStatus::Missing: return "missing";
        case SiteStatus::Probing: return "probing";
        case SiteStatus::Replenishing: return "replenishing";
    }
    return "?";
}

const char* to_string(ProbeResult r) { return r == ProbeResult::DataPresent ? "data_present" : "data_missing"; }

const char* to_string(LossKind k) {
    switch (k) {
        case LossKind::Measure: return "measure";
        case LossKind::Data: return "data";
        case LossKind::Both: return "both";
    }
    return "?";
}

OccupancyState::OccupancyState(const CodePatch& patch) {
    require_region(patch);
    sites_.assign(static_cast<std::size_t>(patch.data_count()), {});
}

WellPosition OccupancyState::well(int j) const {
    const auto& s = at(j);
    if (!s.measure_ion) return WellPosition::Unknown;
    return s.data_ion ? WellPosition::OffCenter : WellPosition::Centered;
}

bool OccupancyState::full() const {
    return std::all_of(sites_.begin(), sites_.end(), [](const JunctionOccupancy& s) {
        return s.data_ion && s.measure_ion && s.data == SiteStatus::Present && s.measure == SiteStatus::Present;
    });
}

std::vector<int> OccupancyState::unavailable_measures() const {
    std::vector<int> out;
    for (int j = 0; j < junctions(); ++j) {
        if (at(j).measure != SiteStatus::Present) out.push_back(j);
    }
    return out;
}

std::vector<int> detect_measure_loss(OccupancyState& state, std::span<const std::int8_t> round_readout,
                                     std::span<const std::uint8_t> parked) {
    std::vector<int> flagged;
    for (int j = 0; j < static_cast<int>(round_readout.size()) && j < state.junctions(); ++j) {
        if (!parked.empty() && parked[static_cast<std::size_t>(j)]) continue;
        if (round_readout[static_cast<std::size_t>(j)] != kAbsent) continue;
        auto& site = state.at(j);
        if (site.measure != SiteStatus::Present) continue;
        site.measure = SiteStatus::Missing;
        flagged.push_back(j);
    }
    return flagged;
}

ProbeResult probe_data_loss(OccupancyState& state, int j) {
    auto& site = state.at(j);
    if (site.measure != SiteStatus::Present || !site.measure_ion) {
        throw ProtocolError("junction " + std::to_string(j) + ": measure ion absent, replenish it before probing");
    }
    site.measure = SiteStatus::Probing;
    const WellPosition w = state.well(j);
    if (w == WellPosition::OffCenter) {
        site.measure = SiteStatus::Present;
        return ProbeResult::DataPresent;
    }
    // The lone ion stays in the gate zone and becomes the data qubit.
    site.data_ion = true;
    site.data = SiteStatus::Present;
    site.measure_ion = false;
    site.measure = SiteStatus::Missing;
    return ProbeResult::DataMissing;
}

ReplenishPlan replenish(const Layout& layout, const CodePatch& patch, int target, int moves_per_cycle,
                        int fresh_ion) {
    require_region(patch);
    if (moves_per_cycle < 1) throw ConfigError("loss.moves_per_cycle", "must be >= 1");
    if (target < 0 || target >= patch.stabilizer_count()) throw ConfigError("loss.site", "outside the patch");
    const JunctionCoord hole = patch.stabilizer(target).junction;

    std::optional<JunctionCoord> best;
    int best_dist = 0;
    for (const auto& a : layout.loading_junctions(0)) {
        const JunctionCoord j{a.row, a.col};
        if (patch.stabilizer_at(j) < 0) continue;
        const int dist = std::abs(j.row - hole.row) + std::abs(j.col - hole.col);
        if (!best || dist < best_dist ||
            (dist == best_dist && std::pair{j.row, j.col} < std::pair{best->row, best->col})) {
            best = j;
            best_dist = dist;
        }
    }
    if (!best) throw ConfigError("layout.loading_zones", "no loading zone inside the patch");

    ReplenishPlan plan;
    plan.target = target;
    plan.loading_junction = *best;
    JunctionCoord cur = *best;
    plan.path.push_back(cur);
    while (cur.row != hole.row) {
        cur.row += hole.row > cur.row ? 1 : -1;
        plan.path.push_back(cur);
    }
    while (cur.col != hole.col) {
        cur.col += hole.col > cur.col ? 1 : -1;
        plan.path.push_back(cur);
    }
    for (std::size_t i = plan.path.size() - 1; i-- > 0;) {
        const int ion = patch.stabilizer_at(plan.path[i]);
        plan.moves.push_back({ion, {plan.path[i], ZoneKind::Readout}, {plan.path[i + 1], ZoneKind::Readout}});
    }
    plan.moves.push_back({fresh_ion, {*best, ZoneKind::Loading}, {*best, ZoneKind::Readout}});
    plan.cycles_to_complete = (plan.length() + moves_per_cycle - 1) / moves_per_cycle;
    return plan;
}

CycleProgram shuttle_program(std::shared_ptr<const CodePatch> patch, const OccupancyState& state,
                             std::span<const ReplenishPlan> plans, const TimingParams& timing) {
    CycleProgram prog;
    const int ns = patch->stabilizer_count();
    prog.timing = timing;
    prog.stabilizer_round = false;
    prog.parked.assign(static_cast<std::size_t>(ns), 0);
    std::vector<int> occupant(static_cast<std::size_t>(ns), -1);  // junction -> ion in its readout zone
    for (int s = 0; s < ns; ++s) {
        const bool here = state.at(s).measure_ion;
        prog.ion_start.push_back(here ? ZoneRef{patch->stabilizer(s).junction, ZoneKind::Readout} : off_lattice(s));
        if (here) occupant[static_cast<std::size_t>(s)] = s;
    }
    for (std::size_t k = 0; k < plans.size(); ++k) {
        const int fresh = ns + static_cast<int>(k);
        prog.ion_start.push_back(off_lattice(fresh));
        for (const auto& mv : plans[k].moves) {
            const int to = patch->stabilizer_at(mv.to.junction);
            int ion = fresh;
            if (mv.from.zone == ZoneKind::Readout) {
                const int from = patch->stabilizer_at(mv.from.junction);
                ion = occupant[static_cast<std::size_t>(from)];
                occupant[static_cast<std::size_t>(from)] = -1;
            }
            occupant[static_cast<std::size_t>(to)] = ion;
            Timeslot slot{SlotKind::Shuttle, -1, {}};
            if (ion >= 0) slot.actions.push_back({ActionKind::Shuttle, ion, -1, mv.to});
            prog.slots.push_back(std::move(slot));
        }
    }
    prog.patch = std::move(patch);
    prog.round_duration = cycle_duration(prog);
    return prog;
}

LossSimulator::LossSimulator(const Layout& layout, std::shared_ptr<const CodePatch> patch, TimingParams timing,
                             int moves_per_cycle)
    : layout_(layout),
      patch_(std::move(patch)),
      timing_(timing),
      moves_per_cycle_(moves_per_cycle),
      state_(*patch_) {
    if (moves_per_cycle_ < 1) throw ConfigError("loss.moves_per_cycle", "must be >= 1");
    const auto n = static_cast<std::size_t>(state_.junctions());
    lost_at_.assign(n, -1);
    data_lost_at_.assign(n, -1);
    probe_blocked_.assign(n, 0);
}

void LossSimulator::inject(const LossInjection& loss) {
    if (loss.junction < 0 || loss.junction >= state_.junctions()) throw ConfigError("loss.junction", "outside the patch");
    if (loss.cycle < 0) throw ConfigError("loss.cycle", "must be >= 0");
    pending_.push_back(loss);
}

void LossSimulator::log(int cycle, int site, std::string event, int latency) {
    summary_.log.push_back({cycle, site, std::move(event), latency});
}

LossRunSummary LossSimulator::run(int max_cycles) {
    const int nj = state_.junctions();
    for (int c = 0; c < max_cycles; ++c) {
        // Probe: every available measure ion is pushed towards its data ion.
        for (int j = 0; j < nj; ++j) {
            try {
                if (probe_data_loss(state_, j) == ProbeResult::DataMissing) {
                    const int lat = c - data_lost_at_[static_cast<std::size_t>(j)];
                    log(c, j, "data_missing", lat);
                    log(c, j, "measure_relabeled_data", lat);
                    summary_.max_data_resumption = std::max(summary_.max_data_resumption, lat);
                    data_lost_at_[static_cast<std::size_t>(j)] = -1;
                    lost_at_[static_cast<std::size_t>(j)] = c;
                    waiting_.push_back(j);
                }
            } catch (const ProtocolError&) {
                if (!state_.at(j).data_ion && !probe_blocked_[static_cast<std::size_t>(j)]) {
                    probe_blocked_[static_cast<std::size_t>(j)] = 1;
                    log(c, j, "probe_deferred", c - data_lost_at_[static_cast<std::size_t>(j)]);
                }
            }
        }

        // Stabilizer round with unavailable measure sites parked.
        std::vector<DefectRegion> defects;
        const auto parked_sites = state_.unavailable_measures();
        if (!parked_sites.empty()) defects.push_back({parked_sites, c, c + 1});
        const CycleProgram round = compile_cycle(patch_, defects, timing_, c);
        summary_.schedule_conflicts += static_cast<int>(validate_schedule(round).size());

        for (const auto& l : pending_) {
            if (l.cycle != c) continue;
            auto& site = state_.at(l.junction);
            if (l.kind != LossKind::Data) site.measure_ion = false;
            if (l.kind != LossKind::Measure) {
                site.data_ion = false;
                data_lost_at_[static_cast<std::size_t>(l.junction)] = c;
            }
            lost_at_[static_cast<std::size_t>(l.junction)] = c;
            log(c, l.junction, std::string("lost_") + to_string(l.kind), 0);
        }

        std::vector<std::int8_t> readout(static_cast<std::size_t>(nj), 0);
        for (int j = 0; j < nj; ++j) {
            if (round.is_parked(j) || !state_.at(j).measure_ion) readout[static_cast<std::size_t>(j)] = kAbsent;
        }
        for (int j : detect_measure_loss(state_, readout, round.parked)) {
            log(c, j, "measure_missing", c - lost_at_[static_cast<std::size_t>(j)]);
            waiting_.push_back(j);
        }

        // Replenishment: one plan at a time, so plans sharing a loading zone never interleave.
        if (active_) {
            active_->done += moves_per_cycle_;
            if (active_->done >= active_->plan.length()) {
                const int j = active_->plan.target;
                auto& site = state_.at(j);
                site.measure_ion = true;
                site.measure = SiteStatus::Present;
                probe_blocked_[static_cast<std::size_t>(j)] = 0;
                log(c, j, "replenished", c - active_->loss_cycle);
                active_.reset();
            }
        }
        if (!active_ && !waiting_.empty()) {
            const int j = waiting_.front();
            waiting_.pop_front();
            auto plan = replenish(layout_, *patch_, j, moves_per_cycle_, patch_->stabilizer_count());
            const CycleProgram moves = shuttle_program(patch_, state_, std::span(&plan, 1), timing_);
            summary_.schedule_conflicts += static_cast<int>(validate_schedule(moves).size());
            state_.at(j).measure = SiteStatus::Replenishing;
            log(c, j, "replenish_start", c - lost_at_[static_cast<std::size_t>(j)]);
            active_ = ActivePlan{std::move(plan), 0, lost_at_[static_cast<std::size_t>(j)]};
            ++fresh_ids_;
        }

        const bool quiet = !active_ && waiting_.empty() &&
                           std::none_of(pending_.begin(), pending_.end(), [c](const LossInjection& l) { return l.cycle > c; });
        if (quiet && state_.full()) {
            summary_.recovered = true;
            summary_.cycles = c + 1;
            return summary_;
        }
    }
    summary_.cycles = max_cycles;
    summary_.recovered = state_.full();
    return summary_;
}

LossCampaign random_loss_campaign(const Layout& layout, GridSize block, int cases, std::uint64_t seed,
                                  const TimingParams& timing, int moves_per_cycle, int max_cycles) {
    if (cases < 0) throw ConfigError("loss.events", "must be >= 0");
    auto patch = std::make_shared<const CodePatch>(CodePatch::region(layout, block));
    LossCampaign out;
    for (int k = 0; k < cases; ++k) {
        TrialRng rng(seed, static_cast<std::uint64_t>(k));
        LossInjection inj;
        inj.cycle = 1;
        inj.junction = static_cast<int>(rng.below(static_cast<std::uint64_t>(patch->stabilizer_count())));
        inj.kind = static_cast<LossKind>(rng.below(3));
        LossSimulator sim(layout, patch, timing, moves_per_cycle);
        sim.inject(inj);
        auto summary = sim.run(max_cycles);
        if (summary.recovered) ++out.recovered;
        out.schedule_conflicts += summary.schedule_conflicts;
        if (inj.kind == LossKind::Data) out.max_data_resumption = std::max(out.max_data_resumption, summary.max_data_resumption);
        if (inj.kind == LossKind::Both) out.max_both_resumption = std::max(out.max_both_resumption, summary.max_data_resumption);
        out.cases.push_back({inj, std::move(summary)});
    }
    return out;
}

}  // namespace mtqc
