// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mtqc/commands.hpp"
#include "mtqc/decoder.hpp"
#include "mtqc/error.hpp"
#include "mtqc/field.hpp"
#include "mtqc/lattice.hpp"
#include "mtqc/loss.hpp"
#include "mtqc/resources.hpp"
#include "mtqc/thermal.hpp"

using namespace mtqc;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

Verdict layout_arithmetic() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeSpecs s;
    const auto plan = chambers_required(1e9, 2, s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(s.junctions_per_module() == 1296, "junctions per module");
    v.require(dac_layers(s.submodule) == 9, "DAC layers");
    v.require(plan.chambers == 225, "chambers");
    v.require(std::abs(plan.floor_side.si() - 67.5) < 1e-9, "floor side");
    v.require(secs < 1.0, "runtime");
    v.detail << "junctions=" << s.junctions_per_module() << " dac_layers=" << dac_layers(s.submodule)
             << " chambers=" << plan.chambers << " floor=" << plan.floor_side.si() << "m t=" << secs << "s";
    return v;
}

Verdict detection() {
    Verdict v;
    const auto r = detection_chain(0.30, 0.80, 0.10);
    v.require(r.efficiency >= 0.015 && r.efficiency <= 0.03, "efficiency band");
    v.require(std::abs(r.efficiency - 0.024) < 1e-12, "product");
    v.detail << "efficiency=" << r.efficiency << " class=" << r.fidelity_class;
    return v;
}

Verdict thermal() {
    Verdict v;
    const auto p = module_power(LatticeSpecs{});
    const auto t = surface_temperature(p);
    const double wire = wire_power(WireSpec{}).si();
    v.require(rel(wire, 0.267) <= 0.2, "wire power");
    v.require(p.total.si() >= 900.0 && p.total.si() <= 1100.0, "module total");
    v.require(std::abs(p.flux_W_per_mm2() - 0.12) <= 0.01, "flux");
    v.require(t.delta_T.si() <= 2.0, "delta T");
    v.require(std::abs(t.surface.si() - 72.0) <= 1.0, "surface");
    v.detail << "wire=" << wire << "W total=" << p.total.si() << "W flux=" << p.flux_W_per_mm2()
             << "W/mm2 dT=" << t.delta_T.si() << "K surface=" << t.surface.si() << "K";
    return v;
}

Verdict shor() {
    Verdict v;
    auto est = [](int bits, double p, bool medium) {
        FactoringJob job;
        job.bits = bits;
        job.medium_range_shuttling = medium;
        ErrorBudget b;
        b.p_phys = p;
        return estimate_shor(job, TimingParams{}, b);
    };
    const auto n2048 = est(2048, 1e-3, false);
    const auto n1024 = est(1024, 1e-3, false);
    const auto good = est(2048, 1e-4, false);
    const auto medium = est(2048, 1e-4, true);
    v.require(rel(n2048.wall_time_days(), 110.0) <= 0.15, "2048 days");
    v.require(rel(n2048.total_ions, 1e9) <= 0.15, "2048 ions");
    v.require(rel(n1024.wall_time_days(), 14.0) <= 0.15, "1024 days");
    v.require(rel(good.wall_time_days(), 10.0) <= 0.15, "p=1e-4 days");
    v.require(rel(good.total_ions, 3e8) <= 0.15, "p=1e-4 ions");
    v.require(rel(medium.total_ions, 3e6) <= 0.15, "medium-range ions");
    const auto scale = scaling_consistency(n2048, n1024);
    v.require(scale.ok, "runtime scaling");
    v.detail << "2048: " << n2048.wall_time_days() << "d " << n2048.total_ions << " ions; 1024: "
             << n1024.wall_time_days() << "d; p=1e-4: " << good.wall_time_days() << "d " << good.total_ions
             << " ions; medium: " << medium.total_ions << " ions; ratio=" << scale.ratio;
    return v;
}

Verdict surface_code() {
    Verdict v;
    const std::vector<int> ds{3, 5, 7};
    auto sweep = [&](double p, std::uint64_t trials) {
        std::vector<RateEstimate> out;
        for (int d : ds) out.push_back(logical_error_rate(d, d, NoiseParams::uniform(p, kSeed), trials, 1));
        return out;
    };
    auto separated = [](const std::vector<RateEstimate>& r) {
        for (std::size_t i = 1; i < r.size(); ++i) {
            if (!(r[i].rate < r[i - 1].rate && r[i].ci_high < r[i - 1].ci_low)) return false;
        }
        return true;
    };
    // Trials double until the intervals separate or the cap is hit.
    std::uint64_t trials = 10'000;
    auto low = sweep(1e-3, trials);
    while (!separated(low) && trials < 4'000'000) {
        trials *= 2;
        low = sweep(1e-3, trials);
    }
    v.require(separated(low), "p=1e-3 strictly decreasing with disjoint 95% intervals");
    v.detail << "p=1e-3 trials=" << trials;
    for (const auto& r : low) v.detail << " d" << r.distance << "=" << r.rate << "[" << r.ci_low << "," << r.ci_high << "]";

    const auto high = sweep(3e-2, 10'000);
    v.require(!separated(high), "p=3e-2 ordering inverts or flattens");
    v.detail << "; p=3e-2";
    for (const auto& r : high) v.detail << " d" << r.distance << "=" << r.rate;
    return v;
}

bool clean(const std::vector<std::int8_t>& syndrome) {
    return std::none_of(syndrome.begin(), syndrome.end(), [](std::int8_t s) { return s == 1; });
}

Verdict decoder() {
    Verdict v;
    NoiseParams noise = NoiseParams::uniform(1e-3, kSeed);
    const auto model = memory_model(3, 3, noise);
    const auto& prog = model->programs().front();
    const auto& patch = model->patch();
    const auto quiet = NoiseParams::uniform(0.0);

    // Every single physical fault location, fed through the simulator.
    std::uint64_t singles = 0, bad_singles = 0;
    for (int r = 0; r < model->rounds(); ++r) {
        for (int slot = -1; slot < static_cast<int>(prog.slots.size()); ++slot) {
            for (int q = 0; q < patch.qubit_count(); ++q) {
                for (const Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
                    Injection inj;
                    inj.faults.push_back({r, slot, q, p});
                    const auto run = run_rounds(prog, quiet, model->rounds(), Basis::Z, 0, inj);
                    const auto c = decode(build_graph(run.history, model));
                    ++singles;
                    bad_singles += clean(residual_syndrome(run.final_frame, c, *model)) ? 0 : 1;
                }
            }
        }
    }

    // Every pair of elementary fault mechanisms of the model.
    const auto& mech = model->mechanisms();
    const int nd = model->detector_count();
    std::uint64_t pairs = 0, bad_pairs = 0;
    std::vector<std::uint8_t> fired_mask(static_cast<std::size_t>(nd));
    for (std::size_t i = 0; i < mech.size(); ++i) {
        for (std::size_t j = i + 1; j < mech.size(); ++j) {
            std::fill(fired_mask.begin(), fired_mask.end(), 0);
            PauliFrame frame(patch.data_count());
            for (const auto* m : {&mech[i], &mech[j]}) {
                for (int d : m->detectors) fired_mask[static_cast<std::size_t>(d)] ^= 1;
                for (int q : m->x_flips) frame.apply(q, Pauli::X);
                for (int q : m->z_flips) frame.apply(q, Pauli::Z);
            }
            std::vector<int> fired;
            for (int d = 0; d < nd; ++d) {
                if (fired_mask[static_cast<std::size_t>(d)]) fired.push_back(d);
            }
            const auto c = decode(build_graph(std::span<const int>(fired), model));
            ++pairs;
            bad_pairs += clean(residual_syndrome(frame, c, *model)) ? 0 : 1;
        }
    }
    v.require(bad_singles == 0, "single injections");
    v.require(bad_pairs == 0, "double injections");

    const ExactOracle oracle(model);
    const double opt = oracle.optimal_failure_rate();
    const double mwpm = matcher_failure_rate(oracle);
    v.require(mwpm >= opt * (1.0 - 1e-12), "matcher not below the optimum");
    v.require(mwpm <= 2.0 * opt, "matcher within 2x of the optimum");
    v.detail << "singles=" << singles << " bad=" << bad_singles << " pairs=" << pairs << " bad=" << bad_pairs
             << " optimal=" << opt << " matcher=" << mwpm << " ratio=" << mwpm / opt;
    return v;
}

Verdict loss() {
    Verdict v;
    const auto c = random_loss_campaign(build_layout(1296), {6, 6}, 100, kSeed);
    v.require(c.cases.size() == 100, "case count");
    v.require(c.recovered == 100, "full occupancy restored");
    v.require(c.max_data_resumption <= 2, "data-loss resumption within 2 rounds");
    v.require(c.schedule_conflicts == 0, "schedule conflicts");
    v.detail << "cases=" << c.cases.size() << " recovered=" << c.recovered << " conflicts=" << c.schedule_conflicts
             << " max_data_resumption=" << c.max_data_resumption << " max_both_resumption=" << c.max_both_resumption;
    return v;
}

Verdict field() {
    Verdict v;
    constexpr double a = 150e-6, b = 100e-6, half = 1.5e-3;
    const DriveParams drive;

    const auto s = solve_charges(five_wire(a, b, -half, half));
    const auto nil = track_nil(s, drive, -1e-6, 1e-6, 3, 0.0, 100e-6)[1];
    const auto exact = analytic_oracle(a, b, drive);
    const double height_err = rel(nil.height, exact.nil_height);
    v.require(height_err <= 0.05, "nil height vs analytic");

    const BarrierOptions opt;
    const auto flat = barrier(module_boundary(a, b, half, 0.0, {0, 0, 0}), drive, opt);
    v.require(flat.barrier_meV < 0.01 * flat.depth_meV, "aligned barrier below 1% of depth");

    std::vector<double> sweep;
    for (int k = 0; k <= 8; ++k) {
        const double m = 2.5e-6 * k;
        sweep.push_back(barrier(module_boundary(a, b, half, 0.0, {m, m, m}), drive, opt).barrier_meV);
    }
    const double ten = sweep[4];
    v.require(ten >= 0.2 / 3.0 && ten <= 0.2 * 3.0, "10 um barrier within 3x of 0.2 meV");
    v.require(std::is_sorted(sweep.begin(), sweep.end()) &&
                  std::adjacent_find(sweep.begin(), sweep.end()) == sweep.end(),
              "monotone sweep");
    v.detail << "nil=" << nil.height * 1e6 << "um analytic=" << exact.nil_height * 1e6 << "um err=" << height_err
             << " aligned=" << flat.barrier_meV << "meV depth=" << flat.depth_meV << "meV sweep=";
    for (double x : sweep) v.detail << x << " ";
    return v;
}

Verdict reproducibility() {
    Verdict v;
    using cli::json;
    json flags = {{"seed", 42},
                  {"simulate", {{"distances", {3, 5}}, {"p", {0.004}}, {"trials", 2000}, {"threads", 1},
                                {"loss", {{"events", 5}}}}}};
    const json cfg = cli::resolve(json::object(), flags);
    auto bytes = [&](const std::string& cmd, const json& c) {
        const auto r = cli::run(cmd, c);
        std::string out = cli::payload(r);
        for (const auto& t : r.tables) out += cli::to_csv(t, r.config);
        return out;
    };
    for (const std::string cmd : {"simulate", "estimate", "thermal", "layout"}) {
        const bool same = bytes(cmd, cfg) == bytes(cmd, cfg);
        v.require(same, cmd);
        v.detail << cmd << (same ? "=identical " : "=differs ");
    }
    json other = flags;
    other["seed"] = 43;
    const bool seed_matters = bytes("simulate", cli::resolve(json::object(), other)) != bytes("simulate", cfg);
    v.require(seed_matters, "seed changes the simulation");
    v.detail << "seed_sensitive=" << (seed_matters ? "yes" : "no");
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"layout arithmetic", layout_arithmetic},
        {"detection chain", detection},
        {"thermal budget", thermal},
        {"factoring estimates", shor},
        {"surface-code threshold behaviour", surface_code},
        {"decoder soundness", decoder},
        {"ion-loss protocol", loss},
        {"junction field", field},
        {"reproducibility", reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        failures += v.pass ? 0 : 1;
        std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL",
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
