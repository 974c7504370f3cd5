#include "mtqc/commands.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "mtqc/decoder.hpp"
#include "mtqc/error.hpp"
#include "mtqc/loss.hpp"

namespace mtqc::cli {
namespace {

namespace fs = std::filesystem;

json zone_json(const ZoneRef& z) {
    return {{"row", z.junction.row}, {"col", z.junction.col}, {"zone", to_string(z.zone)}};
}

json program_json(const CycleProgram& p) {
    json slots = json::array();
    for (std::size_t i = 0; i < p.slots.size(); ++i) {
        const auto& s = p.slots[i];
        json actions = json::array();
        for (const auto& a : s.actions) {
            json act{{"kind", to_string(a.kind)}, {"ion", a.ion}};
            if (a.data >= 0) act["data"] = a.data;
            if (a.kind == ActionKind::Shuttle) act["target"] = zone_json(a.target);
            actions.push_back(std::move(act));
        }
        slots.push_back({{"index", i}, {"kind", to_string(s.kind)}, {"cnot_step", s.cnot_step}, {"actions", actions}});
    }
    return {{"distance", p.patch->distance()},
            {"data_qubits", p.patch->data_count()},
            {"stabilizers", p.patch->stabilizer_count()},
            {"round_duration_us", p.round_duration.si() * 1e6},
            {"slots", slots}};
}

std::string point_tag(int d, double p) {
    std::ostringstream os;
    os << "d" << d << "_p" << p;
    return os.str();
}

fs::path output_dir(const json& cfg) { return get<std::string>(cfg, "output.dir"); }

}  // namespace

RunReport run_simulate(const json& cfg) {
    RunReport r{"simulate", cfg, json::object(), {}, 0.0};
    const auto distances = get<std::vector<int>>(cfg, "simulate.distances");
    const auto ps = get<std::vector<double>>(cfg, "simulate.p");
    const int rounds_cfg = get<int>(cfg, "simulate.rounds");
    const auto trials = get<std::uint64_t>(cfg, "simulate.trials");
    const int threads = get<int>(cfg, "simulate.threads");
    const auto seed = get<std::uint64_t>(cfg, "seed");
    const int dump_syndromes = get<int>(cfg, "simulate.dump_syndromes");
    const bool dump_program = get<bool>(cfg, "simulate.dump_program");
    const Basis b = basis(cfg);
    const TimingParams t = timing(cfg);
    const auto specs = lattice_specs(cfg);
    if (rounds_cfg < 0) throw ConfigError("simulate.rounds", "must be >= 0 (0 means d rounds)");
    if (threads < 0) throw ConfigError("simulate.threads", "must be >= 0");
    if (dump_syndromes < 0) throw ConfigError("simulate.dump_syndromes", "must be >= 0");
    for (const int d : distances) {
        if (d < 3 || d % 2 == 0) throw ConfigError("simulate.distances", "each distance must be odd and >= 3");
    }
    for (const double p : ps) {
        if (!(p >= 0.0) || p > 0.5) throw ConfigError("simulate.p", "each rate must lie in [0, 0.5]");
    }

    const Layout layout = build_layout(specs.junctions_per_module(), specs);
    CsvTable table{"simulate", {"d", "p", "rounds", "trials", "failures", "rate", "ci_low", "ci_high"}, {}};
    json rates = json::array();
    for (const int d : distances) {
        const int rounds = rounds_cfg == 0 ? d : rounds_cfg;
        auto patch = std::make_shared<const CodePatch>(CodePatch::rotated(layout, d));
        const CycleProgram program = compile_cycle(patch, {}, t);
        if (dump_program) {
            const auto name = "program_d" + std::to_string(d) + ".json";
            write_atomic(output_dir(cfg) / name, program_json(program).dump(2) + "\n");
            r.results["dumps"].push_back(name);
        }
        for (const double p : ps) {
            const NoiseParams noise = NoiseParams::uniform(p, seed);
            const RateEstimate e = logical_error_rate(d, rounds, noise, trials, static_cast<unsigned>(threads), b);
            table.rows.push_back({e.distance, e.p, e.rounds, e.trials, e.failures, e.rate, e.ci_low, e.ci_high});
            rates.push_back({{"d", e.distance},
                             {"p", e.p},
                             {"rounds", e.rounds},
                             {"trials", e.trials},
                             {"failures", e.failures},
                             {"rate", e.rate},
                             {"ci_low", e.ci_low},
                             {"ci_high", e.ci_high}});
            if (dump_syndromes > 0) {
                NoiseParams dump_noise = noise;
                dump_noise.p_loss = 0.0;
                CsvTable syn{"syndromes_" + point_tag(d, p), {"trial", "round", "stabilizer", "outcome", "event"}, {}};
                for (int k = 0; k < dump_syndromes; ++k) {
                    const auto run = run_rounds(program, dump_noise, rounds, b, static_cast<std::uint64_t>(k));
                    const auto& h = run.history;
                    for (int rr = 0; rr < h.round_count(); ++rr) {
                        const auto& out = h.rounds[static_cast<std::size_t>(rr)];
                        for (std::size_t s = 0; s < out.size(); ++s) {
                            syn.rows.push_back({k, rr, s, out[s], h.detection_events[static_cast<std::size_t>(rr)][s]});
                        }
                    }
                    for (std::size_t s = 0; s < h.final_layer.size(); ++s) {
                        if (h.final_layer[s] == kAbsent) continue;
                        syn.rows.push_back({k, h.round_count(), s, h.final_layer[s], ""});
                    }
                }
                const auto name = syn.name + ".csv";
                write_atomic(output_dir(cfg) / name, to_csv(syn, cfg));
                r.results["dumps"].push_back(name);
            }
        }
    }
    r.results["rates"] = rates;
    r.tables.push_back(std::move(table));

    const int loss_events = get<int>(cfg, "simulate.loss.events");
    if (loss_events > 0) {
        const int block = get<int>(cfg, "simulate.loss.block");
        if (block < 2) throw ConfigError("simulate.loss.block", "must be >= 2");
        const auto campaign =
            random_loss_campaign(layout, {block, block}, loss_events, seed, t, get<int>(cfg, "simulate.loss.moves_per_cycle"),
                                 get<int>(cfg, "simulate.loss.max_cycles"));
        CsvTable log{"loss_log", {"case", "cycle", "site", "event", "latency"}, {}};
        for (std::size_t k = 0; k < campaign.cases.size(); ++k) {
            for (const auto& e : campaign.cases[k].summary.log) log.rows.push_back({k, e.cycle, e.site, e.event, e.latency});
        }
        r.results["loss"] = {{"cases", loss_events},
                             {"recovered", campaign.recovered},
                             {"schedule_conflicts", campaign.schedule_conflicts},
                             {"max_data_resumption_cycles", campaign.max_data_resumption},
                             {"max_both_lost_resumption_cycles", campaign.max_both_resumption}};
        r.tables.push_back(std::move(log));
    }
    return r;
}

RunReport run_estimate(const json& cfg) {
    RunReport r{"estimate", cfg, json::object(), {}, 0.0};
    const auto rep = estimate_shor(factoring_job(cfg), timing(cfg), error_budget(cfg), resource_model(cfg),
                                   lattice_specs(cfg));
    const auto det = detection_chain(get<double>(cfg, "estimate.detection.quantum_efficiency"),
                                     get<double>(cfg, "estimate.detection.transmission"),
                                     get<double>(cfg, "estimate.detection.collection"),
                                     microseconds(get<double>(cfg, "estimate.detection.window_us")),
                                     get<double>(cfg, "estimate.detection.dark_rate_hz"));
    r.results = {{"bits", rep.bits},
                 {"p_phys", rep.p_phys},
                 {"code_distance", rep.code_distance},
                 {"logical_qubits", rep.logical_qubits},
                 {"factory_tiles", rep.factory_tiles},
                 {"cycles", rep.cycles},
                 {"total_junctions", rep.total_junctions},
                 {"total_ions", rep.total_ions},
                 {"modules", rep.modules},
                 {"chambers", rep.chambers},
                 {"floor_side_m", rep.floor_side_m},
                 {"wall_time_s", rep.wall_time_s},
                 {"wall_time_days", rep.wall_time_days()},
                 {"distillation_fraction", rep.distillation_fraction},
                 {"detection", {{"efficiency", det.efficiency}, {"fidelity_class", det.fidelity_class}}}};
    return r;
}

RunReport run_thermal(const json& cfg) {
    RunReport r{"thermal", cfg, json::object(), {}, 0.0};
    const auto specs = lattice_specs(cfg);
    const auto wire = wire_spec(cfg);
    const int dacs_per_layer = get<int>(cfg, "thermal.dacs_per_layer");
    if (dacs_per_layer < 0) throw ConfigError("thermal.dacs_per_layer", "must be >= 0");
    const auto power = module_power(specs, wire, Power(get<double>(cfg, "thermal.dac_power_W")),
                                    Power(get<double>(cfg, "thermal.control_rf_W")), dacs_per_layer);
    const auto th = surface_temperature(power, cooler_spec(cfg), wire);
    r.results = {{"wire_power_per_junction_W", wire_power(wire).si()},
                 {"power",
                  {{"wires_W", power.wires.si()},
                   {"dacs_W", power.dacs.si()},
                   {"control_rf_W", power.control_rf.si()},
                   {"total_W", power.total.si()},
                   {"dac_count", power.dac_count},
                   {"module_area_mm2", power.module_area.si() * 1e6},
                   {"flux_W_per_mm2", power.flux_W_per_mm2()}}},
                 {"temperature",
                  {{"convective_delta_K", th.convective_delta.si()},
                   {"conduction_delta_K", th.conduction_delta.si()},
                   {"delta_T_K", th.delta_T.si()},
                   {"surface_K", th.surface.si()},
                   {"wire_K", th.wire.si()},
                   {"narrow_section_delta_K", th.narrow_section_delta.si()}}},
                 {"warnings", th.warnings}};
    return r;
}

RunReport run_field(const json& cfg) {
    RunReport r{"field", cfg, json::object(), {}, 0.0};
    const auto g = trap_geometry(cfg);
    const auto drive = drive_params(cfg);
    const auto opt = barrier_options(cfg);
    const auto res = barrier(g, drive, opt);

    CsvTable prof{"field_profile", {"axial_um", "transverse_um", "height_um", "phi_meV"}, {}};
    for (const auto& p : res.profile) {
        prof.rows.push_back({p.axial * 1e6, p.transverse * 1e6, p.height * 1e6, p.phi_meV});
    }
    r.results = {{"geometry", get<std::string>(cfg, "field.geometry")},
                 {"patches", g.patches.size()},
                 {"panels", res.panels},
                 {"barrier_meV", res.barrier_meV},
                 {"depth_meV", res.depth_meV},
                 {"v_rf", res.v_rf},
                 {"nil_height_um", res.profile.front().height * 1e6}};
    if (get<std::string>(cfg, "field.geometry") == "five_wire") {
        DriveParams scaled = drive;
        scaled.v_rf = res.v_rf;
        const auto an = analytic_oracle(get<double>(cfg, "field.rail_width_um") * 1e-6,
                                        get<double>(cfg, "field.center_width_um") * 1e-6, scaled);
        r.results["analytic"] = {{"nil_height_um", an.nil_height * 1e6}, {"depth_meV", an.depth_meV}};
    }
    r.tables.push_back(std::move(prof));

    if (get<bool>(cfg, "field.map.enabled")) {
        const auto lo = get<std::vector<double>>(cfg, "field.map.lo_um");
        const auto hi = get<std::vector<double>>(cfg, "field.map.hi_um");
        const auto n = get<std::vector<int>>(cfg, "field.map.count");
        if (lo.size() != 3 || hi.size() != 3 || n.size() != 3) throw ConfigError("field.map", "lo, hi and count need three entries");
        DriveParams scaled = drive;
        scaled.v_rf = res.v_rf;
        const auto sol = solve_charges(g, opt.mesh);
        const auto map = sample_map(sol, scaled, {lo[0] * 1e-6, lo[1] * 1e-6, lo[2] * 1e-6},
                                    {hi[0] * 1e-6, hi[1] * 1e-6, hi[2] * 1e-6}, {n[0], n[1], n[2]});
        CsvTable mt{"field_map", {"x_um", "y_um", "z_um", "phi_meV"}, {}};
        for (int iy = 0; iy < n[1]; ++iy) {
            for (int iz = 0; iz < n[2]; ++iz) {
                for (int ix = 0; ix < n[0]; ++ix) {
                    mt.rows.push_back({lo[0] + ix * map.spacing[0] * 1e6, lo[1] + iy * map.spacing[1] * 1e6,
                                       lo[2] + iz * map.spacing[2] * 1e6, map.at(ix, iy, iz)});
                }
            }
        }
        json nil = json::array();
        for (const auto& p : find_rf_nil(map)) {
            nil.push_back({{"axial_um", p.axial * 1e6}, {"transverse_um", p.transverse * 1e6},
                           {"height_um", p.height * 1e6}, {"phi_meV", p.phi_meV}});
        }
        r.results["map_nil"] = nil;
        r.tables.push_back(std::move(mt));
    }
    return r;
}

RunReport run_layout(const json& cfg) {
    RunReport r{"layout", cfg, json::object(), {}, 0.0};
    const auto specs = lattice_specs(cfg);
    const double ions = get<double>(cfg, "layout.ions");
    const int per = get<int>(cfg, "layout.ions_per_junction");
    if (!(ions >= 1.0)) throw ConfigError("layout.ions", "must be >= 1");
    if (per < 1) throw ConfigError("layout.ions_per_junction", "must be >= 1");
    const auto junctions = static_cast<std::int64_t>(std::ceil(ions / per));
    const auto s = build_layout(junctions, specs).summary();
    const auto plan = chambers_required(ions, per, specs);
    r.results = {{"junctions_per_module", specs.junctions_per_module()},
                 {"dac_layers", dac_layers(specs.submodule)},
                 {"junctions", s.junctions},
                 {"ion_sites", s.ion_sites},
                 {"submodules", s.submodules},
                 {"modules", s.modules},
                 {"chambers", plan.chambers},
                 {"loading_zones", s.loading_zones},
                 {"floor_side_m", plan.floor_side.si()},
                 {"floor_area_m2", plan.floor_side.si() * plan.floor_side.si()}};
    return r;
}

RunReport run(const std::string& command, const json& cfg) {
    const auto format = get<std::string>(cfg, "output.format");
    if (format != "json" && format != "csv" && format != "table") {
        throw ConfigError("output.format", "must be one of json, csv, table");
    }
    (void)get<std::uint64_t>(cfg, "seed");
    const auto start = std::chrono::steady_clock::now();
    RunReport r;
    if (command == "simulate") r = run_simulate(cfg);
    else if (command == "estimate") r = run_estimate(cfg);
    else if (command == "thermal") r = run_thermal(cfg);
    else if (command == "field") r = run_field(cfg);
    else if (command == "layout") r = run_layout(cfg);
    else throw ConfigError("command", "unknown subcommand '" + command + "'");
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace mtqc::cli
