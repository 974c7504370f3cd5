// mtqc: command-line front end for the architecture models.
#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "mtqc/commands.hpp"
#include "mtqc/error.hpp"

using mtqc::cli::json;

namespace {

template <typename T>
void set_if(json& layer, const std::string& dotted, const std::optional<T>& v) {
    if (!v) return;
    json* node = &layer;
    std::size_t start = 0;
    for (;;) {
        const auto dot = dotted.find('.', start);
        const auto key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (dot == std::string::npos) {
            (*node)[key] = *v;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapped-ion architecture models: surface-code simulation, resources, thermal and field"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path, output_dir, format;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON config file (or a previous report)");
    app.add_option("--seed", seed, "global seed");
    app.add_option("--output-dir", output_dir, "output directory (overrides MTQC_OUTPUT_DIR)");
    app.add_option("--format", format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo logical error rates of surface-code memories");
    std::optional<std::vector<int>> sim_d;
    std::optional<std::vector<double>> sim_p;
    std::optional<int> sim_rounds, sim_threads, sim_dump_syn, sim_loss;
    std::optional<std::uint64_t> sim_trials;
    std::optional<std::string> sim_basis;
    bool sim_dump_prog = false;
    sim->add_option("--d", sim_d, "code distances")->delimiter(',');
    sim->add_option("--p", sim_p, "physical error rates")->delimiter(',');
    sim->add_option("--rounds", sim_rounds, "stabilizer rounds (0: d rounds)");
    sim->add_option("--trials", sim_trials, "trials per point");
    sim->add_option("--threads", sim_threads, "worker threads (0: hardware)");
    sim->add_option("--basis", sim_basis, "Z or X memory");
    sim->add_flag("--dump-program", sim_dump_prog, "write the compiled round as JSON");
    sim->add_option("--dump-syndromes", sim_dump_syn, "write syndrome records of the first N trials as CSV");
    sim->add_option("--loss-events", sim_loss, "run N random single-ion loss cases and write the event log");

    auto* est = app.add_subcommand("estimate", "resource estimate for factoring an n-bit number");
    std::optional<int> est_bits;
    std::optional<double> est_p;
    bool est_medium = false;
    est->add_option("--bits", est_bits, "modulus size n");
    est->add_option("--p-phys", est_p, "physical error rate");
    est->add_flag("--medium-shuttling", est_medium, "allow medium-range shuttling");

    auto* th = app.add_subcommand("thermal", "module heat load and surface temperature");
    std::optional<double> th_current, th_coolant;
    th->add_option("--current", th_current, "gradient-wire current, A");
    th->add_option("--coolant", th_coolant, "coolant temperature, K");

    auto* fld = app.add_subcommand("field", "RF pseudopotential, nil and transport barrier");
    std::optional<std::string> fld_geom;
    std::optional<std::vector<double>> fld_mis;
    std::optional<double> fld_gap, fld_density, fld_depth;
    std::optional<int> fld_slices;
    bool fld_map = false;
    fld->add_option("--geometry", fld_geom,
                    "five_wire, module_boundary, x_junction, interrupted_rails or a geometry file");
    fld->add_option("--misalignment", fld_mis, "dx,dy,dz in um")->delimiter(',')->expected(3);
    fld->add_option("--gap", fld_gap, "inter-module gap, um");
    fld->add_option("--density", fld_density, "mesh density multiplier");
    fld->add_option("--depth", fld_depth, "target trap depth, meV");
    fld->add_option("--slices", fld_slices, "axial slices along the nil");
    fld->add_flag("--map", fld_map, "also sample and write the pseudopotential map");

    auto* lay = app.add_subcommand("layout", "lattice counts for a machine of a given size");
    std::optional<double> lay_ions;
    lay->add_option("--ions", lay_ions, "total ions");

    CLI11_PARSE(app, argc, argv);

    try {
        json flags = json::object();
        set_if(flags, "seed", seed);
        set_if(flags, "output.dir", output_dir);
        set_if(flags, "output.format", format);
        set_if(flags, "simulate.distances", sim_d);
        set_if(flags, "simulate.p", sim_p);
        set_if(flags, "simulate.rounds", sim_rounds);
        set_if(flags, "simulate.trials", sim_trials);
        set_if(flags, "simulate.threads", sim_threads);
        set_if(flags, "simulate.basis", sim_basis);
        set_if(flags, "simulate.dump_syndromes", sim_dump_syn);
        set_if(flags, "simulate.loss.events", sim_loss);
        if (sim_dump_prog) flags["simulate"]["dump_program"] = true;
        set_if(flags, "estimate.bits", est_bits);
        set_if(flags, "estimate.p_phys", est_p);
        if (est_medium) flags["estimate"]["medium_range_shuttling"] = true;
        set_if(flags, "thermal.wire.current_A", th_current);
        set_if(flags, "thermal.cooler.coolant_K", th_coolant);
        set_if(flags, "field.geometry", fld_geom);
        set_if(flags, "field.misalignment_um", fld_mis);
        set_if(flags, "field.gap_um", fld_gap);
        set_if(flags, "field.mesh.density", fld_density);
        set_if(flags, "field.barrier.target_depth_meV", fld_depth);
        set_if(flags, "field.barrier.slices", fld_slices);
        if (fld_map) flags["field"]["map"]["enabled"] = true;
        set_if(flags, "layout.ions", lay_ions);

        const json file = config_path ? mtqc::cli::load_config_file(*config_path) : json();
        const json cfg = mtqc::cli::resolve(file, flags);
        const auto report = mtqc::cli::run(app.get_subcommands().front()->get_name(), cfg);
        for (const auto& p : mtqc::cli::emit(report)) std::cerr << "wrote " << p.string() << '\n';
        if (mtqc::cli::get<std::string>(cfg, "output.format") == "table") std::cout << mtqc::cli::to_table(report);
        return 0;
    } catch (const mtqc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
