#include "mtqc/resources.hpp"

#include <cmath>
#include <sstream>

#include "mtqc/error.hpp"

namespace mtqc {

void ErrorBudget::validate() const {
    if (!(p_phys > 0.0)) throw ConfigError("budget.p_phys", "must be > 0");
    if (!(p_threshold > 0.0 && p_threshold < 1.0)) throw ConfigError("budget.p_threshold", "must be in (0, 1)");
    if (!(prefactor > 0.0)) throw ConfigError("budget.prefactor", "must be > 0");
    if (!(target_total_failure > 0.0 && target_total_failure < 1.0)) {
        throw ConfigError("budget.target_total_failure", "must be in (0, 1)");
    }
}

void ResourceModel::validate() const {
    if (logical_overhead < 0) throw ConfigError("model.logical_overhead", "must be >= 0");
    if (!(cycle_coefficient > 0.0)) throw ConfigError("model.cycle_coefficient", "must be > 0");
    if (!(p_reference > 0.0)) throw ConfigError("model.p_reference", "must be > 0");
    if (!(tile_coefficient > 0.0)) throw ConfigError("model.tile_coefficient", "must be > 0");
    if (tile_padding < 0.0) throw ConfigError("model.tile_padding", "must be >= 0");
    if (factory_tiles < 0.0) throw ConfigError("model.factory_tiles", "must be >= 0");
    if (!(medium_range_reduction >= 1.0)) throw ConfigError("model.medium_range_reduction", "must be >= 1");
    if (ions_per_junction < 1) throw ConfigError("model.ions_per_junction", "must be >= 1");
}

void FactoringJob::validate() const {
    if (bits < 4) throw ConfigError("job.bits", "must be >= 4");
    if (shuttle_range < 1) throw ConfigError("job.shuttle_range", "must be >= 1");
}

int code_distance(const ErrorBudget& budget, double logical_qubit_rounds) {
    if (!(logical_qubit_rounds >= 1.0)) throw ConfigError("logical_qubit_rounds", "must be >= 1");
    if (budget.p_phys >= budget.p_threshold) {
        std::ostringstream os;
        os << "p_phys " << budget.p_phys << " is not below the threshold " << budget.p_threshold;
        throw NoDistanceSuffices(os.str());
    }
    budget.validate();
    // Work in logs: the product underflows long before d gets large.
    const double log_ratio = std::log(budget.p_phys / budget.p_threshold);
    const double log_need = std::log(budget.target_total_failure) - std::log(budget.prefactor) -
                            std::log(logical_qubit_rounds);
    for (int d = 3; d < 100001; d += 2) {
        if (0.5 * (d + 1) * log_ratio <= log_need + 1e-12) return d;
    }
    throw NoDistanceSuffices("no distance below 100001 meets the budget");
}

ResourceReport estimate_shor(const FactoringJob& job, const TimingParams& timing, const ErrorBudget& budget,
                             const ResourceModel& model, const LatticeSpecs& specs) {
    job.validate();
    budget.validate();
    model.validate();
    timing.validate();

    ResourceReport r;
    r.bits = job.bits;
    r.p_phys = budget.p_phys;
    r.logical_qubits = 2LL * job.bits + model.logical_overhead;
    const double n3 = std::pow(static_cast<double>(job.bits), 3.0);
    const double overhead = std::pow(budget.p_phys / model.p_reference, model.error_exponent);
    auto cycles_at = [&](int d) { return model.cycle_coefficient * n3 * d * overhead; };

    // The runtime depends on d and d on the runtime; iterate to the fixed point.
    int d = 3;
    for (int it = 0; it < 64; ++it) {
        const int next = code_distance(budget, static_cast<double>(r.logical_qubits) * cycles_at(d));
        if (next == d) break;
        d = next;
    }
    r.code_distance = d;
    r.cycles = cycles_at(d);
    r.wall_time_s = r.cycles * timing.t_cycle.si();

    const double tile = model.tile_coefficient * std::pow(d + model.tile_padding, 2.0);
    r.factory_tiles = model.factory_tiles;
    r.total_junctions = (static_cast<double>(r.logical_qubits) + model.factory_tiles) * tile;
    if (job.medium_range_shuttling && job.shuttle_range >= model.medium_range_min_junctions) {
        r.total_junctions /= model.medium_range_reduction;
    }
    r.total_ions = model.ions_per_junction * r.total_junctions;
    r.distillation_fraction = model.factory_tiles / (static_cast<double>(r.logical_qubits) + model.factory_tiles);
    r.modules = static_cast<std::int64_t>(std::ceil(r.total_junctions / static_cast<double>(specs.junctions_per_module()) - 1e-9));
    const auto plan = chambers_required(r.total_ions, model.ions_per_junction, specs);
    r.chambers = plan.chambers;
    r.floor_side_m = plan.floor_side.si();
    return r;
}

DetectionResult detection_chain(double qe, double transmission, double collection, Duration window,
                                double dark_rate_hz) {
    const std::pair<const char*, double> fractions[] = {
        {"detection.quantum_efficiency", qe}, {"detection.transmission", transmission}, {"detection.collection", collection}};
    for (const auto& [name, v] : fractions) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(name, "must be a fraction in [0, 1]");
    }
    if (!(window.si() > 0.0)) throw ConfigError("detection.window", "must be > 0");
    if (dark_rate_hz < 0.0) throw ConfigError("detection.dark_rate", "must be >= 0");
    DetectionResult out;
    out.efficiency = qe * transmission * collection;
    if (out.efficiency >= 0.02 - 1e-12 && dark_rate_hz <= 1.0) {
        std::ostringstream os;
        os << "≈99.9% @ " << window.si() * 1e6 << " µs";
        out.fidelity_class = os.str();
    } else {
        out.fidelity_class = "degraded";
    }
    return out;
}

ScalingCheck scaling_consistency(const ResourceReport& larger, const ResourceReport& smaller, double tolerance) {
    ScalingCheck c;
    c.tolerance = tolerance;
    c.ratio = larger.wall_time_s / smaller.wall_time_s;
    c.expected = std::pow(static_cast<double>(larger.bits) / static_cast<double>(smaller.bits), 3.0);
    c.ok = std::abs(c.ratio / c.expected - 1.0) <= tolerance;
    return c;
}

}  // namespace mtqc
