#pragma once

#include <cstdint>
#include <string>

#include "mtqc/cycle.hpp"
#include "mtqc/lattice.hpp"

namespace mtqc {

struct ErrorBudget {
    double p_phys = 1e-3;
    double p_threshold = 1e-2;
    double prefactor = 0.1;             // A in A (p/p_th)^((d+1)/2)
    double target_total_failure = 1e-3;

    void validate() const;
};

/// Free constants of the factoring cost model. The defaults are a
/// calibration to target runtimes and footprints, not derived physics.
struct ResourceModel {
    int logical_overhead = 3;            // logical qubits = 2n + overhead
    double cycle_coefficient = 0.2682209014892578;  // cycles = k n^3 d (p / p_ref)^kappa
    double error_exponent = 0.7;
    double p_reference = 1e-3;
    double tile_coefficient = 0.28228960691937804;  // junctions per tile = c (d + delta)^2
    double tile_padding = 9.0;
    double factory_tiles = 1e6;
    double medium_range_reduction = 100.0;
    int medium_range_min_junctions = 30;
    int ions_per_junction = 2;

    void validate() const;
};

struct FactoringJob {
    int bits = 2048;
    bool medium_range_shuttling = false;
    int shuttle_range = 30;

    void validate() const;
};

struct ResourceReport {
    int bits = 0;
    double p_phys = 0.0;
    int code_distance = 0;
    std::int64_t logical_qubits = 0;
    double factory_tiles = 0.0;
    double cycles = 0.0;
    double total_junctions = 0.0;
    double total_ions = 0.0;
    std::int64_t modules = 0;
    std::int64_t chambers = 0;
    double floor_side_m = 0.0;
    double wall_time_s = 0.0;
    double distillation_fraction = 0.0;

    [[nodiscard]] double wall_time_days() const { return wall_time_s / 86400.0; }
};

/// Smallest odd d >= 3 with A (p/p_th)^((d+1)/2) * logical_qubit_rounds <= target.
int code_distance(const ErrorBudget& budget, double logical_qubit_rounds);

ResourceReport estimate_shor(const FactoringJob& job, const TimingParams& timing = {},
                             const ErrorBudget& budget = {}, const ResourceModel& model = {},
                             const LatticeSpecs& specs = {});

struct DetectionResult {
    double efficiency = 0.0;
    std::string fidelity_class;
};

/// Photon detection efficiency of the on-chip readout chain and the readout
/// fidelity class it supports.
DetectionResult detection_chain(double quantum_efficiency, double transmission, double collection,
                                Duration window = microseconds(25.0), double dark_rate_hz = 1.0);

struct ScalingCheck {
    double ratio = 0.0;
    double expected = 0.0;
    double tolerance = 0.15;
    bool ok = false;
};

/// Runtime ratio of two reports against the cubic-in-n expectation.
ScalingCheck scaling_consistency(const ResourceReport& larger, const ResourceReport& smaller,
                                 double tolerance = 0.15);

}  // namespace mtqc
