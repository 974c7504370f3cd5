#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mtqc/cycle.hpp"

namespace mtqc {

/// Single-qubit Pauli with bit 0 = X component and bit 1 = Z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

enum class Basis : std::uint8_t { Z, X };

const char* to_string(Basis b);

struct NoiseParams {
    double p_gate = 1e-3;
    double p_memory = 1e-3;
    double p_meas = 1e-3;
    double p_loss = 1e-6;      // per ion per cycle; placeholder, not a measured rate
    double p_shuttle = 0.0;    // extra dephasing per shuttle; folded into p_memory by default
    std::uint64_t seed = 0;

    static NoiseParams uniform(double p, std::uint64_t seed = 0);
    void validate() const;
};

/// Independent stream per (seed, trial) so parallel trials never share state.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    double uniform();
    bool bernoulli(double p) { return p > 0.0 && uniform() < p; }
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// Accumulated Pauli errors, one entry per qubit (data first, then measure).
class PauliFrame {
public:
    PauliFrame() = default;
    explicit PauliFrame(int qubits)
        : x_(static_cast<std::size_t>(qubits), 0), z_(static_cast<std::size_t>(qubits), 0) {}

    [[nodiscard]] int size() const { return static_cast<int>(x_.size()); }
    [[nodiscard]] bool x(int q) const { return x_[static_cast<std::size_t>(q)] != 0; }
    [[nodiscard]] bool z(int q) const { return z_[static_cast<std::size_t>(q)] != 0; }

    void apply(int q, Pauli p) {
        x_[static_cast<std::size_t>(q)] ^= static_cast<std::uint8_t>(static_cast<unsigned>(p) & 1U);
        z_[static_cast<std::size_t>(q)] ^= static_cast<std::uint8_t>((static_cast<unsigned>(p) >> 1) & 1U);
    }
    void hadamard(int q) { std::swap(x_[static_cast<std::size_t>(q)], z_[static_cast<std::size_t>(q)]); }
    void cnot(int control, int target) {
        x_[static_cast<std::size_t>(target)] ^= x_[static_cast<std::size_t>(control)];
        z_[static_cast<std::size_t>(control)] ^= z_[static_cast<std::size_t>(target)];
    }
    void reset(int q) { x_[static_cast<std::size_t>(q)] = 0; z_[static_cast<std::size_t>(q)] = 0; }

    /// Keeps only the first `n` qubits.
    [[nodiscard]] PauliFrame prefix(int n) const;
    PauliFrame& operator^=(const PauliFrame& o);
    friend bool operator==(const PauliFrame&, const PauliFrame&) = default;

private:
    std::vector<std::uint8_t> x_;
    std::vector<std::uint8_t> z_;
};

inline constexpr std::int8_t kAbsent = -1;

/// Per-round stabilizer outcomes (kAbsent for parked sites) and their
/// round-to-round differences. Outcomes are relative to the noiseless
/// reference, so a quiet round is all zeros.
struct SyndromeHistory {
    std::vector<std::vector<std::int8_t>> rounds;
    std::vector<std::vector<std::uint8_t>> detection_events;

    /// Check-type parities recomputed from the final transversal data readout
    /// (kAbsent for checks of the other type).
    std::vector<std::int8_t> final_layer;

    [[nodiscard]] int round_count() const { return static_cast<int>(rounds.size()); }
    [[nodiscard]] std::size_t event_count() const;
};

/// Deterministic fault: Pauli `pauli` on qubit `qubit` applied after timeslot
/// `slot` of round `round` (slot -1: at the start of the round, before the
/// memory noise). round == n_rounds targets the final data readout.
struct Fault {
    int round = 0;
    int slot = -1;
    int qubit = 0;
    Pauli pauli = Pauli::X;
};

struct MeasurementFlip {
    int round = 0;
    int stabilizer = 0;
};

struct Injection {
    std::vector<Fault> faults;
    std::vector<MeasurementFlip> flips;
};

struct LossEvent {
    int round = 0;
    int qubit = 0;
    bool measure_ion = false;
};

struct RunResult {
    SyndromeHistory history;
    PauliFrame final_frame;   // data qubits only
    bool observable_flip = false;  // logical readout flipped by the physical errors
    std::vector<LossEvent> losses;
};

/// Executes `n_rounds` of the compiled program under stochastic noise plus
/// any injected faults and returns the syndrome record. A single-program
/// span repeats that program every round; longer spans give round r the
/// program at min(r, size-1).
RunResult run_rounds(std::span<const CycleProgram> programs, const NoiseParams& noise, int n_rounds,
                     Basis basis, std::uint64_t trial = 0, const Injection& injected = {});

RunResult run_rounds(const CycleProgram& program, const NoiseParams& noise, int n_rounds,
                     Basis basis, std::uint64_t trial = 0, const Injection& injected = {});

/// Syndrome of a data frame: Z checks see X components and vice versa.
/// Parked checks report kAbsent.
std::vector<std::int8_t> extract_syndrome(const PauliFrame& data_frame, const CodePatch& patch,
                                          std::span<const std::uint8_t> parked = {});

/// Parity of the logical-Z (basis Z) or logical-X (basis X) readout flipped
/// by `data_frame`.
bool logical_flip(const PauliFrame& data_frame, const CodePatch& patch, Basis basis);

/// Product of a stabilizer's own Paulis as a frame over the data qubits.
PauliFrame stabilizer_frame(const CodePatch& patch, int stabilizer);

}  // namespace mtqc
