#include "mtqc/errors.hpp"

#include <algorithm>

#include "mtqc/error.hpp"

namespace mtqc {
namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr Pauli kOneQubit[3] = {Pauli::X, Pauli::Y, Pauli::Z};

void depolarize1(PauliFrame& f, int q, double p, TrialRng& rng) {
    if (!rng.bernoulli(p)) return;
    f.apply(q, kOneQubit[rng.below(3)]);
}

void depolarize2(PauliFrame& f, int a, int b, double p, TrialRng& rng) {
    if (!rng.bernoulli(p)) return;
    const auto k = 1 + rng.below(15);  // skip I (x) I
    f.apply(a, static_cast<Pauli>(k & 3U));
    f.apply(b, static_cast<Pauli>((k >> 2) & 3U));
}

}  // namespace

const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

NoiseParams NoiseParams::uniform(double p, std::uint64_t seed) {
    NoiseParams n;
    n.p_gate = n.p_memory = n.p_meas = p;
    n.p_loss = 0.0;
    n.seed = seed;
    return n;
}

void NoiseParams::validate() const {
    const std::pair<const char*, double> fields[] = {{"noise.p_gate", p_gate},
                                                     {"noise.p_memory", p_memory},
                                                     {"noise.p_meas", p_meas},
                                                     {"noise.p_loss", p_loss},
                                                     {"noise.p_shuttle", p_shuttle}};
    for (const auto& [name, p] : fields) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(name, "must be a probability in [0, 1]");
    }
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed ^ (trial * 0xd1b54a32d192ed03ULL);
    std::seed_seq seq{splitmix(s), splitmix(s), splitmix(s), splitmix(s)};
    engine_.seed(seq);
}

double TrialRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t TrialRng::below(std::uint64_t n) {
    // Modulo bias is < n / 2^64, irrelevant for n <= 15.
    return engine_() % n;
}

PauliFrame PauliFrame::prefix(int n) const {
    PauliFrame out(n);
    std::copy_n(x_.begin(), n, out.x_.begin());
    std::copy_n(z_.begin(), n, out.z_.begin());
    return out;
}

PauliFrame& PauliFrame::operator^=(const PauliFrame& o) {
    for (std::size_t i = 0; i < x_.size() && i < o.x_.size(); ++i) {
        x_[i] ^= o.x_[i];
        z_[i] ^= o.z_[i];
    }
    return *this;
}

std::size_t SyndromeHistory::event_count() const {
    std::size_t n = 0;
    for (const auto& r : detection_events) n += static_cast<std::size_t>(std::count(r.begin(), r.end(), 1));
    return n;
}

std::vector<std::int8_t> extract_syndrome(const PauliFrame& data_frame, const CodePatch& patch,
                                          std::span<const std::uint8_t> parked) {
    std::vector<std::int8_t> out(static_cast<std::size_t>(patch.stabilizer_count()), 0);
    for (int s = 0; s < patch.stabilizer_count(); ++s) {
        if (!parked.empty() && parked[static_cast<std::size_t>(s)]) {
            out[static_cast<std::size_t>(s)] = kAbsent;
            continue;
        }
        const auto& st = patch.stabilizer(s);
        int parity = 0;
        for (int q : st.data) {
            if (q < 0) continue;
            parity ^= st.type == CheckType::Z ? data_frame.x(q) : data_frame.z(q);
        }
        out[static_cast<std::size_t>(s)] = static_cast<std::int8_t>(parity);
    }
    return out;
}

bool logical_flip(const PauliFrame& data_frame, const CodePatch& patch, Basis basis) {
    bool flip = false;
    if (basis == Basis::Z) {
        for (int q : patch.logical_z()) flip ^= data_frame.x(q);
    } else {
        for (int q : patch.logical_x()) flip ^= data_frame.z(q);
    }
    return flip;
}

PauliFrame stabilizer_frame(const CodePatch& patch, int stabilizer) {
    PauliFrame f(patch.data_count());
    const auto& st = patch.stabilizer(stabilizer);
    for (int q : st.data) {
        if (q >= 0) f.apply(q, st.type == CheckType::X ? Pauli::X : Pauli::Z);
    }
    return f;
}

RunResult run_rounds(std::span<const CycleProgram> programs, const NoiseParams& noise, int n_rounds,
                     Basis basis, std::uint64_t trial, const Injection& injected) {
    if (programs.empty()) throw ConfigError("program", "at least one program is required");
    if (n_rounds < 1) throw ConfigError("rounds", "must be >= 1");
    noise.validate();
    const CodePatch& patch = *programs.front().patch;
    const int nd = patch.data_count();
    const int ns = patch.stabilizer_count();

    TrialRng rng(noise.seed, trial);
    PauliFrame frame(patch.qubit_count());
    RunResult result;
    auto& hist = result.history;

    auto inject_at = [&](int round, int slot) {
        for (const auto& f : injected.faults) {
            if (f.round == round && f.slot == slot) frame.apply(f.qubit, f.pauli);
        }
    };

    std::vector<std::int8_t> previous(static_cast<std::size_t>(ns), 0);
    for (int r = 0; r < n_rounds; ++r) {
        const auto& prog = programs[static_cast<std::size_t>(std::min<int>(r, static_cast<int>(programs.size()) - 1))];
        inject_at(r, -1);
        for (int q = 0; q < nd; ++q) depolarize1(frame, q, noise.p_memory, rng);
        if (noise.p_loss > 0.0) {
            for (int q = 0; q < patch.qubit_count(); ++q) {
                if (rng.bernoulli(noise.p_loss)) result.losses.push_back({r, q, q >= nd});
            }
        }

        std::vector<std::int8_t> outcome(static_cast<std::size_t>(ns), kAbsent);
        for (std::size_t t = 0; t < prog.slots.size(); ++t) {
            for (const auto& a : prog.slots[t].actions) {
                const int m = patch.measure_qubit(a.ion);
                switch (a.kind) {
                    case ActionKind::Idle:
                        break;
                    case ActionKind::Shuttle:
                        if (noise.p_shuttle > 0.0 && rng.bernoulli(noise.p_shuttle)) frame.apply(m, Pauli::Z);
                        break;
                    case ActionKind::Hadamard:
                        frame.hadamard(m);
                        depolarize1(frame, m, noise.p_gate, rng);
                        break;
                    case ActionKind::Cnot:
                        if (patch.stabilizer(a.ion).type == CheckType::Z) {
                            frame.cnot(a.data, m);
                        } else {
                            frame.cnot(m, a.data);
                        }
                        depolarize2(frame, a.data, m, noise.p_gate, rng);
                        break;
                    case ActionKind::Measure: {
                        bool bit = frame.x(m);
                        if (rng.bernoulli(noise.p_meas)) bit = !bit;
                        for (const auto& fl : injected.flips) {
                            if (fl.round == r && fl.stabilizer == a.ion) bit = !bit;
                        }
                        outcome[static_cast<std::size_t>(a.ion)] = static_cast<std::int8_t>(bit);
                        frame.reset(m);
                        break;
                    }
                }
            }
            inject_at(r, static_cast<int>(t));
        }

        std::vector<std::uint8_t> events(static_cast<std::size_t>(ns), 0);
        for (int s = 0; s < ns; ++s) {
            const auto v = outcome[static_cast<std::size_t>(s)];
            if (v == kAbsent) continue;
            events[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(v ^ previous[static_cast<std::size_t>(s)]);
            previous[static_cast<std::size_t>(s)] = v;
        }
        hist.rounds.push_back(std::move(outcome));
        hist.detection_events.push_back(std::move(events));
    }

    // Transversal data readout; a readout flip is indistinguishable from a
    // data error just before it, so it is folded into the frame.
    inject_at(n_rounds, -1);
    const Pauli readout_error = basis == Basis::Z ? Pauli::X : Pauli::Z;
    for (int q = 0; q < nd; ++q) {
        if (rng.bernoulli(noise.p_meas)) frame.apply(q, readout_error);
    }
    result.final_frame = frame.prefix(nd);
    hist.final_layer = extract_syndrome(result.final_frame, patch);
    const CheckType measured = basis == Basis::Z ? CheckType::Z : CheckType::X;
    for (int s = 0; s < ns; ++s) {
        if (patch.stabilizer(s).type != measured) hist.final_layer[static_cast<std::size_t>(s)] = kAbsent;
    }
    result.observable_flip = logical_flip(result.final_frame, patch, basis);
    return result;
}

RunResult run_rounds(const CycleProgram& program, const NoiseParams& noise, int n_rounds, Basis basis,
                     std::uint64_t trial, const Injection& injected) {
    return run_rounds(std::span<const CycleProgram>(&program, 1), noise, n_rounds, basis, trial, injected);
}

}  // namespace mtqc
