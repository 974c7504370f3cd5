#include "mtqc/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <thread>

#include "mtqc/error.hpp"
#include "mtqc/matching.hpp"

namespace mtqc {
namespace {

constexpr double kWeightScale = 1.0e4;
constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

CheckType decoded_type(Basis b) { return b == Basis::Z ? CheckType::Z : CheckType::X; }

double combine(double p1, double p2) { return p1 * (1.0 - p2) + p2 * (1.0 - p1); }

std::int64_t weight_of(double p) {
    if (p >= 1.0) return 0;
    return std::max<std::int64_t>(0, std::llround(-std::log(p) * kWeightScale));
}

std::vector<int> set_bits(const PauliFrame& f, bool x_part) {
    std::vector<int> out;
    for (int q = 0; q < f.size(); ++q) {
        if (x_part ? f.x(q) : f.z(q)) out.push_back(q);
    }
    return out;
}

struct FaultLocation {
    Injection injection;
    double probability = 0.0;
};

std::vector<FaultLocation> enumerate_faults(std::span<const CycleProgram> programs, const NoiseParams& noise,
                                            int rounds, Basis basis) {
    std::vector<FaultLocation> out;
    const CodePatch& patch = *programs.front().patch;
    const int nd = patch.data_count();
    constexpr Pauli kPaulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int r = 0; r < rounds; ++r) {
        const auto& prog = programs[static_cast<std::size_t>(std::min<int>(r, static_cast<int>(programs.size()) - 1))];
        if (noise.p_memory > 0.0) {
            for (int q = 0; q < nd; ++q) {
                for (Pauli p : kPaulis) out.push_back({{{{r, -1, q, p}}, {}}, noise.p_memory / 3.0});
            }
        }
        for (std::size_t t = 0; t < prog.slots.size(); ++t) {
            const int slot = static_cast<int>(t);
            for (const auto& a : prog.slots[t].actions) {
                const int m = a.ion >= 0 ? patch.measure_qubit(a.ion) : -1;
                switch (a.kind) {
                    case ActionKind::Idle:
                        break;
                    case ActionKind::Shuttle:
                        if (noise.p_shuttle > 0.0) out.push_back({{{{r, slot, m, Pauli::Z}}, {}}, noise.p_shuttle});
                        break;
                    case ActionKind::Hadamard:
                        if (noise.p_gate > 0.0) {
                            for (Pauli p : kPaulis) out.push_back({{{{r, slot, m, p}}, {}}, noise.p_gate / 3.0});
                        }
                        break;
                    case ActionKind::Cnot:
                        if (noise.p_gate > 0.0) {
                            for (unsigned k = 1; k < 16; ++k) {
                                FaultLocation f;
                                f.probability = noise.p_gate / 15.0;
                                if (k & 3U) f.injection.faults.push_back({r, slot, a.data, static_cast<Pauli>(k & 3U)});
                                if ((k >> 2) & 3U) f.injection.faults.push_back({r, slot, m, static_cast<Pauli>((k >> 2) & 3U)});
                                out.push_back(std::move(f));
                            }
                        }
                        break;
                    case ActionKind::Measure:
                        if (noise.p_meas > 0.0) out.push_back({{{}, {{r, a.ion}}}, noise.p_meas});
                        break;
                }
            }
        }
    }
    if (noise.p_meas > 0.0) {
        const Pauli readout_error = basis == Basis::Z ? Pauli::X : Pauli::Z;
        for (int q = 0; q < nd; ++q) out.push_back({{{{rounds, -1, q, readout_error}}, {}}, noise.p_meas});
    }
    return out;
}

}  // namespace

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Space: return "space";
        case EdgeKind::Time: return "time";
        case EdgeKind::SpaceTime: return "spacetime";
        case EdgeKind::Boundary: return "boundary";
    }
    return "?";
}

DetectorModel::DetectorModel(std::vector<CycleProgram> programs, const NoiseParams& noise, int rounds,
                             Basis basis)
    : programs_(std::move(programs)), noise_(noise), rounds_(rounds), basis_(basis) {
    if (programs_.empty()) throw ConfigError("program", "at least one program is required");
    if (rounds_ < 1) throw ConfigError("rounds", "must be >= 1");
    noise_.validate();

    const CodePatch& p = patch();
    const int ns = p.stabilizer_count();
    const CheckType type = decoded_type(basis_);
    detector_grid_.assign(static_cast<std::size_t>((rounds_ + 1) * ns), -1);
    for (int r = 0; r <= rounds_; ++r) {
        const auto& prog = programs_[static_cast<std::size_t>(std::min<int>(r, static_cast<int>(programs_.size()) - 1))];
        for (int s = 0; s < ns; ++s) {
            if (p.stabilizer(s).type != type) continue;
            if (r < rounds_ && prog.is_parked(s)) continue;
            detector_grid_[static_cast<std::size_t>(r * ns + s)] = static_cast<int>(detectors_.size());
            detectors_.push_back({r, s});
        }
    }
    build_mechanisms();
    build_edges();
    build_paths();
}

int DetectorModel::detector_index(int round, int stabilizer) const {
    const int ns = patch().stabilizer_count();
    if (round < 0 || round > rounds_ || stabilizer < 0 || stabilizer >= ns) return -1;
    return detector_grid_[static_cast<std::size_t>(round * ns + stabilizer)];
}

std::vector<int> DetectorModel::fired(const SyndromeHistory& history) const {
    std::vector<int> out;
    const int ns = patch().stabilizer_count();
    const int nr = std::min(rounds_, history.round_count());
    for (int r = 0; r < nr; ++r) {
        for (int s = 0; s < ns; ++s) {
            const int d = detector_index(r, s);
            if (d < 0) continue;
            if (history.rounds[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] == kAbsent) continue;
            if (history.detection_events[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]) out.push_back(d);
        }
    }
    if (history.final_layer.empty()) return out;
    for (int s = 0; s < ns; ++s) {
        const int d = detector_index(rounds_, s);
        if (d < 0) continue;
        std::int8_t last = 0;
        for (int r = nr - 1; r >= 0; --r) {
            const auto v = history.rounds[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
            if (v != kAbsent) {
                last = v;
                break;
            }
        }
        const auto fin = history.final_layer[static_cast<std::size_t>(s)];
        if (fin != kAbsent && (fin ^ last)) out.push_back(d);
    }
    return out;
}

void DetectorModel::build_mechanisms() {
    NoiseParams silent = NoiseParams::uniform(0.0, 0);
    std::map<std::pair<std::vector<int>, bool>, std::size_t> index;
    for (const auto& loc : enumerate_faults(programs_, noise_, rounds_, basis_)) {
        const RunResult run = run_rounds(programs_, silent, rounds_, basis_, 0, loc.injection);
        auto dets = fired(run.history);
        if (dets.empty() && !run.observable_flip) continue;
        auto key = std::make_pair(dets, run.observable_flip);
        auto it = index.find(key);
        if (it != index.end()) {
            auto& m = mechanisms_[it->second];
            m.probability = combine(m.probability, loc.probability);
            continue;
        }
        index.emplace(std::move(key), mechanisms_.size());
        mechanisms_.push_back({std::move(dets), run.observable_flip, loc.probability,
                               set_bits(run.final_frame, true), set_bits(run.final_frame, false)});
    }
}

void DetectorModel::build_edges() {
    std::map<std::pair<int, int>, std::size_t> index;
    auto kind_of = [this](int a, int b) {
        if (b < 0) return EdgeKind::Boundary;
        const auto& da = detectors_[static_cast<std::size_t>(a)];
        const auto& db = detectors_[static_cast<std::size_t>(b)];
        if (da.stabilizer == db.stabilizer) return EdgeKind::Time;
        if (da.round == db.round) return EdgeKind::Space;
        return EdgeKind::SpaceTime;
    };
    auto add = [&](int a, int b, double p, bool obs, const std::vector<int>& xf, const std::vector<int>& zf) {
        if (b >= 0 && b < a) std::swap(a, b);
        auto it = index.find({a, b});
        if (it == index.end()) {
            index.emplace(std::make_pair(a, b), edges_.size());
            edges_.push_back({a, b, p, 0, obs, kind_of(a, b), xf, zf});
            return;
        }
        auto& e = edges_[it->second];
        if (e.observable == obs) {
            e.probability = combine(e.probability, p);
        } else if (p > e.probability) {
            // Conflicting observable parity: keep the likelier explanation.
            e = {a, b, p, 0, obs, e.kind, xf, zf};
        }
    };

    std::vector<const Mechanism*> hyper;
    for (const auto& m : mechanisms_) {
        if (m.detectors.empty()) continue;
        if (m.detectors.size() == 1) add(m.detectors[0], -1, m.probability, m.observable, m.x_flips, m.z_flips);
        else if (m.detectors.size() == 2) add(m.detectors[0], m.detectors[1], m.probability, m.observable, m.x_flips, m.z_flips);
        else hyper.push_back(&m);
    }
    // Split larger mechanisms into existing graph edges where possible,
    // otherwise into consecutive pairs carrying the residual on the first.
    for (const Mechanism* m : hyper) {
        ++decomposed_;
        std::vector<int> rest = m->detectors;
        std::vector<std::pair<int, int>> pieces;
        while (!rest.empty()) {
            const int a = rest.front();
            bool found = false;
            for (std::size_t j = 1; j < rest.size() && !found; ++j) {
                const int b = rest[j];
                if (index.count({std::min(a, b), std::max(a, b)})) {
                    pieces.emplace_back(a, b);
                    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
                    found = true;
                }
            }
            if (!found && index.count({a, -1})) {
                pieces.emplace_back(a, -1);
                found = true;
            }
            if (!found) {
                pieces.emplace_back(a, rest.size() > 1 ? rest[1] : -1);
                if (rest.size() > 1) rest.erase(rest.begin() + 1);
            }
            rest.erase(rest.begin());
        }
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            auto [a, b] = pieces[i];
            const auto key = std::make_pair(b >= 0 ? std::min(a, b) : a, b >= 0 ? std::max(a, b) : -1);
            auto it = index.find(key);
            if (it != index.end()) {
                auto& e = edges_[it->second];
                e.probability = combine(e.probability, m->probability);
            } else if (i == 0) {
                add(a, b, m->probability, m->observable, m->x_flips, m->z_flips);
            } else {
                add(a, b, m->probability, false, {}, {});
            }
        }
    }
    for (auto& e : edges_) e.weight = weight_of(e.probability);
}

void DetectorModel::build_paths() {
    const int n = detector_count() + 1;
    const int boundary = n - 1;
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));  // (neighbour, edge)
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        const int b = ed.b < 0 ? boundary : ed.b;
        adj[static_cast<std::size_t>(ed.a)].emplace_back(b, e);
        adj[static_cast<std::size_t>(b)].emplace_back(ed.a, e);
    }
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    dist_.assign(nn, kUnreachable);
    hop_.assign(nn, -1);
    pred_edge_.assign(nn, -1);
    using Item = std::pair<std::int64_t, int>;
    for (int src = 0; src < n; ++src) {
        const auto row = static_cast<std::size_t>(src) * static_cast<std::size_t>(n);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist_[row + static_cast<std::size_t>(src)] = 0;
        hop_[row + static_cast<std::size_t>(src)] = 0;
        pq.emplace(0, src);
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d != dist_[row + static_cast<std::size_t>(u)]) continue;
            // Paths may end at the boundary but never pass through it.
            if (u == boundary && u != src) continue;
            for (const auto& [v, e] : adj[static_cast<std::size_t>(u)]) {
                const std::int64_t nd = d + edges_[static_cast<std::size_t>(e)].weight;
                auto& dv = dist_[row + static_cast<std::size_t>(v)];
                if (nd < dv) {
                    dv = nd;
                    pred_edge_[row + static_cast<std::size_t>(v)] = e;
                    hop_[row + static_cast<std::size_t>(v)] = hop_[row + static_cast<std::size_t>(u)] + 1;
                    pq.emplace(nd, v);
                }
            }
        }
    }
}

std::int64_t DetectorModel::distance(int from, int to) const {
    const auto n = static_cast<std::size_t>(detector_count() + 1);
    return dist_[static_cast<std::size_t>(from) * n + static_cast<std::size_t>(to)];
}

int DetectorModel::hops(int from, int to) const {
    const auto n = static_cast<std::size_t>(detector_count() + 1);
    return hop_[static_cast<std::size_t>(from) * n + static_cast<std::size_t>(to)];
}

void DetectorModel::accumulate_path(int from, int to, PathEffect& effect) const {
    const auto n = static_cast<std::size_t>(detector_count() + 1);
    const int boundary = detector_count();
    if (effect.x.empty()) {
        effect.x.assign(static_cast<std::size_t>(patch().data_count()), 0);
        effect.z.assign(static_cast<std::size_t>(patch().data_count()), 0);
    }
    if (distance(from, to) >= kUnreachable) throw std::logic_error("detector graph is disconnected");
    int v = to;
    while (v != from) {
        const int e = pred_edge_[static_cast<std::size_t>(from) * n + static_cast<std::size_t>(v)];
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        for (int q : ed.x_flips) effect.x[static_cast<std::size_t>(q)] ^= 1;
        for (int q : ed.z_flips) effect.z[static_cast<std::size_t>(q)] ^= 1;
        effect.observable ^= ed.observable;
        const int b = ed.b < 0 ? boundary : ed.b;
        v = (v == ed.a) ? b : ed.a;
    }
}

std::shared_ptr<const DetectorModel> memory_model(int distance, int rounds, const NoiseParams& noise, Basis basis,
                                                  const TimingParams& timing) {
    LatticeSpecs specs;
    const Layout layout = build_layout(specs.junctions_per_module(), specs);
    auto patch = std::make_shared<const CodePatch>(CodePatch::rotated(layout, distance));
    std::vector<CycleProgram> programs{compile_cycle(patch, {}, timing)};
    return std::make_shared<const DetectorModel>(std::move(programs), noise, rounds, basis);
}

MatchGraph build_graph(std::span<const int> fired_detectors, std::shared_ptr<const DetectorModel> model) {
    MatchGraph g;
    const int boundary = model->detector_count();
    for (int d : fired_detectors) {
        const auto& det = model->detectors()[static_cast<std::size_t>(d)];
        g.vertices.push_back({d, det.round, det.stabilizer});
    }
    const int k = static_cast<int>(g.vertices.size());
    for (int i = 0; i < k; ++i) {
        const int di = g.vertices[static_cast<std::size_t>(i)].detector;
        const std::int64_t bi = model->distance(di, boundary);
        for (int j = i + 1; j < k; ++j) {
            const int dj = g.vertices[static_cast<std::size_t>(j)].detector;
            const std::int64_t w = model->distance(di, dj);
            if (w >= kUnreachable || w >= bi + model->distance(dj, boundary)) continue;
            const auto& vi = g.vertices[static_cast<std::size_t>(i)];
            const auto& vj = g.vertices[static_cast<std::size_t>(j)];
            EdgeKind kind = EdgeKind::SpaceTime;
            if (vi.stabilizer == vj.stabilizer) kind = EdgeKind::Time;
            else if (vi.round == vj.round) kind = EdgeKind::Space;
            g.edges.push_back({i, j, w, model->hops(di, dj), kind});
        }
        g.edges.push_back({i, -1, bi, model->hops(di, boundary), EdgeKind::Boundary});
    }
    g.model = std::move(model);
    return g;
}

MatchGraph build_graph(const SyndromeHistory& history, std::shared_ptr<const DetectorModel> model) {
    const auto fired = model->fired(history);
    return build_graph(fired, std::move(model));
}

CorrectionSet decode(const MatchGraph& graph) {
    CorrectionSet out;
    const int k = static_cast<int>(graph.vertices.size());
    if (k == 0) return out;
    const DetectorModel& model = *graph.model;
    const int boundary = model.detector_count();

    std::vector<WeightedEdge> edges;
    edges.reserve(graph.edges.size() + static_cast<std::size_t>(k * (k - 1) / 2));
    for (const auto& e : graph.edges) {
        edges.push_back({e.u, e.v < 0 ? k + e.u : e.v, e.weight});
    }
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) edges.push_back({k + i, k + j, 0});
    }
    const auto mate = min_weight_perfect_matching(2 * k, edges);

    DetectorModel::PathEffect effect;
    for (int i = 0; i < k; ++i) {
        const int m = mate[static_cast<std::size_t>(i)];
        const int di = graph.vertices[static_cast<std::size_t>(i)].detector;
        if (m >= k) {
            model.accumulate_path(di, boundary, effect);
        } else if (m > i) {
            model.accumulate_path(di, graph.vertices[static_cast<std::size_t>(m)].detector, effect);
        }
    }
    for (int q = 0; q < static_cast<int>(effect.x.size()); ++q) {
        if (effect.x[static_cast<std::size_t>(q)]) out.x_flips.push_back(q);
        if (effect.z[static_cast<std::size_t>(q)]) out.z_flips.push_back(q);
    }
    out.logical_flip = effect.observable;
    return out;
}

ExactOracle::ExactOracle(std::shared_ptr<const DetectorModel> model) : model_(std::move(model)) {
    if (model_->patch().data_count() > kMaxData) {
        throw TractabilityError("exhaustive decoding limited to " + std::to_string(kMaxData) + " data qubits");
    }
    if (model_->rounds() > kMaxRounds) {
        throw TractabilityError("exhaustive decoding limited to " + std::to_string(kMaxRounds) + " rounds");
    }
    detectors_ = model_->detector_count();
    if (detectors_ + 1 > kMaxStateBits) {
        throw TractabilityError("exhaustive decoding state exceeds " + std::to_string(kMaxStateBits) + " bits");
    }
    joint_.assign(std::size_t{1} << (detectors_ + 1), 0.0);
    joint_[0] = 1.0;
    for (const auto& m : model_->mechanisms()) {
        std::uint64_t mask = m.observable ? (std::uint64_t{1} << detectors_) : 0;
        for (int d : m.detectors) mask ^= std::uint64_t{1} << d;
        if (mask == 0) continue;
        const double p = m.probability;
        for (std::uint64_t s = 0; s < joint_.size(); ++s) {
            const std::uint64_t t = s ^ mask;
            if (t < s) continue;
            const double a = joint_[s];
            const double b = joint_[t];
            joint_[s] = a * (1.0 - p) + b * p;
            joint_[t] = b * (1.0 - p) + a * p;
        }
    }
}

double ExactOracle::probability(std::uint64_t syndrome, bool observable) const {
    const std::uint64_t idx = syndrome | (observable ? (std::uint64_t{1} << detectors_) : 0);
    return joint_[idx];
}

bool ExactOracle::most_likely_flip(std::uint64_t syndrome) const {
    return probability(syndrome, true) > probability(syndrome, false);
}

double ExactOracle::optimal_failure_rate() const {
    double total = 0.0;
    for (std::uint64_t s = 0; s < syndrome_count(); ++s) total += std::min(probability(s, false), probability(s, true));
    return total;
}

CorrectionSet brute_force_decode(const SyndromeHistory& history, const ExactOracle& oracle) {
    const DetectorModel& model = oracle.model();
    std::uint64_t syndrome = 0;
    for (int d : model.fired(history)) syndrome |= std::uint64_t{1} << d;
    CorrectionSet out;
    out.logical_flip = oracle.most_likely_flip(syndrome);

    const CodePatch& patch = model.patch();
    const int nd = patch.data_count();
    const CheckType type = decoded_type(model.basis());
    const bool use_x = model.basis() == Basis::Z;
    std::uint64_t best = 0;
    int best_weight = nd + 1;
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << nd); ++pattern) {
        const int w = std::popcount(pattern);
        if (w >= best_weight) continue;
        PauliFrame f(nd);
        for (int q = 0; q < nd; ++q) {
            if ((pattern >> q) & 1U) f.apply(q, use_x ? Pauli::X : Pauli::Z);
        }
        if (logical_flip(f, patch, model.basis()) != out.logical_flip) continue;
        const auto syn = extract_syndrome(f, patch);
        bool match = true;
        for (int s = 0; s < patch.stabilizer_count() && match; ++s) {
            if (patch.stabilizer(s).type != type) continue;
            const auto want = s < static_cast<int>(history.final_layer.size()) ? history.final_layer[static_cast<std::size_t>(s)] : 0;
            match = syn[static_cast<std::size_t>(s)] == std::max<std::int8_t>(want, 0);
        }
        if (!match) continue;
        best = pattern;
        best_weight = w;
    }
    for (int q = 0; q < nd && best_weight <= nd; ++q) {
        if ((best >> q) & 1U) (use_x ? out.x_flips : out.z_flips).push_back(q);
    }
    return out;
}

CorrectionSet brute_force_decode(const SyndromeHistory& history, std::shared_ptr<const DetectorModel> model) {
    const ExactOracle oracle(std::move(model));
    return brute_force_decode(history, oracle);
}

double matcher_failure_rate(const ExactOracle& oracle) {
    const DetectorModel& model = oracle.model();
    // Non-owning alias; the oracle outlives every graph built here.
    std::shared_ptr<const DetectorModel> alias(std::shared_ptr<const DetectorModel>{}, &model);
    double total = 0.0;
    std::vector<int> fired;
    for (std::uint64_t s = 0; s < oracle.syndrome_count(); ++s) {
        const double p0 = oracle.probability(s, false);
        const double p1 = oracle.probability(s, true);
        if (p0 + p1 <= 0.0) continue;
        fired.clear();
        for (int d = 0; d < model.detector_count(); ++d) {
            if ((s >> d) & 1U) fired.push_back(d);
        }
        const bool flip = decode(build_graph(fired, alias)).logical_flip;
        total += flip ? p0 : p1;
    }
    return total;
}

std::vector<std::int8_t> residual_syndrome(const PauliFrame& data_frame, const CorrectionSet& c,
                                           const DetectorModel& model) {
    PauliFrame f = data_frame;
    for (int q : c.x_flips) f.apply(q, Pauli::X);
    for (int q : c.z_flips) f.apply(q, Pauli::Z);
    auto syn = extract_syndrome(f, model.patch());
    const CheckType type = decoded_type(model.basis());
    for (int s = 0; s < model.patch().stabilizer_count(); ++s) {
        if (model.patch().stabilizer(s).type != type) syn[static_cast<std::size_t>(s)] = kAbsent;
    }
    return syn;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (ph + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

RateEstimate logical_error_rate(int distance, int rounds, const NoiseParams& noise, std::uint64_t trials,
                                unsigned threads, Basis basis) {
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    NoiseParams sim = noise;
    sim.p_loss = 0.0;
    const auto model = memory_model(distance, rounds, sim, basis);

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::uint64_t> failures(threads, 0);
    auto worker = [&](unsigned w) {
        for (std::uint64_t t = w; t < trials; t += threads) {
            const RunResult run = run_rounds(model->programs(), sim, rounds, basis, t);
            const auto fired = model->fired(run.history);
            const bool predicted = fired.empty() ? false : decode(build_graph(fired, model)).logical_flip;
            if (predicted != run.observable_flip) ++failures[w];
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    RateEstimate est;
    est.distance = distance;
    est.p = noise.p_gate;
    est.rounds = rounds;
    est.trials = trials;
    for (auto f : failures) est.failures += f;
    est.rate = static_cast<double>(est.failures) / static_cast<double>(trials);
    std::tie(est.ci_low, est.ci_high) = wilson_interval(est.failures, trials);
    return est;
}

}  // namespace mtqc
