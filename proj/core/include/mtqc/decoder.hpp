#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mtqc/errors.hpp"

namespace mtqc {

/// A detector compares one check outcome with the previous present outcome
/// of the same check. round == rounds() marks the final transversal layer.
struct Detector {
    int round = 0;
    int stabilizer = 0;
};

enum class EdgeKind : std::uint8_t { Space, Time, SpaceTime, Boundary };

const char* to_string(EdgeKind k);

/// Independent error mechanism touching at most two detectors (b == -1 for
/// a boundary edge). `x_flips`/`z_flips` hold the residual data error it
/// leaves at the final readout.
struct ModelEdge {
    int a = -1;
    int b = -1;
    double probability = 0.0;
    std::int64_t weight = 0;
    bool observable = false;
    EdgeKind kind = EdgeKind::Boundary;
    std::vector<int> x_flips;
    std::vector<int> z_flips;
};

/// Mechanism over the full detector set before graph decomposition; kept for
/// the exhaustive oracle.
struct Mechanism {
    std::vector<int> detectors;
    bool observable = false;
    double probability = 0.0;
    std::vector<int> x_flips;
    std::vector<int> z_flips;
};

/// Detector error model of a compiled memory experiment, obtained by
/// propagating every single fault location of the noise model through the
/// Pauli-frame executor. Only checks of the type read out by the final
/// transversal measurement are decoded.
class DetectorModel {
public:
    DetectorModel(std::vector<CycleProgram> programs, const NoiseParams& noise, int rounds, Basis basis);

    [[nodiscard]] const CodePatch& patch() const { return *programs_.front().patch; }
    [[nodiscard]] std::span<const CycleProgram> programs() const { return programs_; }
    [[nodiscard]] int rounds() const { return rounds_; }
    [[nodiscard]] Basis basis() const { return basis_; }
    [[nodiscard]] const NoiseParams& noise() const { return noise_; }

    [[nodiscard]] int detector_count() const { return static_cast<int>(detectors_.size()); }
    [[nodiscard]] const std::vector<Detector>& detectors() const { return detectors_; }
    /// Detector index of (round, stabilizer), or -1.
    [[nodiscard]] int detector_index(int round, int stabilizer) const;

    [[nodiscard]] const std::vector<ModelEdge>& edges() const { return edges_; }
    [[nodiscard]] const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }

    /// Mechanisms with more than two detectors that had to be split.
    [[nodiscard]] int decomposed_count() const { return decomposed_; }

    /// Fired detectors of a run, in (round, stabilizer) order.
    [[nodiscard]] std::vector<int> fired(const SyndromeHistory& history) const;

    /// Shortest-path data between detectors; index detector_count() is the boundary.
    [[nodiscard]] std::int64_t distance(int from, int to) const;
    [[nodiscard]] int hops(int from, int to) const;

    struct PathEffect {
        std::vector<std::uint8_t> x;
        std::vector<std::uint8_t> z;
        bool observable = false;
    };
    /// XORs the residual errors along the shortest path into `effect`.
    void accumulate_path(int from, int to, PathEffect& effect) const;

private:
    void build_mechanisms();
    void build_edges();
    void build_paths();

    std::vector<CycleProgram> programs_;
    NoiseParams noise_;
    int rounds_ = 0;
    Basis basis_ = Basis::Z;
    std::vector<Detector> detectors_;
    std::vector<int> detector_grid_;
    std::vector<Mechanism> mechanisms_;
    std::vector<ModelEdge> edges_;
    int decomposed_ = 0;
    std::vector<std::int64_t> dist_;
    std::vector<int> hop_;
    std::vector<int> pred_edge_;
};

std::shared_ptr<const DetectorModel> memory_model(int distance, int rounds, const NoiseParams& noise,
                                                  Basis basis = Basis::Z,
                                                  const TimingParams& timing = {});

struct MatchVertex {
    int detector = -1;
    int round = 0;
    int stabilizer = 0;
};

struct MatchEdge {
    int u = 0;
    int v = -1;  // -1: the vertex's boundary partner
    std::int64_t weight = 0;
    int hops = 0;
    EdgeKind kind = EdgeKind::Boundary;
};

/// Decoding graph of one shot: one vertex per detection event, pairwise
/// shortest-path edges (pruned when going through the boundary is no
/// longer) and one boundary edge per vertex.
struct MatchGraph {
    std::shared_ptr<const DetectorModel> model;
    std::vector<MatchVertex> vertices;
    std::vector<MatchEdge> edges;
};

MatchGraph build_graph(const SyndromeHistory& history, std::shared_ptr<const DetectorModel> model);
MatchGraph build_graph(std::span<const int> fired_detectors, std::shared_ptr<const DetectorModel> model);

struct CorrectionSet {
    std::vector<int> x_flips;
    std::vector<int> z_flips;
    bool logical_flip = false;  // predicted flip of the logical readout

    [[nodiscard]] bool empty() const { return x_flips.empty() && z_flips.empty(); }
};

/// Minimum-weight perfect matching on the graph, translated into data flips.
CorrectionSet decode(const MatchGraph& graph);

/// Exact maximum-likelihood logical decision from the joint distribution of
/// (detectors, observable) under the model. Limited to small instances.
class ExactOracle {
public:
    static constexpr int kMaxData = 13;
    static constexpr int kMaxRounds = 3;
    static constexpr int kMaxStateBits = 24;

    explicit ExactOracle(std::shared_ptr<const DetectorModel> model);

    [[nodiscard]] double probability(std::uint64_t syndrome, bool observable) const;
    [[nodiscard]] bool most_likely_flip(std::uint64_t syndrome) const;
    [[nodiscard]] std::uint64_t syndrome_count() const { return std::uint64_t{1} << detectors_; }
    /// Failure rate of the optimal decision over the whole distribution.
    [[nodiscard]] double optimal_failure_rate() const;
    [[nodiscard]] const DetectorModel& model() const { return *model_; }

private:
    std::shared_ptr<const DetectorModel> model_;
    int detectors_ = 0;
    std::vector<double> joint_;
};

/// Most probable logical class for the observed history, with a minimum
/// weight representative correction of that class.
CorrectionSet brute_force_decode(const SyndromeHistory& history, const ExactOracle& oracle);
CorrectionSet brute_force_decode(const SyndromeHistory& history,
                                 std::shared_ptr<const DetectorModel> model);

/// Matcher failure rate over the full weighted syndrome distribution.
double matcher_failure_rate(const ExactOracle& oracle);

/// Syndrome of a correction applied on top of a data frame, restricted to
/// the decoded check type. All zero for a valid correction.
std::vector<std::int8_t> residual_syndrome(const PauliFrame& data_frame, const CorrectionSet& c,
                                           const DetectorModel& model);

struct RateEstimate {
    int distance = 0;
    double p = 0.0;
    int rounds = 0;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Wilson score interval at ~95% (z = 1.96).
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

/// Monte-Carlo logical error rate of a distance-d memory experiment. Trial t
/// always uses RNG stream (seed, t), so the count is independent of `threads`.
RateEstimate logical_error_rate(int distance, int rounds, const NoiseParams& noise, std::uint64_t trials,
                                unsigned threads = 0, Basis basis = Basis::Z);

}  // namespace mtqc
