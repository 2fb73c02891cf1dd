#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sonarblob/classify.hpp"
#include "sonarblob/cluster.hpp"
#include "sonarblob/config.hpp"
#include "sonarblob/evaluate.hpp"
#include "sonarblob/graph.hpp"
#include "sonarblob/signal.hpp"
#include "sonarblob/simulate.hpp"

namespace sonarblob {

/// Seed streams: scenario i of a run uses derive_seed(seed, stream, i),
/// shared by the sweep machinery and the file-based CLI path.
inline constexpr std::uint64_t kTargetScenarioStream = 101;
inline constexpr std::uint64_t kClutterScenarioStream = 102;

/// Everything the detection chain produces for one block of pings.
struct DetectionArtifacts {
    std::vector<EchoPoint> points;
    AffinityGraph graph; // size 0 when fewer than one point
    Clustering clustering;
    std::vector<ClusterReport> reports;
};

/// Full chain: matched filter -> threshold -> spectra -> graph -> model-order
/// clustering -> classification. Blocks with no detections yield empty
/// artifacts; a single detection becomes one singleton cluster.
DetectionArtifacts detect_block(const std::vector<PingRecord>& pings, const RunConfig& config,
                                std::uint64_t seed);

/// Threshold-free per-cluster features of one simulated scenario, enough to
/// score any (eta_c, eta_h) pair afterwards.
struct ClusterFeatures {
    double connectivity = 0.0;
    double median_entropy_bits = 0.0;
    int size = 0;
    int members_in_gate = 0;
};

struct ScenarioFeatures {
    bool target_present = false;
    std::vector<ClusterFeatures> clusters;
    long true_target_points = 0;
};

/// Simulates one scenario under the config (has_target overrides the config
/// flag) and runs the detection chain on it.
ScenarioFeatures scenario_features(std::uint64_t scenario_seed, bool has_target,
                                   const RunConfig& config);

ScenarioOutcome score_features(const ScenarioFeatures& features, double eta_c, double eta_h);

/// Cartesian parameter grid; an empty axis means "use the config value".
struct SweepGrid {
    std::vector<double> scr_db;
    std::vector<double> valid_fraction;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> tau;
    std::vector<double> eta_c;
    std::vector<double> eta_h;
};

/// Runs config.evaluate.n_target_scenarios + n_clutter_scenarios seeded
/// scenarios per simulation cell and scores every threshold pair on the
/// cached features. Scenario seeds depend only on the master seed, so the
/// clutter set is shared across cells. Deterministic row order.
MetricsTable run_sweep(const RunConfig& config, const SweepGrid& grid);

/// Index-parallel helper; results must be written by index. jobs <= 1 runs inline.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

} // namespace sonarblob
