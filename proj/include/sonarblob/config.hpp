#pragma once

#include <cstdint>
#include <string>

#include "sonarblob/graph.hpp"
#include "sonarblob/signal.hpp"
#include "sonarblob/simulate.hpp"

namespace sonarblob {

/// Detection-chain knobs.
struct DetectParams {
    double eta_mf = 5e-6;  // matched-filter threshold
    double merge_radius_m = 0.6; // one reflector yields one point within this range
    int spectrum_bins = 100;
    int k_max = 10;        // model-order search cap (clamped to N at run time)
    double epsilon = 1.0;  // cluster-count penalty
};

/// Classification thresholds.
struct ClassifyParams {
    double eta_c = 5.0; // connectivity; no canonical operating value, calibrate offline
    double eta_h = 4.5; // median-entropy, bits
};

/// Scenario-level evaluation knobs.
struct EvaluateParams {
    double truth_gate_m = 0.5; // |r - path(p)| below this is a true target point
    int n_target_scenarios = 300;
    int n_clutter_scenarios = 1000;
};

/// Everything a run needs; JSON round-trippable.
struct RunConfig {
    ChirpSpec chirp;
    AffinityParams affinity;
    ScenarioParams scenario;
    ClutterParams clutter;
    DetectParams detect;
    ClassifyParams classify;
    EvaluateParams evaluate;
    std::uint64_t seed = 1;
    int jobs = 0; // 0 = hardware concurrency
};

RunConfig load_config(const std::string& path);      // throws IoError / ParameterError
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& config); // fully resolved, stable key order

} // namespace sonarblob
