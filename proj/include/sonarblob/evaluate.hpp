#pragma once

#include <string>
#include <vector>

#include "sonarblob/classify.hpp"
#include "sonarblob/signal.hpp"

namespace sonarblob {

/// Simulated target path plus the range gate that defines a true point.
struct GroundTruth {
    std::vector<double> path_m; // per-ping, index 0 = ping 1
    double gate_m = 0.5;
};

/// target iff |r - path(p)| < gate (strict).
bool point_is_target(const EchoPoint& point, const GroundTruth& truth);

/// Per-scenario detection events plus pooled point-level counts.
/// A target-present scenario can raise both a true detection and a false
/// alarm when one credited and one spurious cluster coexist.
struct ScenarioOutcome {
    bool target_present = false;
    bool true_detection = false;
    bool false_alarm = false;
    bool miss = false;
    bool correct_rejection = false;
    long n_tp = 0;
    long n_fp = 0;
    long n_fn = 0;
};

/// Scores one block: a target-labeled cluster is credited to the target when
/// the majority of its members pass the ground-truth gate (ties count as
/// true). Pass truth = nullptr for a clutter-only scenario.
ScenarioOutcome score_scenario(const std::vector<ClusterReport>& reports,
                               const std::vector<EchoPoint>& points,
                               const GroundTruth* truth);

/// One row of the metrics table. Rates with zero denominators are NaN.
struct MetricsRow {
    double alpha = 0.0, beta = 0.0, tau = 0.0;
    double eta_c = 0.0, eta_h = 0.0;
    double scr_db = 0.0, valid_fraction = 1.0;
    double p_d = 0.0, p_fa = 0.0, precision = 0.0, recall = 0.0;
    long n_tp = 0, n_fp = 0, n_fn = 0;
    int n_target_scenarios = 0, n_clutter_scenarios = 0;
};

/// P_D over target scenarios, P_FA over clutter-only scenarios, and pooled
/// point-level precision/recall. Order-independent.
MetricsRow aggregate(const std::vector<ScenarioOutcome>& outcomes);

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

std::string metrics_csv(const MetricsTable& table);

} // namespace sonarblob
