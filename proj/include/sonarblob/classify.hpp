#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sonarblob/cluster.hpp"
#include "sonarblob/graph.hpp"
#include "sonarblob/signal.hpp"

namespace sonarblob {

enum class ClusterLabel { clutter, target };

const char* to_string(ClusterLabel label);

/// Per-cluster features and decision.
struct ClusterReport {
    int cluster_id = 0;
    double connectivity = 0.0;
    double median_entropy_bits = 0.0;
    int size = 0;
    ClusterLabel label = ClusterLabel::clutter;
    std::vector<int> member_indices;
};

/// c_k = b_k' W b_k; self-weights w_ii are part of the quadratic form.
double connectivity(const AffinityGraph& graph, const Eigen::VectorXd& membership);
double connectivity(const AffinityGraph& graph, const std::vector<int>& members);

/// Median of member entropies; even counts average the two central values.
double median_entropy(std::vector<double> entropies);

/// target iff connectivity > eta_c and median entropy < eta_h, both strict.
ClusterLabel decide(double connectivity, double median_entropy_bits, double eta_c,
                    double eta_h);

/// Thresholds from clutter-only feature samples (connectivity, median entropy):
/// eta_c at the (1-q) connectivity quantile, eta_h at the q entropy quantile.
/// Needs at least 30 samples.
std::pair<double, double> calibrate_thresholds(
    const std::vector<std::pair<double, double>>& clutter_features, double q = 0.05);

/// Features + decision for every nonempty cluster of a clustering.
std::vector<ClusterReport> build_reports(const AffinityGraph& graph,
                                         const Clustering& clustering,
                                         const std::vector<EchoPoint>& points,
                                         double eta_c, double eta_h);

} // namespace sonarblob
