#include "sonarblob/classify.hpp"

#include <algorithm>
#include <cmath>

#include "sonarblob/errors.hpp"

namespace sonarblob {

const char* to_string(ClusterLabel label) {
    return label == ClusterLabel::target ? "target" : "clutter";
}

double connectivity(const AffinityGraph& graph, const Eigen::VectorXd& membership) {
    if (membership.size() != graph.size())
        throw ParameterError("connectivity: membership does not match graph");
    return membership.dot(graph.weights * membership);
}

double connectivity(const AffinityGraph& graph, const std::vector<int>& members) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(graph.size());
    for (int i : members) {
        if (i < 0 || i >= graph.size())
            throw ParameterError("connectivity: member index out of range");
        b(i) = 1.0;
    }
    return connectivity(graph, b);
}

double median_entropy(std::vector<double> entropies) {
    if (entropies.empty()) throw ParameterError("median_entropy: empty cluster");
    std::sort(entropies.begin(), entropies.end());
    const std::size_t n = entropies.size();
    if (n % 2 == 1) return entropies[n / 2];
    return 0.5 * (entropies[n / 2 - 1] + entropies[n / 2]);
}

ClusterLabel decide(double connectivity, double median_entropy_bits, double eta_c,
                    double eta_h) {
    if (!std::isfinite(eta_c) || !std::isfinite(eta_h))
        throw ParameterError("decide: thresholds must be finite");
    return (connectivity > eta_c && median_entropy_bits < eta_h) ? ClusterLabel::target
                                                                 : ClusterLabel::clutter;
}

namespace {

// linearly interpolated empirical quantile over sorted data
double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

} // namespace

std::pair<double, double> calibrate_thresholds(
    const std::vector<std::pair<double, double>>& clutter_features, double q) {
    if (clutter_features.size() < 30)
        throw ParameterError("calibrate_thresholds: need at least 30 clutter samples");
    if (!(q > 0.0) || !(q < 1.0))
        throw ParameterError("calibrate_thresholds: q must be in (0, 1)");
    std::vector<double> conn, entr;
    conn.reserve(clutter_features.size());
    entr.reserve(clutter_features.size());
    for (const auto& [c, h] : clutter_features) {
        conn.push_back(c);
        entr.push_back(h);
    }
    return {quantile(std::move(conn), 1.0 - q), quantile(std::move(entr), q)};
}

std::vector<ClusterReport> build_reports(const AffinityGraph& graph,
                                         const Clustering& clustering,
                                         const std::vector<EchoPoint>& points,
                                         double eta_c, double eta_h) {
    if (static_cast<int>(points.size()) != graph.size() ||
        static_cast<int>(clustering.labels.size()) != graph.size())
        throw ParameterError("build_reports: sizes do not match");

    std::vector<ClusterReport> reports;
    for (int c = 0; c < clustering.k; ++c) {
        ClusterReport report;
        report.cluster_id = c;
        std::vector<double> entropies;
        for (std::size_t i = 0; i < clustering.labels.size(); ++i) {
            if (clustering.labels[i] != c) continue;
            report.member_indices.push_back(static_cast<int>(i));
            entropies.push_back(points[i].entropy_bits);
        }
        if (report.member_indices.empty()) continue; // k-means may leave a label unused
        report.size = static_cast<int>(report.member_indices.size());
        report.connectivity = connectivity(graph, report.member_indices);
        report.median_entropy_bits = median_entropy(std::move(entropies));
        report.label = decide(report.connectivity, report.median_entropy_bits, eta_c, eta_h);
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace sonarblob
