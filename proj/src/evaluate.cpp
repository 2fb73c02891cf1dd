#include "sonarblob/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "sonarblob/errors.hpp"

namespace sonarblob {

bool point_is_target(const EchoPoint& point, const GroundTruth& truth) {
    if (point.ping < 1 || point.ping > static_cast<int>(truth.path_m.size()))
        throw ParameterError("point_is_target: ping outside the truth path");
    if (!(truth.gate_m > 0.0)) throw ParameterError("point_is_target: gate must be positive");
    return std::abs(point.range_m - truth.path_m[static_cast<std::size_t>(point.ping - 1)]) <
           truth.gate_m;
}

ScenarioOutcome score_scenario(const std::vector<ClusterReport>& reports,
                               const std::vector<EchoPoint>& points,
                               const GroundTruth* truth) {
    ScenarioOutcome out;
    out.target_present = (truth != nullptr);

    std::vector<bool> is_true_point(points.size(), false);
    long total_true_points = 0;
    if (truth) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            is_true_point[i] = point_is_target(points[i], *truth);
            if (is_true_point[i]) ++total_true_points;
        }
    }

    bool any_target_label = false;
    for (const auto& report : reports) {
        if (report.label != ClusterLabel::target) continue;
        any_target_label = true;
        long in_gate = 0;
        for (int idx : report.member_indices) {
            if (idx < 0 || idx >= static_cast<int>(points.size()))
                throw ParameterError("score_scenario: member index out of range");
            if (is_true_point[static_cast<std::size_t>(idx)]) ++in_gate;
        }
        out.n_tp += in_gate;
        out.n_fp += static_cast<long>(report.member_indices.size()) - in_gate;
        if (truth) {
            if (2 * in_gate >= static_cast<long>(report.member_indices.size()))
                out.true_detection = true;
            else
                out.false_alarm = true;
        }
    }

    if (truth) {
        out.miss = !out.true_detection;
        out.n_fn = total_true_points - out.n_tp;
    } else {
        out.false_alarm = any_target_label;
        out.correct_rejection = !any_target_label;
    }
    return out;
}

MetricsRow aggregate(const std::vector<ScenarioOutcome>& outcomes) {
    MetricsRow row;
    long detections = 0, false_alarm_scenarios = 0;
    for (const auto& o : outcomes) {
        if (o.target_present) {
            ++row.n_target_scenarios;
            if (o.true_detection) ++detections;
        } else {
            ++row.n_clutter_scenarios;
            if (o.false_alarm) ++false_alarm_scenarios;
        }
        row.n_tp += o.n_tp;
        row.n_fp += o.n_fp;
        row.n_fn += o.n_fn;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.p_d = row.n_target_scenarios > 0
                  ? static_cast<double>(detections) / row.n_target_scenarios
                  : nan;
    row.p_fa = row.n_clutter_scenarios > 0
                   ? static_cast<double>(false_alarm_scenarios) / row.n_clutter_scenarios
                   : nan;
    row.precision = (row.n_tp + row.n_fp) > 0
                        ? static_cast<double>(row.n_tp) / static_cast<double>(row.n_tp + row.n_fp)
                        : nan;
    row.recall = (row.n_tp + row.n_fn) > 0
                     ? static_cast<double>(row.n_tp) / static_cast<double>(row.n_tp + row.n_fn)
                     : nan;
    return row;
}

std::string metrics_csv(const MetricsTable& table) {
    std::string out =
        "alpha,beta,tau,eta_c,eta_h,scr_db,valid_fraction,p_d,p_fa,precision,recall,"
        "n_tp,n_fp,n_fn,n_target_scenarios,n_clutter_scenarios\n";
    char buf[512];
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                      "%ld,%ld,%ld,%d,%d\n",
                      r.alpha, r.beta, r.tau, r.eta_c, r.eta_h, r.scr_db, r.valid_fraction,
                      r.p_d, r.p_fa, r.precision, r.recall, r.n_tp, r.n_fp, r.n_fn,
                      r.n_target_scenarios, r.n_clutter_scenarios);
        out += buf;
    }
    return out;
}

} // namespace sonarblob
