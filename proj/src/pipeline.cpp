#include "sonarblob/pipeline.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "sonarblob/errors.hpp"
#include "sonarblob/rng.hpp"

namespace sonarblob {

namespace {

constexpr std::uint64_t kStreamKmeans = 103;

AffinityGraph singleton_graph() {
    AffinityGraph g;
    g.weights = Eigen::MatrixXd::Constant(1, 1, 1.0);
    g.adjacency = Eigen::MatrixXd::Zero(1, 1);
    g.degree = Eigen::VectorXd::Zero(1);
    g.laplacian = Eigen::MatrixXd::Identity(1, 1);
    return g;
}

} // namespace

DetectionArtifacts detect_block(const std::vector<PingRecord>& pings, const RunConfig& config,
                                std::uint64_t seed) {
    DetectionArtifacts art;
    const auto replica = make_chirp(config.chirp);

    for (const auto& ping : pings) {
        const auto mf = matched_filter(ping, replica);
        auto detections = threshold_detect(mf, config.detect.eta_mf, ping.ping, config.chirp,
                                           config.detect.merge_radius_m);
        for (auto& point : detections) {
            point.spectrum =
                extract_spectrum(ping, point.range_m, config.chirp, config.detect.spectrum_bins);
            point.entropy_bits = spectral_entropy(point.spectrum);
            art.points.push_back(std::move(point));
        }
    }

    const int n = static_cast<int>(art.points.size());
    if (n == 0) return art;

    art.graph = (n == 1) ? singleton_graph() : build_graph(art.points, config.affinity);
    const int k_max = std::min(config.detect.k_max, n);
    art.clustering = select_model_order(art.graph, k_max, config.detect.epsilon,
                                        derive_seed(seed, kStreamKmeans));
    art.reports = build_reports(art.graph, art.clustering, art.points, config.classify.eta_c,
                                config.classify.eta_h);
    return art;
}

ScenarioFeatures scenario_features(std::uint64_t scenario_seed, bool has_target,
                                   const RunConfig& config) {
    ScenarioParams params = config.scenario;
    params.has_target = has_target;

    const Scenario scenario = make_scenario(scenario_seed, params, config.chirp);
    const SyntheticClutter clutter(config.chirp, config.clutter);

    std::vector<PingRecord> pings;
    pings.reserve(static_cast<std::size_t>(params.n_pings));
    for (int p = 1; p <= params.n_pings; ++p)
        pings.push_back(synth_ping(scenario, p, config.chirp, clutter));

    const DetectionArtifacts art = detect_block(pings, config, scenario_seed);

    ScenarioFeatures features;
    features.target_present = has_target;

    GroundTruth truth{scenario.path_m, config.evaluate.truth_gate_m};
    std::vector<bool> in_gate(art.points.size(), false);
    if (has_target) {
        for (std::size_t i = 0; i < art.points.size(); ++i) {
            in_gate[i] = point_is_target(art.points[i], truth);
            if (in_gate[i]) ++features.true_target_points;
        }
    }

    for (const auto& report : art.reports) {
        ClusterFeatures cf;
        cf.connectivity = report.connectivity;
        cf.median_entropy_bits = report.median_entropy_bits;
        cf.size = report.size;
        for (int idx : report.member_indices)
            if (in_gate[static_cast<std::size_t>(idx)]) ++cf.members_in_gate;
        features.clusters.push_back(cf);
    }
    return features;
}

ScenarioOutcome score_features(const ScenarioFeatures& features, double eta_c, double eta_h) {
    ScenarioOutcome out;
    out.target_present = features.target_present;

    bool any_target_label = false;
    for (const auto& cluster : features.clusters) {
        if (decide(cluster.connectivity, cluster.median_entropy_bits, eta_c, eta_h) !=
            ClusterLabel::target)
            continue;
        any_target_label = true;
        out.n_tp += cluster.members_in_gate;
        out.n_fp += cluster.size - cluster.members_in_gate;
        if (features.target_present) {
            if (2 * cluster.members_in_gate >= cluster.size)
                out.true_detection = true;
            else
                out.false_alarm = true;
        }
    }

    if (features.target_present) {
        out.miss = !out.true_detection;
        out.n_fn = features.true_target_points - out.n_tp;
    } else {
        out.false_alarm = any_target_label;
        out.correct_rejection = !any_target_label;
    }
    return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::vector<double> axis_or(const std::vector<double>& axis, double fallback) {
    return axis.empty() ? std::vector<double>{fallback} : axis;
}

struct SimCell {
    double scr_db, valid_fraction, alpha, beta, tau;
};

} // namespace

MetricsTable run_sweep(const RunConfig& config, const SweepGrid& grid) {
    const auto scrs = axis_or(grid.scr_db, config.scenario.scr_db);
    const auto fractions = axis_or(grid.valid_fraction, config.scenario.valid_fraction);
    const auto alphas = axis_or(grid.alpha, config.affinity.alpha);
    const auto betas = axis_or(grid.beta, config.affinity.beta);
    const auto taus = axis_or(grid.tau, config.affinity.tau);
    const auto eta_cs = axis_or(grid.eta_c, config.classify.eta_c);
    const auto eta_hs = axis_or(grid.eta_h, config.classify.eta_h);

    const int n_target = config.evaluate.n_target_scenarios;
    const int n_clutter = config.evaluate.n_clutter_scenarios;

    // Clutter-only features depend on (alpha, beta, tau) but not on the
    // scenario axes, so they are cached per affinity triple.
    std::vector<std::pair<std::array<double, 3>, std::vector<ScenarioFeatures>>> clutter_cache;

    MetricsTable table;
    for (double scr : scrs)
        for (double fraction : fractions)
            for (double alpha : alphas)
                for (double beta : betas)
                    for (double tau : taus) {
                        RunConfig cell = config;
                        cell.scenario.scr_db = scr;
                        cell.scenario.valid_fraction = fraction;
                        cell.affinity.alpha = alpha;
                        cell.affinity.beta = beta;
                        cell.affinity.tau = tau;

                        std::vector<ScenarioFeatures> target_features(
                            static_cast<std::size_t>(n_target));
                        parallel_for(static_cast<std::size_t>(n_target), config.jobs,
                                     [&](std::size_t i) {
                                         target_features[i] = scenario_features(
                                             derive_seed(config.seed, kTargetScenarioStream, i),
                                             true, cell);
                                     });

                        const std::array<double, 3> key{alpha, beta, tau};
                        const std::vector<ScenarioFeatures>* clutter_features = nullptr;
                        for (const auto& [k, v] : clutter_cache)
                            if (k == key) { clutter_features = &v; break; }
                        if (!clutter_features) {
                            std::vector<ScenarioFeatures> fresh(
                                static_cast<std::size_t>(n_clutter));
                            parallel_for(static_cast<std::size_t>(n_clutter), config.jobs,
                                         [&](std::size_t i) {
                                             fresh[i] = scenario_features(
                                                 derive_seed(config.seed, kClutterScenarioStream, i),
                                                 false, cell);
                                         });
                            clutter_cache.emplace_back(key, std::move(fresh));
                            clutter_features = &clutter_cache.back().second;
                        }

                        for (double eta_c : eta_cs)
                            for (double eta_h : eta_hs) {
                                std::vector<ScenarioOutcome> outcomes;
                                outcomes.reserve(static_cast<std::size_t>(n_target + n_clutter));
                                for (const auto& f : target_features)
                                    outcomes.push_back(score_features(f, eta_c, eta_h));
                                for (const auto& f : *clutter_features)
                                    outcomes.push_back(score_features(f, eta_c, eta_h));
                                MetricsRow row = aggregate(outcomes);
                                row.alpha = alpha;
                                row.beta = beta;
                                row.tau = tau;
                                row.eta_c = eta_c;
                                row.eta_h = eta_h;
                                row.scr_db = scr;
                                row.valid_fraction = fraction;
                                table.rows.push_back(row);
                            }
                    }
    return table;
}

} // namespace sonarblob
