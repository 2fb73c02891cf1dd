// sonarblob command-line front end: simulate / detect / evaluate / sweep.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sonarblob/classify.hpp"
#include "sonarblob/config.hpp"
#include "sonarblob/errors.hpp"
#include "sonarblob/evaluate.hpp"
#include "sonarblob/io.hpp"
#include "sonarblob/pipeline.hpp"
#include "sonarblob/rng.hpp"

namespace fs = std::filesystem;
using namespace sonarblob;

namespace {

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = -1;
};

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig config = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
    if (opts.seed_set) config.seed = opts.seed;
    if (opts.jobs >= 0) config.jobs = opts.jobs;
    return config;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (defaults used when absent)");
    cmd->add_option("--seed", opts.seed, "override the master seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--jobs", opts.jobs, "worker threads (0 = all cores)");
}

std::string scenario_dir_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scenario_%04d", index);
    return buf;
}

std::string ping_file_name(int ping) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ping_%03d.f32", ping);
    return buf;
}

int run_simulate(const CommonOpts& opts, const std::string& out_dir, int n_scenarios,
                 int n_clutter_only) {
    const RunConfig config = resolve_config(opts);
    fs::create_directories(out_dir);

    Manifest manifest;
    manifest.command = "simulate";
    manifest.seed = config.seed;
    manifest.config_json = config_to_json(config);

    const int total = n_scenarios + n_clutter_only;
    std::vector<std::vector<std::pair<std::string, std::string>>> hashes(
        static_cast<std::size_t>(total));

    parallel_for(static_cast<std::size_t>(total), config.jobs, [&](std::size_t idx) {
        const bool has_target = static_cast<int>(idx) < n_scenarios;
        const std::uint64_t scen_seed =
            has_target ? derive_seed(config.seed, kTargetScenarioStream, idx)
                       : derive_seed(config.seed, kClutterScenarioStream, idx - static_cast<std::size_t>(n_scenarios));

        ScenarioParams params = config.scenario;
        params.has_target = has_target;
        const Scenario scenario = make_scenario(scen_seed, params, config.chirp);
        const SyntheticClutter clutter(config.chirp, config.clutter);

        const fs::path dir = fs::path(out_dir) / scenario_dir_name(static_cast<int>(idx));
        fs::create_directories(dir);

        for (int p = 1; p <= params.n_pings; ++p) {
            const PingRecord record = synth_ping(scenario, p, config.chirp, clutter);
            const fs::path file = dir / ping_file_name(p);
            write_f32(file, record.samples);
            hashes[idx].emplace_back(file.lexically_relative(out_dir).string(),
                                     sha256_file(file));
        }

        ScenarioTruth truth;
        truth.seed = scen_seed;
        truth.has_target = has_target;
        truth.scr_db = params.scr_db;
        truth.valid_fraction = params.valid_fraction;
        truth.n_pings = params.n_pings;
        truth.t_pri_s = params.t_pri_s;
        truth.segment_s = params.segment_s;
        truth.sample_rate_hz = config.chirp.sample_rate_hz;
        truth.path_m = scenario.path_m;
        truth.valid_pings = scenario.valid_pings;
        const fs::path truth_file = dir / "truth.json";
        write_text(truth_file, truth_json(truth));
        hashes[idx].emplace_back(truth_file.lexically_relative(out_dir).string(),
                                 sha256_file(truth_file));
    });

    for (const auto& group : hashes)
        manifest.outputs.insert(manifest.outputs.end(), group.begin(), group.end());
    write_manifest(fs::path(out_dir) / "manifest.json", manifest);
    std::cout << "simulated " << total << " scenario(s) -> " << out_dir << "\n";
    return 0;
}

std::vector<PingRecord> load_block(const fs::path& dir, const RunConfig& config) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".f32" || ext == ".wav") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .f32/.wav ping files in " + dir.string());

    std::vector<PingRecord> pings;
    int index = 1;
    for (const auto& file : files) {
        PingRecord record;
        record.ping = index++;
        record.samples = read_signal(file, config.chirp.sample_rate_hz, &record.sample_rate_hz);
        if (std::abs(record.sample_rate_hz - config.chirp.sample_rate_hz) > 0.5)
            throw ParameterError("sample rate of " + file.string() + " (" +
                                 std::to_string(record.sample_rate_hz) +
                                 " Hz) does not match the configured chirp rate");
        pings.push_back(std::move(record));
    }
    return pings;
}

void detect_one(const fs::path& in_dir, const fs::path& out_dir, const RunConfig& config,
                bool dump_affinity, Manifest& manifest) {
    const auto pings = load_block(in_dir, config);
    const DetectionArtifacts art = detect_block(pings, config, config.seed);

    fs::create_directories(out_dir);
    const auto emit = [&](const fs::path& file, const std::string& text) {
        write_text(file, text);
        manifest.outputs.emplace_back(file.string(), sha256_file(file));
    };
    emit(out_dir / "points.csv", points_csv(art.points));
    emit(out_dir / "clusters.csv", clusters_csv(art.points, art.clustering));
    emit(out_dir / "reports.json", reports_json(art.reports));
    if (dump_affinity && art.graph.size() > 0)
        emit(out_dir / "affinity.csv", affinity_csv(art.graph.weights));
}

bool is_block_dir(const fs::path& dir) {
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".f32" || ext == ".wav")) return true;
    }
    return false;
}

std::vector<fs::path> scenario_subdirs(const fs::path& root) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && is_block_dir(entry.path())) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

int run_detect(const CommonOpts& opts, const std::string& in_dir, const std::string& out_dir,
               bool dump_affinity) {
    const RunConfig config = resolve_config(opts);
    if (!fs::is_directory(in_dir)) throw IoError("input directory missing: " + in_dir);

    Manifest manifest;
    manifest.command = "detect";
    manifest.seed = config.seed;
    manifest.config_json = config_to_json(config);

    fs::create_directories(out_dir);
    if (is_block_dir(in_dir)) {
        detect_one(in_dir, out_dir, config, dump_affinity, manifest);
    } else {
        const auto dirs = scenario_subdirs(in_dir);
        if (dirs.empty()) throw IoError("no ping files or scenario subdirectories in " + in_dir);
        for (const auto& dir : dirs)
            detect_one(dir, fs::path(out_dir) / dir.filename(), config, dump_affinity, manifest);
    }
    write_manifest(fs::path(out_dir) / "manifest.json", manifest);
    std::cout << "detection artifacts -> " << out_dir << "\n";
    return 0;
}

// Rebuilds scenario outcomes from detect artifacts + truth sidecars.
int run_evaluate(const CommonOpts& opts, const std::string& detections_dir,
                 const std::string& truth_dir, const std::string& out_csv) {
    const RunConfig config = resolve_config(opts);

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(detections_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "reports.json"))
            dirs.push_back(entry.path());
    if (dirs.empty() && fs::exists(fs::path(detections_dir) / "reports.json"))
        dirs.push_back(detections_dir);
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw IoError("no detection artifacts under " + detections_dir);

    std::vector<ScenarioOutcome> outcomes;
    for (const auto& dir : dirs) {
        const fs::path truth_file =
            fs::path(truth_dir.empty() ? detections_dir : truth_dir) / dir.filename() /
            "truth.json";
        if (!fs::exists(truth_file)) throw IoError("missing truth sidecar: " + truth_file.string());
        const ScenarioTruth truth = read_truth(truth_file);

        // reconstruct points and memberships from the CSV artifacts
        std::vector<EchoPoint> points;
        std::vector<int> labels;
        {
            const std::string text = read_text(dir / "clusters.csv");
            std::size_t pos = text.find('\n');
            while (pos != std::string::npos && pos + 1 < text.size()) {
                const std::size_t end = text.find('\n', pos + 1);
                const std::string line = text.substr(pos + 1, end - pos - 1);
                pos = end;
                if (line.empty()) continue;
                EchoPoint p;
                long idx = 0;
                int label = 0;
                if (std::sscanf(line.c_str(), "%ld,%d,%lf,%d", &idx, &p.ping, &p.range_m,
                                &label) != 4)
                    throw IoError("malformed clusters.csv row in " + dir.string());
                points.push_back(p);
                labels.push_back(label);
            }
        }

        std::vector<ClusterReport> reports;
        {
            const std::string text = read_text(dir / "reports.json");
            auto arr = nlohmann::json::parse(text);
            for (const auto& item : arr) {
                ClusterReport r;
                r.cluster_id = item.at("cluster_id").get<int>();
                r.connectivity = item.at("connectivity").get<double>();
                r.median_entropy_bits = item.at("median_entropy_bits").get<double>();
                r.size = item.at("size").get<int>();
                r.label = item.at("label").get<std::string>() == "target"
                              ? ClusterLabel::target
                              : ClusterLabel::clutter;
                for (std::size_t i = 0; i < labels.size(); ++i)
                    if (labels[i] == r.cluster_id) r.member_indices.push_back(static_cast<int>(i));
                reports.push_back(std::move(r));
            }
        }

        GroundTruth gt{truth.path_m, config.evaluate.truth_gate_m};
        outcomes.push_back(score_scenario(reports, points, truth.has_target ? &gt : nullptr));
    }

    MetricsTable table;
    MetricsRow row = aggregate(outcomes);
    row.alpha = config.affinity.alpha;
    row.beta = config.affinity.beta;
    row.tau = config.affinity.tau;
    row.eta_c = config.classify.eta_c;
    row.eta_h = config.classify.eta_h;
    row.scr_db = config.scenario.scr_db;
    row.valid_fraction = config.scenario.valid_fraction;
    table.rows.push_back(row);

    const std::string csv = metrics_csv(table);
    if (out_csv.empty()) {
        std::cout << csv;
    } else {
        write_text(out_csv, csv);
        Manifest manifest;
        manifest.command = "evaluate";
        manifest.seed = config.seed;
        manifest.config_json = config_to_json(config);
        manifest.outputs.emplace_back(out_csv, sha256_file(out_csv));
        write_manifest(fs::path(out_csv).parent_path() / "manifest.json", manifest);
    }
    return 0;
}

// Offline threshold learning from clutter-only detection artifacts.
int run_calibrate(const CommonOpts& opts, const std::string& detections_dir, double quantile) {
    const RunConfig config = resolve_config(opts);
    (void)config;

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(detections_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "reports.json"))
            dirs.push_back(entry.path());
    if (dirs.empty() && fs::exists(fs::path(detections_dir) / "reports.json"))
        dirs.push_back(detections_dir);
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw IoError("no detection artifacts under " + detections_dir);

    std::vector<std::pair<double, double>> features;
    for (const auto& dir : dirs) {
        const auto arr = nlohmann::json::parse(read_text(dir / "reports.json"));
        for (const auto& item : arr)
            features.emplace_back(item.at("connectivity").get<double>(),
                                  item.at("median_entropy_bits").get<double>());
    }
    const auto [eta_c, eta_h] = calibrate_thresholds(features, quantile);
    nlohmann::ordered_json out{{"eta_c", eta_c},
                               {"eta_h", eta_h},
                               {"quantile", quantile},
                               {"n_clutter_clusters", features.size()}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        values.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return values;
}

int run_sweep_cmd(const CommonOpts& opts, const std::string& out_dir,
                  const std::map<std::string, std::string>& axes) {
    const RunConfig config = resolve_config(opts);
    SweepGrid grid;
    for (const auto& [name, spec] : axes) {
        if (spec.empty()) continue;
        auto values = parse_grid(spec);
        if (name == "eta-c") grid.eta_c = values;
        else if (name == "eta-h") grid.eta_h = values;
        else if (name == "scr-db") grid.scr_db = values;
        else if (name == "valid-fraction") grid.valid_fraction = values;
        else if (name == "alpha") grid.alpha = values;
        else if (name == "beta") grid.beta = values;
        else if (name == "tau") grid.tau = values;
    }

    const MetricsTable table = run_sweep(config, grid);
    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / "metrics.csv";
    write_text(csv_path, metrics_csv(table));

    Manifest manifest;
    manifest.command = "sweep";
    manifest.seed = config.seed;
    manifest.config_json = config_to_json(config);
    manifest.outputs.emplace_back("metrics.csv", sha256_file(csv_path));
    write_manifest(fs::path(out_dir) / "manifest.json", manifest);
    std::cout << "metrics -> " << csv_path.string() << " (" << table.rows.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"active-sonar echo-train blob detection and evaluation"};
    app.require_subcommand(1);

    CommonOpts sim_opts, det_opts, eval_opts, sweep_opts;

    auto* sim = app.add_subcommand("simulate", "generate seeded synthetic scenarios");
    add_common(sim, sim_opts);
    std::string sim_out = "scenarios";
    int sim_n = 1, sim_clutter = 0;
    sim->add_option("--out", sim_out, "output directory");
    sim->add_option("--scenarios", sim_n, "number of target scenarios");
    sim->add_option("--clutter-only", sim_clutter, "number of clutter-only scenarios");

    auto* det = app.add_subcommand("detect", "run the detection chain on signal files");
    add_common(det, det_opts);
    std::string det_in, det_out = "detections";
    bool dump_affinity = false;
    det->add_option("--in", det_in, "ping directory or root of scenario_* dirs")->required();
    det->add_option("--out", det_out, "output directory");
    det->add_flag("--dump-affinity", dump_affinity, "also write the dense affinity matrix");

    auto* eval = app.add_subcommand("evaluate", "score detections against ground truth");
    add_common(eval, eval_opts);
    std::string eval_det, eval_truth, eval_out;
    eval->add_option("--detections", eval_det, "root of per-scenario detection artifacts")
        ->required();
    eval->add_option("--truth", eval_truth, "root of truth sidecars (default: detections root)");
    eval->add_option("--out", eval_out, "metrics CSV path (default: stdout)");

    CommonOpts cal_opts;
    auto* cal = app.add_subcommand("calibrate",
                                   "derive eta_c/eta_h from clutter-only detections");
    add_common(cal, cal_opts);
    std::string cal_det;
    double cal_quantile = 0.05;
    cal->add_option("--detections", cal_det, "root of clutter-only detection artifacts")
        ->required();
    cal->add_option("--quantile", cal_quantile, "tail fraction of clutter features");

    auto* sweep = app.add_subcommand("sweep", "simulate + detect + score over a parameter grid");
    add_common(sweep, sweep_opts);
    std::string sweep_out = "sweep";
    std::map<std::string, std::string> axes{{"eta-c", ""},    {"eta-h", ""},
                                            {"scr-db", ""},   {"valid-fraction", ""},
                                            {"alpha", ""},    {"beta", ""},
                                            {"tau", ""}};
    sweep->add_option("--out", sweep_out, "output directory");
    for (auto& [name, value] : axes)
        sweep->add_option("--" + name, value, "comma-separated grid values");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return run_simulate(sim_opts, sim_out, sim_n, sim_clutter);
        if (det->parsed()) return run_detect(det_opts, det_in, det_out, dump_affinity);
        if (eval->parsed()) return run_evaluate(eval_opts, eval_det, eval_truth, eval_out);
        if (cal->parsed()) return run_calibrate(cal_opts, cal_det, cal_quantile);
        if (sweep->parsed()) return run_sweep_cmd(sweep_opts, sweep_out, axes);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
