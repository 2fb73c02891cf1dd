// End-to-end checks of the command-line tool: runs the built binary through
// simulate -> detect -> evaluate -> sweep in a scratch directory and checks
// outputs, determinism, and exit codes.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "sonarblob/io.hpp"

namespace fs = std::filesystem;
using namespace sonarblob;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok   - %s\n", what.c_str());
    } else {
        std::printf("FAIL - %s\n", what.c_str());
        ++g_failures;
    }
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

const char* kTinyConfig = R"({
  "scenario": {"n_pings": 4, "segment_s": 0.03, "sigma_step_m": 0.8, "scr_db": 0.0},
  "affinity": {"v_max_mps": 12.0},
  "detect": {"spectrum_bins": 28, "k_max": 5},
  "classify": {"eta_c": 3.0, "eta_h": 4.5},
  "evaluate": {"n_target_scenarios": 2, "n_clutter_scenarios": 2},
  "seed": 7,
  "jobs": 1
})";

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-sonarblob-binary>\n");
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path root = fs::temp_directory_path() / "sonarblob_cli_test";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config_path = root / "config.json";
    write_text(config_path, kTinyConfig);
    const std::string cfg = " --config " + config_path.string();

    // --- simulate: files, layout, rerun determinism -------------------------
    const fs::path sim_a = root / "sim_a";
    const fs::path sim_b = root / "sim_b";
    check(run(bin + " simulate" + cfg + " --scenarios 2 --clutter-only 1 --out " +
              sim_a.string()) == 0,
          "simulate exits 0");
    check(fs::exists(sim_a / "scenario_0000" / "ping_001.f32"), "ping files written");
    check(fs::exists(sim_a / "scenario_0000" / "truth.json"), "truth sidecar written");
    check(fs::exists(sim_a / "manifest.json"), "simulate manifest written");

    run(bin + " simulate" + cfg + " --scenarios 2 --clutter-only 1 --out " + sim_b.string());
    bool identical = true;
    for (const auto& entry : fs::recursive_directory_iterator(sim_a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), sim_a);
        if (sha256_file(entry.path()) != sha256_file(sim_b / rel)) identical = false;
    }
    check(identical, "simulate rerun is byte-identical");

    const auto truth = read_truth(sim_a / "scenario_0000" / "truth.json");
    check(truth.has_target && truth.path_m.size() == 4, "truth sidecar content");
    const auto clutter_truth = read_truth(sim_a / "scenario_0002" / "truth.json");
    check(!clutter_truth.has_target, "clutter-only scenario marked in truth");

    // --- detect --------------------------------------------------------------
    const fs::path det = root / "det";
    check(run(bin + " detect" + cfg + " --in " + sim_a.string() + " --out " + det.string() +
              " --dump-affinity") == 0,
          "detect exits 0");
    check(fs::exists(det / "scenario_0000" / "points.csv") &&
              fs::exists(det / "scenario_0000" / "clusters.csv") &&
              fs::exists(det / "scenario_0000" / "reports.json"),
          "detect artifacts written");
    const std::string points = read_text(det / "scenario_0000" / "points.csv");
    check(points.rfind("ping,range_m,mf_value,entropy_bits\n", 0) == 0,
          "points.csv header matches the interface");
    const std::string clusters = read_text(det / "scenario_0000" / "clusters.csv");
    check(clusters.rfind("point_index,ping,range_m,cluster_label\n", 0) == 0,
          "clusters.csv header matches the interface");

    // --- evaluate ------------------------------------------------------------
    const fs::path metrics = root / "metrics.csv";
    check(run(bin + " evaluate" + cfg + " --detections " + det.string() + " --truth " +
              sim_a.string() + " --out " + metrics.string()) == 0,
          "evaluate exits 0");
    const std::string table = read_text(metrics);
    check(table.find("p_d") != std::string::npos &&
              std::count(table.begin(), table.end(), '\n') == 2,
          "evaluate emits a single metrics row");

    // --- sweep: deterministic bytes ------------------------------------------
    const fs::path sweep_a = root / "sweep_a";
    const fs::path sweep_b = root / "sweep_b";
    check(run(bin + " sweep" + cfg + " --eta-c 1,4 --eta-h 2,3.5,5 --out " +
              sweep_a.string()) == 0,
          "sweep exits 0");
    run(bin + " sweep" + cfg + " --eta-c 1,4 --eta-h 2,3.5,5 --out " + sweep_b.string());
    check(read_text(sweep_a / "metrics.csv") == read_text(sweep_b / "metrics.csv"),
          "sweep rerun produces identical CSV bytes");
    check(read_text(sweep_a / "manifest.json") == read_text(sweep_b / "manifest.json"),
          "sweep rerun produces identical manifests");
    const std::string sweep_csv = read_text(sweep_a / "metrics.csv");
    check(std::count(sweep_csv.begin(), sweep_csv.end(), '\n') == 7,
          "sweep emits one row per grid cell");

    // --- calibrate -------------------------------------------------------------
    const fs::path cal_sim = root / "cal_sim";
    const fs::path cal_det = root / "cal_det";
    run(bin + " simulate" + cfg + " --scenarios 0 --clutter-only 30 --out " + cal_sim.string());
    run(bin + " detect" + cfg + " --in " + cal_sim.string() + " --out " + cal_det.string());
    check(run(bin + " calibrate" + cfg + " --detections " + cal_det.string()) == 0,
          "calibrate exits 0 with enough clutter clusters");
    check(run(bin + " calibrate" + cfg + " --detections " + det.string()) == 1,
          "calibrate with too few samples exits 1");

    // --- error paths ----------------------------------------------------------
    const fs::path bad_config = root / "bad.json";
    write_text(bad_config, R"({"detect": {"eta_mf": -5}})");
    check(run(bin + " sweep --config " + bad_config.string()) == 1,
          "invalid parameter exits 1");
    write_text(bad_config, "{broken");
    check(run(bin + " sweep --config " + bad_config.string()) == 1, "broken JSON exits 1");
    check(run(bin + " detect" + cfg + " --in " + (root / "missing").string()) == 2,
          "missing input exits 2");
    check(run(bin + " evaluate" + cfg + " --detections " + (root / "missing").string()) == 2,
          "missing detections exit 2");

    std::printf("%s\n", g_failures == 0 ? "cli tests passed" : "cli tests FAILED");
    return g_failures == 0 ? 0 : 1;
}
