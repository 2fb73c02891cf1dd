#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sonarblob/classify.hpp"
#include "sonarblob/cluster.hpp"
#include "sonarblob/evaluate.hpp"
#include "sonarblob/signal.hpp"
#include "sonarblob/simulate.hpp"

namespace sonarblob {

// Raw signal files: 32-bit float little-endian mono at a declared rate.
void write_f32(const std::filesystem::path& path, const std::vector<double>& samples);
std::vector<double> read_f32(const std::filesystem::path& path);

// Minimal mono IEEE-float WAV.
void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               double sample_rate_hz);
std::vector<double> read_wav(const std::filesystem::path& path, double* sample_rate_hz = nullptr);

/// Reads .f32 (declared rate) or .wav (embedded rate).
std::vector<double> read_signal(const std::filesystem::path& path, double declared_rate_hz,
                                double* rate_out = nullptr);

std::string points_csv(const std::vector<EchoPoint>& points);
std::string clusters_csv(const std::vector<EchoPoint>& points, const Clustering& clustering);
std::string reports_json(const std::vector<ClusterReport>& reports);
std::string affinity_csv(const Eigen::MatrixXd& weights);

/// Ground truth / scenario sidecar.
struct ScenarioTruth {
    std::uint64_t seed = 0;
    bool has_target = false;
    double scr_db = 0.0;
    double valid_fraction = 1.0;
    int n_pings = 0;
    double t_pri_s = 0.7;
    double segment_s = 0.09;
    double sample_rate_hz = 96000.0;
    std::vector<double> path_m;
    std::vector<int> valid_pings;
};

std::string truth_json(const ScenarioTruth& truth);
ScenarioTruth read_truth(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_file(const std::filesystem::path& path);

/// Run manifest: command, resolved config, master seed, output hashes.
struct Manifest {
    std::string command;
    std::string config_json;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs; // path, sha256
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace sonarblob
