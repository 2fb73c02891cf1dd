#include "sonarblob/io.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "sonarblob/errors.hpp"

namespace sonarblob {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little,
              "raw float I/O assumes a little-endian host");

void write_f32(const std::filesystem::path& path, const std::vector<double>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    std::vector<float> buf(samples.begin(), samples.end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_f32(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open: " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % sizeof(float) != 0)
        throw IoError("not a float32 stream: " + path.string());
    in.seekg(0);
    std::vector<float> buf(bytes / sizeof(float));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("read failed: " + path.string());
    return {buf.begin(), buf.end()};
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}
void put_u16(std::ofstream& out, std::uint16_t v) {
    out.write(reinterpret_cast<const char*>(&v), 2);
}

} // namespace

void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               double sample_rate_hz) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    const auto rate = static_cast<std::uint32_t>(sample_rate_hz);
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * sizeof(float));
    out.write("RIFF", 4);
    put_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, 3); // IEEE float
    put_u16(out, 1); // mono
    put_u32(out, rate);
    put_u32(out, rate * sizeof(float));
    put_u16(out, sizeof(float));
    put_u16(out, 32);
    out.write("data", 4);
    put_u32(out, data_bytes);
    std::vector<float> buf(samples.begin(), samples.end());
    out.write(reinterpret_cast<const char*>(buf.data()), data_bytes);
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_wav(const std::filesystem::path& path, double* sample_rate_hz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    char riff[4], wave[4];
    std::uint32_t riff_size = 0;
    in.read(riff, 4);
    in.read(reinterpret_cast<char*>(&riff_size), 4);
    in.read(wave, 4);
    if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
        throw IoError("not a WAV file: " + path.string());

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::vector<char> data;
    while (in) {
        char id[4];
        std::uint32_t size = 0;
        in.read(id, 4);
        in.read(reinterpret_cast<char*>(&size), 4);
        if (!in) break;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            std::vector<char> fmt(size);
            in.read(fmt.data(), size);
            if (size < 16) throw IoError("malformed fmt chunk: " + path.string());
            std::memcpy(&format, fmt.data(), 2);
            std::memcpy(&channels, fmt.data() + 2, 2);
            std::memcpy(&rate, fmt.data() + 4, 4);
            std::memcpy(&bits, fmt.data() + 14, 2);
        } else if (std::memcmp(id, "data", 4) == 0) {
            data.resize(size);
            in.read(data.data(), size);
        } else {
            in.seekg(size + (size & 1), std::ios::cur);
        }
    }
    if (format != 3 || channels != 1 || bits != 32)
        throw IoError("unsupported WAV layout (need mono float32): " + path.string());
    if (sample_rate_hz) *sample_rate_hz = rate;
    std::vector<double> samples(data.size() / sizeof(float));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        float v;
        std::memcpy(&v, data.data() + i * sizeof(float), sizeof(float));
        samples[i] = v;
    }
    return samples;
}

std::vector<double> read_signal(const std::filesystem::path& path, double declared_rate_hz,
                                double* rate_out) {
    if (path.extension() == ".wav") return read_wav(path, rate_out);
    if (rate_out) *rate_out = declared_rate_hz;
    return read_f32(path);
}

std::string points_csv(const std::vector<EchoPoint>& points) {
    std::string out = "ping,range_m,mf_value,entropy_bits\n";
    char buf[160];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.9g,%.6f\n", p.ping, p.range_m, p.mf_value,
                      p.entropy_bits);
        out += buf;
    }
    return out;
}

std::string clusters_csv(const std::vector<EchoPoint>& points, const Clustering& clustering) {
    if (points.size() != clustering.labels.size())
        throw ParameterError("clusters_csv: clustering does not match point cloud");
    std::string out = "point_index,ping,range_m,cluster_label\n";
    char buf[160];
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%d,%.6f,%d\n", i, points[i].ping,
                      points[i].range_m, clustering.labels[i]);
        out += buf;
    }
    return out;
}

std::string reports_json(const std::vector<ClusterReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back({{"cluster_id", r.cluster_id},
                       {"connectivity", r.connectivity},
                       {"median_entropy_bits", r.median_entropy_bits},
                       {"size", r.size},
                       {"label", to_string(r.label)}});
    }
    return arr.dump(2) + "\n";
}

std::string affinity_csv(const Eigen::MatrixXd& weights) {
    std::string out;
    char buf[48];
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < weights.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), j + 1 < weights.cols() ? "%.9g," : "%.9g\n",
                          weights(i, j));
            out += buf;
        }
    }
    return out;
}

std::string truth_json(const ScenarioTruth& truth) {
    ordered_json j;
    j["seed"] = truth.seed;
    j["has_target"] = truth.has_target;
    j["scr_db"] = truth.scr_db;
    j["valid_fraction"] = truth.valid_fraction;
    j["n_pings"] = truth.n_pings;
    j["t_pri_s"] = truth.t_pri_s;
    j["segment_s"] = truth.segment_s;
    j["sample_rate_hz"] = truth.sample_rate_hz;
    j["path_m"] = truth.path_m;
    j["valid_pings"] = truth.valid_pings;
    return j.dump(2) + "\n";
}

ScenarioTruth read_truth(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw IoError("truth sidecar unreadable: " + path.string() + ": " + e.what());
    }
    ScenarioTruth t;
    try {
        t.seed = j.at("seed").get<std::uint64_t>();
        t.has_target = j.at("has_target").get<bool>();
        t.scr_db = j.at("scr_db").get<double>();
        t.valid_fraction = j.at("valid_fraction").get<double>();
        t.n_pings = j.at("n_pings").get<int>();
        t.t_pri_s = j.at("t_pri_s").get<double>();
        t.segment_s = j.at("segment_s").get<double>();
        t.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        t.path_m = j.at("path_m").get<std::vector<double>>();
        t.valid_pings = j.at("valid_pings").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw IoError("truth sidecar malformed: " + path.string() + ": " + e.what());
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return text;
}

std::string sha256_hex(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    const std::string bytes = read_text(path);
    return sha256_hex(bytes.data(), bytes.size());
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    ordered_json j;
    j["command"] = manifest.command;
    j["seed"] = manifest.seed;
    j["config"] = json::parse(manifest.config_json);
    ordered_json outputs = ordered_json::array();
    for (const auto& [file, hash] : manifest.outputs)
        outputs.push_back({{"path", file}, {"sha256", hash}});
    j["outputs"] = outputs;
    write_text(path, j.dump(2) + "\n");
}

} // namespace sonarblob
