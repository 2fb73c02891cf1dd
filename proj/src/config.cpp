#include "sonarblob/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "sonarblob/errors.hpp"

namespace sonarblob {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_section(const json& root, const char* name, const auto& fn) {
    if (!root.contains(name)) return;
    const json& j = root.at(name);
    if (!j.is_object()) throw ParameterError(std::string("config: ") + name + " must be an object");
    fn(j);
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParameterError("config: top level must be an object");

    RunConfig c;
    parse_section(root, "chirp", [&](const json& j) {
        maybe(j, "f_min_hz", c.chirp.f_min_hz);
        maybe(j, "f_max_hz", c.chirp.f_max_hz);
        maybe(j, "duration_s", c.chirp.duration_s);
        maybe(j, "sample_rate_hz", c.chirp.sample_rate_hz);
        maybe(j, "sound_speed_mps", c.chirp.sound_speed_mps);
    });
    parse_section(root, "affinity", [&](const json& j) {
        maybe(j, "alpha", c.affinity.alpha);
        maybe(j, "beta", c.affinity.beta);
        maybe(j, "tau", c.affinity.tau);
        maybe(j, "body_size_m", c.affinity.body_size_m);
        maybe(j, "v_max_mps", c.affinity.v_max_mps);
        maybe(j, "t_pri_s", c.affinity.t_pri_s);
        maybe(j, "value_bins", c.affinity.value_bins);
        maybe(j, "skip_threshold", c.affinity.skip_threshold);
        maybe(j, "weight_floor", c.affinity.weight_floor);
    });
    parse_section(root, "scenario", [&](const json& j) {
        maybe(j, "n_pings", c.scenario.n_pings);
        maybe(j, "t_pri_s", c.scenario.t_pri_s);
        maybe(j, "segment_s", c.scenario.segment_s);
        maybe(j, "sigma_step_m", c.scenario.sigma_step_m);
        maybe(j, "scr_db", c.scenario.scr_db);
        maybe(j, "valid_fraction", c.scenario.valid_fraction);
        maybe(j, "has_target", c.scenario.has_target);
        maybe(j, "additive_target", c.scenario.additive_target);
    });
    parse_section(root, "clutter", [&](const json& j) {
        maybe(j, "noise_floor", c.clutter.noise_floor);
        maybe(j, "scatterer_rate_hz", c.clutter.scatterer_rate_hz);
        maybe(j, "rayleigh_amp", c.clutter.rayleigh_amp);
    });
    parse_section(root, "detect", [&](const json& j) {
        maybe(j, "eta_mf", c.detect.eta_mf);
        maybe(j, "merge_radius_m", c.detect.merge_radius_m);
        maybe(j, "spectrum_bins", c.detect.spectrum_bins);
        maybe(j, "k_max", c.detect.k_max);
        maybe(j, "epsilon", c.detect.epsilon);
    });
    parse_section(root, "classify", [&](const json& j) {
        maybe(j, "eta_c", c.classify.eta_c);
        maybe(j, "eta_h", c.classify.eta_h);
    });
    parse_section(root, "evaluate", [&](const json& j) {
        maybe(j, "truth_gate_m", c.evaluate.truth_gate_m);
        maybe(j, "n_target_scenarios", c.evaluate.n_target_scenarios);
        maybe(j, "n_clutter_scenarios", c.evaluate.n_clutter_scenarios);
    });
    maybe(root, "seed", c.seed);
    maybe(root, "jobs", c.jobs);

    // keep the two PRI fields in lockstep unless both were given explicitly
    if (root.contains("affinity") && root.at("affinity").contains("t_pri_s") &&
        !(root.contains("scenario") && root.at("scenario").contains("t_pri_s")))
        c.scenario.t_pri_s = c.affinity.t_pri_s;
    if (root.contains("scenario") && root.at("scenario").contains("t_pri_s") &&
        !(root.contains("affinity") && root.at("affinity").contains("t_pri_s")))
        c.affinity.t_pri_s = c.scenario.t_pri_s;

    c.chirp.validate();
    c.affinity.validate();
    if (c.detect.spectrum_bins < 1) throw ParameterError("config: spectrum_bins must be >= 1");
    if (c.detect.k_max < 1) throw ParameterError("config: k_max must be >= 1");
    if (!(c.detect.eta_mf > 0.0)) throw ParameterError("config: eta_mf must be positive");
    if (!(c.detect.merge_radius_m > 0.0))
        throw ParameterError("config: merge_radius_m must be positive");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& c) {
    ordered_json j;
    j["chirp"] = {{"f_min_hz", c.chirp.f_min_hz},
                  {"f_max_hz", c.chirp.f_max_hz},
                  {"duration_s", c.chirp.duration_s},
                  {"sample_rate_hz", c.chirp.sample_rate_hz},
                  {"sound_speed_mps", c.chirp.sound_speed_mps}};
    j["affinity"] = {{"alpha", c.affinity.alpha},
                     {"beta", c.affinity.beta},
                     {"tau", c.affinity.tau},
                     {"body_size_m", c.affinity.body_size_m},
                     {"v_max_mps", c.affinity.v_max_mps},
                     {"t_pri_s", c.affinity.t_pri_s},
                     {"value_bins", c.affinity.value_bins},
                     {"skip_threshold", c.affinity.skip_threshold},
                     {"weight_floor", c.affinity.weight_floor}};
    j["scenario"] = {{"n_pings", c.scenario.n_pings},
                     {"t_pri_s", c.scenario.t_pri_s},
                     {"segment_s", c.scenario.segment_s},
                     {"sigma_step_m", c.scenario.sigma_step_m},
                     {"scr_db", c.scenario.scr_db},
                     {"valid_fraction", c.scenario.valid_fraction},
                     {"has_target", c.scenario.has_target},
                     {"additive_target", c.scenario.additive_target}};
    j["clutter"] = {{"noise_floor", c.clutter.noise_floor},
                    {"scatterer_rate_hz", c.clutter.scatterer_rate_hz},
                    {"rayleigh_amp", c.clutter.rayleigh_amp}};
    j["detect"] = {{"eta_mf", c.detect.eta_mf},
                   {"merge_radius_m", c.detect.merge_radius_m},
                   {"spectrum_bins", c.detect.spectrum_bins},
                   {"k_max", c.detect.k_max},
                   {"epsilon", c.detect.epsilon}};
    j["classify"] = {{"eta_c", c.classify.eta_c}, {"eta_h", c.classify.eta_h}};
    j["evaluate"] = {{"truth_gate_m", c.evaluate.truth_gate_m},
                     {"n_target_scenarios", c.evaluate.n_target_scenarios},
                     {"n_clutter_scenarios", c.evaluate.n_clutter_scenarios}};
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j.dump(2);
}

} // namespace sonarblob
